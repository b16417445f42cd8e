#include "blasts/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "blasts/format.hpp"

namespace blasts::harness {

namespace {

constexpr double kWidth = 860, kHeight = 520;
constexpr double kLeft = 70, kRight = 840, kTop = 30, kBottom = 470;

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

struct Series {
    std::string label;
    std::vector<const SummaryRow*> rows;
};

}  // namespace

std::string render_summary_svg(const SummaryTable& table) {
    // group rows by agent identity, preserving first appearance
    std::vector<Series> series;
    std::map<std::string, std::size_t> index;
    for (const auto& row : table.rows) {
        const std::string key = row.agent + '/' + row.beta_mode + '/' + row.beta;
        auto [it, fresh] = index.try_emplace(key, series.size());
        if (fresh) {
            std::string label = row.agent;
            if (row.beta_mode == "fixed")
                label += " beta=" + row.beta;
            else if (row.beta_mode == "adaptive")
                label += " adaptive";
            series.push_back({label, {}});
        }
        series[it->second].rows.push_back(&row);
    }

    double max_t = 1.0, max_y = 1.0;
    for (const auto& s : series) {
        for (const auto* r : s.rows) {
            max_t = std::max(max_t, static_cast<double>(r->t));
            max_y = std::max(max_y, r->ci95_hi);
        }
    }
    max_y *= 1.05;

    auto sx = [&](double t) { return kLeft + (kRight - kLeft) * t / max_t; };
    auto sy = [&](double v) { return kBottom - (kBottom - kTop) * v / max_y; };
    auto pt = [&](double x, double y) { return format_double(x) + ',' + format_double(y) + ' '; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + tick_label(kWidth) +
           "\" height=\"" + tick_label(kHeight) + "\" viewBox=\"0 0 860 520\">\n";
    svg += "<rect width=\"860\" height=\"520\" fill=\"white\"/>\n";

    // axes and ticks
    svg += "<g stroke=\"#444\" stroke-width=\"1\">\n";
    svg += "<line x1=\"70\" y1=\"470\" x2=\"840\" y2=\"470\"/>\n";
    svg += "<line x1=\"70\" y1=\"30\" x2=\"70\" y2=\"470\"/>\n";
    svg += "</g>\n";
    svg += "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#222\">\n";
    for (int i = 0; i <= 4; ++i) {
        const double tv = max_t * i / 4.0;
        const double yv = max_y * i / 4.0;
        svg += "<line x1=\"" + format_double(sx(tv)) + "\" y1=\"470\" x2=\"" + format_double(sx(tv)) +
               "\" y2=\"475\" stroke=\"#444\"/>\n";
        svg += "<text x=\"" + format_double(sx(tv)) + "\" y=\"490\" text-anchor=\"middle\">" +
               tick_label(tv) + "</text>\n";
        svg += "<line x1=\"65\" y1=\"" + format_double(sy(yv)) + "\" x2=\"70\" y2=\"" +
               format_double(sy(yv)) + "\" stroke=\"#444\"/>\n";
        svg += "<text x=\"60\" y=\"" + format_double(sy(yv) + 4) + "\" text-anchor=\"end\">" +
               tick_label(yv) + "</text>\n";
    }
    svg += "<text x=\"455\" y=\"512\" text-anchor=\"middle\">t</text>\n";
    svg += "<text x=\"18\" y=\"250\" text-anchor=\"middle\" transform=\"rotate(-90 18 250)\">"
           "mean cumulative regret</text>\n";
    svg += "</g>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
        const std::size_t stride = std::max<std::size_t>(1, s.rows.size() / 400);

        std::string band = "<polygon fill=\"" + std::string(color) + "\" fill-opacity=\"0.15\" stroke=\"none\" points=\"";
        for (std::size_t i = 0; i < s.rows.size(); i += stride)
            band += pt(sx(static_cast<double>(s.rows[i]->t)), sy(s.rows[i]->ci95_hi));
        for (std::size_t i = s.rows.size(); i-- > 0;) {
            if (i % stride == 0) band += pt(sx(static_cast<double>(s.rows[i]->t)), sy(s.rows[i]->ci95_lo));
        }
        band += "\"/>\n";
        svg += band;

        std::string line = "<polyline fill=\"none\" stroke=\"" + std::string(color) +
                           "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.rows.size(); i += stride)
            line += pt(sx(static_cast<double>(s.rows[i]->t)), sy(s.rows[i]->mean_cum_regret));
        line += "\"/>\n";
        svg += line;
    }

    // legend
    svg += "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#222\">\n";
    for (std::size_t si = 0; si < series.size(); ++si) {
        const double y = 40 + 16 * static_cast<double>(si);
        const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
        svg += "<line x1=\"80\" y1=\"" + format_double(y - 4) + "\" x2=\"104\" y2=\"" +
               format_double(y - 4) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"110\" y=\"" + format_double(y) + "\">" + series[si].label + "</text>\n";
    }
    svg += "</g>\n</svg>\n";
    return svg;
}

}  // namespace blasts::harness
