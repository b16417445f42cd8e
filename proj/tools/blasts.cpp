// Command-line front end: bandit experiments (run/sweep), standalone
// rate-distortion curves (rd-curve), and re-plotting (plot). Every option can
// also come from a flat key=value config file via --config; command-line
// flags win over file values.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "blasts/format.hpp"
#include "blasts/harness.hpp"
#include "blasts/rd.hpp"
#include "blasts/svg.hpp"

namespace harness = blasts::harness;
namespace agents = blasts::agents;
namespace bandit = blasts::bandit;
namespace rd = blasts::rd;

namespace {

struct CliOptions {
    std::string env = "bernoulli";
    std::size_t arms = 10;
    std::size_t horizon = 2000;
    std::string seeds = "10";  // count, or comma-separated list
    std::size_t samples = 64;
    std::size_t ba_iters = 100;
    double ba_tol = 1e-6;
    std::vector<double> beta;
    bool adaptive_beta = false;
    double adaptive_eps = 1e-8;
    std::string agents_list = "ts,uniform";
    double reward_sd = 1.0;
    double prior_alpha = 1.0;
    double prior_beta = 1.0;
    double prior_mean = 0.5;
    double prior_var = 1.0;
    double noise_var = 1.0;
    std::uint64_t root_seed = 0;
    std::string out = "out";
    std::size_t threads = 1;
    bool force = false;
    bool no_svg = false;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(item);
    return parts;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

bool parse_bool(const std::string& v) {
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw std::runtime_error("config: bad boolean value '" + v + "'");
}

// Flat key=value file whose keys are the long flag names without the leading
// dashes. Command-line flags override anything set here.
void apply_config_file(const std::string& path, CliOptions& opt, std::vector<double>& sweep_betas) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ':' + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        if (key == "env") opt.env = val;
        else if (key == "arms") opt.arms = std::stoull(val);
        else if (key == "horizon") opt.horizon = std::stoull(val);
        else if (key == "seeds") opt.seeds = val;
        else if (key == "samples") opt.samples = std::stoull(val);
        else if (key == "ba-iters") opt.ba_iters = std::stoull(val);
        else if (key == "ba-tol") opt.ba_tol = std::stod(val);
        else if (key == "agents") opt.agents_list = val;
        else if (key == "beta") { opt.beta.clear(); for (const auto& b : split(val, ',')) opt.beta.push_back(std::stod(b)); }
        else if (key == "betas") { sweep_betas.clear(); for (const auto& b : split(val, ',')) sweep_betas.push_back(std::stod(b)); }
        else if (key == "adaptive-beta") opt.adaptive_beta = parse_bool(val);
        else if (key == "adaptive-eps") opt.adaptive_eps = std::stod(val);
        else if (key == "reward-sd") opt.reward_sd = std::stod(val);
        else if (key == "prior-alpha") opt.prior_alpha = std::stod(val);
        else if (key == "prior-beta") opt.prior_beta = std::stod(val);
        else if (key == "prior-mean") opt.prior_mean = std::stod(val);
        else if (key == "prior-var") opt.prior_var = std::stod(val);
        else if (key == "noise-var") opt.noise_var = std::stod(val);
        else if (key == "root-seed") opt.root_seed = std::stoull(val);
        else if (key == "out") opt.out = val;
        else if (key == "threads") opt.threads = std::stoull(val);
        else if (key == "force") opt.force = parse_bool(val);
        else if (key == "no-svg") opt.no_svg = parse_bool(val);
        else throw std::runtime_error(path + ':' + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
}

// The config file must apply before CLI11 writes command-line values, so the
// flag is located by a pre-scan of argv.
std::string find_config_arg(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--config" && i + 1 < argc) return argv[i + 1];
        if (a.rfind("--config=", 0) == 0) return a.substr(9);
    }
    return "";
}

std::uint64_t parse_u64(const std::string& s, const char* what) {
    try {
        std::size_t used = 0;
        const auto v = std::stoull(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error(std::string("bad ") + what + " value '" + s + "'");
    }
}

double parse_f64(const std::string& s, const char* what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error(std::string("bad ") + what + " value '" + s + "'");
    }
}

std::vector<std::uint64_t> parse_seeds(const std::string& spec) {
    std::vector<std::uint64_t> seeds;
    if (spec.find(',') == std::string::npos) {
        return harness::seed_range(parse_u64(spec, "--seeds"));
    }
    for (const auto& tok : split(spec, ',')) seeds.push_back(parse_u64(tok, "--seeds"));
    return seeds;
}

harness::AgentSpec parse_agent(const std::string& tok, double adaptive_eps) {
    if (tok == "ts") return harness::AgentSpec::ts();
    if (tok == "uniform") return harness::AgentSpec::uniform();
    if (tok == "blasts:adaptive")
        return harness::AgentSpec::blasts(agents::BetaSchedule::adaptive(adaptive_eps));
    if (tok.rfind("blasts:", 0) == 0)
        return harness::AgentSpec::blasts(agents::BetaSchedule::fixed(parse_f64(tok.substr(7), "agent beta")));
    throw std::runtime_error("unknown agent spec '" + tok + "' (expected ts | uniform | blasts:<beta> | blasts:adaptive)");
}

harness::ExperimentConfig build_config(const CliOptions& opt, bool expand_sweep,
                                       const std::vector<double>& sweep_betas) {
    harness::ExperimentConfig cfg;
    if (opt.env == "bernoulli")
        cfg.env = bandit::BanditKind::bernoulli();
    else if (opt.env == "gaussian")
        cfg.env = bandit::BanditKind::gaussian(opt.reward_sd);
    else
        throw std::runtime_error("unknown --env '" + opt.env + "' (expected bernoulli|gaussian)");

    cfg.num_arms = opt.arms;
    cfg.horizon = opt.horizon;
    cfg.posterior_samples = opt.samples;
    cfg.ba_max_iters = opt.ba_iters;
    cfg.ba_tol = opt.ba_tol;
    cfg.seeds = parse_seeds(opt.seeds);
    cfg.root_seed = opt.root_seed;
    cfg.out_dir = opt.out;
    cfg.threads = opt.threads;
    cfg.prior.bernoulli = {opt.prior_alpha, opt.prior_beta};
    cfg.prior.gaussian = {opt.prior_mean, opt.prior_var, opt.noise_var};

    for (const auto& tok : split(opt.agents_list, ','))
        if (!tok.empty()) cfg.agents.push_back(parse_agent(tok, opt.adaptive_eps));
    for (double b : opt.beta)
        cfg.agents.push_back(harness::AgentSpec::blasts(agents::BetaSchedule::fixed(b)));
    if (opt.adaptive_beta)
        cfg.agents.push_back(harness::AgentSpec::blasts(agents::BetaSchedule::adaptive(opt.adaptive_eps)));
    if (expand_sweep)
        for (double b : sweep_betas)
            cfg.agents.push_back(harness::AgentSpec::blasts(agents::BetaSchedule::fixed(b)));
    return cfg;
}

void add_common_options(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--env", opt.env, "environment kind: bernoulli|gaussian");
    cmd->add_option("--arms", opt.arms, "number of arms");
    cmd->add_option("--horizon", opt.horizon, "steps per episode");
    cmd->add_option("--seeds", opt.seeds, "seed count, or comma-separated seed list");
    cmd->add_option("--samples", opt.samples, "posterior samples Z per step");
    cmd->add_option("--ba-iters", opt.ba_iters, "Blahut-Arimoto iteration cap");
    cmd->add_option("--ba-tol", opt.ba_tol, "Blahut-Arimoto distortion-change stop threshold");
    cmd->add_option("--agents", opt.agents_list, "comma list: ts, uniform, blasts:<beta>, blasts:adaptive");
    cmd->add_option("--beta", opt.beta, "add a fixed-beta BLASTS agent (repeatable)");
    cmd->add_flag("--adaptive-beta", opt.adaptive_beta, "add an adaptive-beta BLASTS agent");
    cmd->add_option("--adaptive-eps", opt.adaptive_eps, "epsilon guard for the adaptive-beta rule");
    cmd->add_option("--reward-sd", opt.reward_sd, "gaussian reward noise sd");
    cmd->add_option("--prior-alpha", opt.prior_alpha, "Beta prior pseudo-successes");
    cmd->add_option("--prior-beta", opt.prior_beta, "Beta prior pseudo-failures");
    cmd->add_option("--prior-mean", opt.prior_mean, "Normal prior mean");
    cmd->add_option("--prior-var", opt.prior_var, "Normal prior variance");
    cmd->add_option("--noise-var", opt.noise_var, "Normal likelihood noise variance");
    cmd->add_option("--root-seed", opt.root_seed, "root seed for stream derivation");
    cmd->add_option("--out", opt.out, "output directory");
    cmd->add_option("--threads", opt.threads, "parallel episodes");
    cmd->add_flag("--force", opt.force, "overwrite existing output files");
    cmd->add_flag("--no-svg", opt.no_svg, "skip summary.svg");
    cmd->add_option("--config", "flat key=value config file; flags override file values")
        ->expected(1);
}

int run_experiment_cmd(const CliOptions& opt, bool expand_sweep, const std::vector<double>& sweep_betas) {
    auto cfg = build_config(opt, expand_sweep, sweep_betas);
    auto result = harness::run_experiment(cfg);
    for (const auto& w : result.warnings) std::cerr << "warning: episode failed: " << w << '\n';
    if (result.trajectories.empty()) throw std::runtime_error("all episodes failed");
    auto written = harness::emit_outputs(result, cfg.out_dir, opt.force, !opt.no_svg);
    for (const auto& p : written) std::cout << "wrote " << p.string() << '\n';
    return result.warnings.empty() ? 0 : 1;
}

std::vector<double> load_weights_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    std::vector<double> w;
    double v;
    while (in >> v) w.push_back(v);
    if (w.empty()) throw std::runtime_error("no weights in " + file.string());
    return w;
}

blasts::Matrix load_matrix_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        for (const auto& tok : split(line, ',')) row.push_back(std::stod(tok));
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::runtime_error("ragged rows in " + file.string());
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("no rows in " + file.string());
    blasts::Matrix m(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows.front().size(); ++c) m(r, c) = rows[r][c];
    return m;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rate-distortion bandit agents: BLASTS, Thompson sampling, and a Blahut-Arimoto solver"};
    app.require_subcommand(1);

    CliOptions opt;

    auto* run = app.add_subcommand("run", "run a configured experiment and emit CSV/SVG outputs");
    add_common_options(run, opt);

    std::vector<double> sweep_betas;
    auto* sweep = app.add_subcommand("sweep", "expand one fixed-beta BLASTS agent per --betas entry");
    add_common_options(sweep, opt);
    sweep->add_option("--betas", sweep_betas, "comma-separated beta values")->delimiter(',');

    auto* curve = app.add_subcommand("rd-curve", "rate-distortion curve on a synthetic or file-supplied instance");
    std::vector<double> curve_betas{0.25, 0.5, 1, 2, 4, 8, 16, 32, 64, 128, 256};
    std::string weights_file, distortion_file;
    std::size_t curve_iters = 100;
    double curve_tol = 1e-6;
    std::string curve_out = "out";
    bool curve_force = false;
    curve->add_option("--betas", curve_betas, "comma-separated beta values")->delimiter(',');
    curve->add_option("--weights", weights_file, "source weights file (one probability per line)");
    curve->add_option("--distortion", distortion_file, "distortion matrix file (CSV rows)");
    curve->add_option("--ba-iters", curve_iters, "Blahut-Arimoto iteration cap");
    curve->add_option("--ba-tol", curve_tol, "distortion-change stop threshold");
    curve->add_option("--out", curve_out, "output directory");
    curve->add_flag("--force", curve_force, "overwrite existing output files");

    auto* plot = app.add_subcommand("plot", "render summary.svg from an existing summary.csv");
    std::string plot_summary = "out/summary.csv";
    std::string plot_out;
    bool plot_force = false;
    plot->add_option("--summary", plot_summary, "path to summary.csv");
    plot->add_option("--out", plot_out, "output directory (default: alongside the csv)");
    plot->add_flag("--force", plot_force, "overwrite an existing summary.svg");

    try {
        const std::string config_path = find_config_arg(argc, argv);
        if (!config_path.empty()) apply_config_file(config_path, opt, sweep_betas);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return run_experiment_cmd(opt, false, {});
        if (sweep->parsed()) {
            if (sweep_betas.empty()) throw std::runtime_error("sweep needs --betas (or a 'betas' config key)");
            return run_experiment_cmd(opt, true, sweep_betas);
        }
        if (curve->parsed()) {
            rd::SourceWeights w;
            rd::DistortionMatrix d;
            if (weights_file.empty() != distortion_file.empty())
                throw std::runtime_error("--weights and --distortion must be given together");
            if (weights_file.empty()) {
                // synthetic default: fair binary source under Hamming distortion
                w = {0.5, 0.5};
                d = blasts::Matrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
            } else {
                w = load_weights_file(weights_file);
                d = load_matrix_file(distortion_file);
            }
            auto points = rd::rd_curve(w, d, curve_betas, curve_iters, curve_tol);
            std::error_code ec;
            std::filesystem::create_directories(curve_out, ec);
            if (ec) throw std::runtime_error("cannot create " + curve_out + ": " + ec.message());
            const auto path = std::filesystem::path(curve_out) / "rdcurve.csv";
            harness::write_text_file(path, rd::rd_curve_csv(points), curve_force);
            std::cout << "wrote " << path.string() << '\n';
            return 0;
        }
        if (plot->parsed()) {
            auto table = harness::load_summary_csv(plot_summary);
            const auto dir = plot_out.empty()
                                 ? std::filesystem::path(plot_summary).parent_path()
                                 : std::filesystem::path(plot_out);
            std::error_code ec;
            if (!dir.empty()) std::filesystem::create_directories(dir, ec);
            const auto path = (dir.empty() ? std::filesystem::path(".") : dir) / "summary.svg";
            harness::write_text_file(path, harness::render_summary_svg(table), plot_force);
            std::cout << "wrote " << path.string() << '\n';
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
