#include "blasts/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "blasts/format.hpp"
#include "blasts/rng.hpp"
#include "blasts/svg.hpp"

namespace blasts::harness {

std::string AgentSpec::label() const {
    switch (kind) {
        case Kind::ThompsonSampling: return "ts";
        case Kind::Uniform: return "uniform";
        case Kind::Blasts: return "blasts";
    }
    return "?";
}

std::string AgentSpec::beta_mode() const {
    if (kind != Kind::Blasts) return "";
    return schedule.mode == agents::BetaSchedule::Mode::Fixed ? "fixed" : "adaptive";
}

std::string AgentSpec::beta_desc() const {
    if (kind == Kind::Blasts && schedule.mode == agents::BetaSchedule::Mode::Fixed)
        return format_double(schedule.beta);
    return "";
}

std::string AgentSpec::key() const {
    std::string k = label();
    if (kind == Kind::Blasts) {
        k += '/';
        k += beta_mode();
        if (!beta_desc().empty()) {
            k += '/';
            k += beta_desc();
        }
    }
    return k;
}

std::vector<std::uint64_t> seed_range(std::size_t count) {
    std::vector<std::uint64_t> seeds(count);
    std::iota(seeds.begin(), seeds.end(), std::uint64_t{0});
    return seeds;
}

void validate(const ExperimentConfig& config) {
    if (config.horizon < 1) throw std::invalid_argument("config: horizon must be >= 1");
    if (config.agents.empty()) throw std::invalid_argument("config: need at least one agent");
    if (config.seeds.empty()) throw std::invalid_argument("config: need at least one seed");
    if (config.num_arms < 2) throw std::invalid_argument("config: need at least 2 arms");
    if (config.posterior_samples < 1) throw std::invalid_argument("config: need at least 1 posterior sample");
    if (config.ba_max_iters < 1) throw std::invalid_argument("config: ba_max_iters must be >= 1");
    if (!(config.ba_tol > 0.0)) throw std::invalid_argument("config: ba_tol must be > 0");
    if (config.threads < 1) throw std::invalid_argument("config: threads must be >= 1");
}

Trajectory run_episode(const ExperimentConfig& config, const AgentSpec& agent, std::uint64_t seed) {
    validate(config);

    // The environment stream is keyed by seed alone: every agent at this seed
    // plays the same sampled environment. Policy streams carry the agent key.
    auto env_rng = make_stream(config.root_seed, "environment", seed);
    auto belief_rng = make_stream(config.root_seed, "belief-sampling/" + agent.key(), seed);
    auto action_rng = make_stream(config.root_seed, "action-sampling/" + agent.key(), seed);

    const auto env = bandit::sample_environment(config.env, config.num_arms, env_rng);
    const auto stats = bandit::optimal_stats(env);
    auto belief = belief::new_belief(config.env, config.num_arms, config.prior);

    Trajectory traj;
    traj.seed = seed;
    traj.steps.reserve(config.horizon);
    double cum = 0.0;

    for (std::size_t t = 0; t < config.horizon; ++t) {
        StepRecord rec;
        rec.t = t;
        switch (agent.kind) {
            case AgentSpec::Kind::ThompsonSampling:
                rec.action = agents::ts_select(belief, belief_rng);
                break;
            case AgentSpec::Kind::Uniform:
                rec.action = agents::uniform_select(config.num_arms, action_rng);
                break;
            case AgentSpec::Kind::Blasts: {
                auto [action, diag] =
                    agents::blasts_select(belief, agent.schedule, config.posterior_samples,
                                          config.ba_max_iters, config.ba_tol, belief_rng);
                if (!std::isfinite(diag.rate_bits) || !std::isfinite(diag.achieved_distortion) ||
                    !std::isfinite(diag.beta_used))
                    throw std::runtime_error("run_episode: non-finite step diagnostic at t=" +
                                             std::to_string(t));
                rec.action = action;
                rec.diag = diag;
                break;
            }
        }
        rec.reward = bandit::pull(config.env, env, rec.action, action_rng);
        if (!std::isfinite(rec.reward))
            throw std::runtime_error("run_episode: non-finite reward at t=" + std::to_string(t));
        rec.expected_regret = stats.optimal_mean - env[rec.action];
        cum += rec.expected_regret;
        rec.cum_regret = cum;
        belief::update_belief(belief, rec.action, rec.reward);
        traj.steps.push_back(std::move(rec));
    }
    return traj;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    validate(config);

    struct Task {
        std::size_t agent_index;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    tasks.reserve(config.agents.size() * config.seeds.size());
    for (std::size_t ai = 0; ai < config.agents.size(); ++ai)
        for (std::uint64_t s : config.seeds) tasks.push_back({ai, s});

    std::vector<std::optional<Trajectory>> done(tasks.size());
    std::vector<std::string> errors(tasks.size());

    auto work = [&](std::size_t i) {
        const auto& task = tasks[i];
        try {
            auto traj = run_episode(config, config.agents[task.agent_index], task.seed);
            traj.agent_index = task.agent_index;
            done[i] = std::move(traj);
        } catch (const std::exception& e) {
            errors[i] = "agent=" + config.agents[task.agent_index].key() +
                        " seed=" + std::to_string(task.seed) + ": " + e.what();
        }
    };

    const std::size_t workers = std::min(config.threads, tasks.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) work(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1)) work(i);
            });
        }
        for (auto& th : pool) th.join();
    }

    ExperimentResult result;
    result.config = config;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (done[i])
            result.trajectories.push_back(std::move(*done[i]));
        else
            result.warnings.push_back(errors[i]);
    }
    result.summary = summarize(config, result.trajectories);
    return result;
}

SummaryTable summarize(const ExperimentConfig& config, const std::vector<Trajectory>& trajectories) {
    SummaryTable table;
    for (std::size_t ai = 0; ai < config.agents.size(); ++ai) {
        std::vector<const Trajectory*> group;
        for (const auto& tr : trajectories)
            if (tr.agent_index == ai) group.push_back(&tr);
        if (group.empty()) continue;
        // canonical accumulation order makes aggregation permutation-invariant
        // in the seed list, byte-for-byte
        std::sort(group.begin(), group.end(),
                  [](const Trajectory* a, const Trajectory* b) { return a->seed < b->seed; });

        const auto& spec = config.agents[ai];
        const std::size_t T = group.front()->steps.size();
        const double n = static_cast<double>(group.size());
        for (std::size_t t = 0; t < T; ++t) {
            double mean = 0.0;
            for (const auto* tr : group) mean += tr->steps[t].cum_regret;
            mean /= n;
            double var = 0.0;
            if (group.size() > 1) {
                for (const auto* tr : group) {
                    const double dev = tr->steps[t].cum_regret - mean;
                    var += dev * dev;
                }
                var /= (n - 1.0);
            }
            const double half = 1.96 * std::sqrt(var) / std::sqrt(n);
            table.rows.push_back({spec.label(), spec.beta_mode(), spec.beta_desc(), t, mean,
                                  mean - half, mean + half});
        }
    }
    return table;
}

namespace {

void append_optional(std::string& out, const std::optional<double>& v) {
    if (v) out += format_double(*v);
}

}  // namespace

std::string steps_csv(const ExperimentResult& result) {
    std::string out =
        "agent,beta_mode,beta,seed,t,action,reward,expected_regret,cum_regret,"
        "rate_bits,achieved_distortion,ba_iterations,psi_bar\n";
    for (const auto& tr : result.trajectories) {
        const auto& spec = result.config.agents[tr.agent_index];
        const std::string prefix = spec.label() + ',' + spec.beta_mode() + ',';
        for (const auto& s : tr.steps) {
            out += prefix;
            if (s.diag) out += format_double(s.diag->beta_used);
            out += ',';
            out += std::to_string(tr.seed);
            out += ',';
            out += std::to_string(s.t);
            out += ',';
            out += std::to_string(s.action);
            out += ',';
            out += format_double(s.reward);
            out += ',';
            out += format_double(s.expected_regret);
            out += ',';
            out += format_double(s.cum_regret);
            out += ',';
            if (s.diag) {
                out += format_double(s.diag->rate_bits);
                out += ',';
                out += format_double(s.diag->achieved_distortion);
                out += ',';
                out += std::to_string(s.diag->ba_iterations);
                out += ',';
                append_optional(out, s.diag->psi_bar);
            } else {
                out += ",,,";
            }
            out += '\n';
        }
    }
    return out;
}

std::string summary_csv(const ExperimentResult& result) {
    std::string out = "agent,beta_mode,beta,t,mean_cum_regret,ci95_lo,ci95_hi\n";
    for (const auto& row : result.summary.rows) {
        out += row.agent;
        out += ',';
        out += row.beta_mode;
        out += ',';
        out += row.beta;
        out += ',';
        out += std::to_string(row.t);
        out += ',';
        out += format_double(row.mean_cum_regret);
        out += ',';
        out += format_double(row.ci95_lo);
        out += ',';
        out += format_double(row.ci95_hi);
        out += '\n';
    }
    return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

double parse_num(const std::string& s, const char* what) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::runtime_error(std::string("summary.csv: bad ") + what + " value '" + s + "'");
    return v;
}

}  // namespace

SummaryTable parse_summary_csv(const std::string& text) {
    SummaryTable table;
    std::size_t pos = 0;
    bool header_seen = false;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        const std::string line = text.substr(pos, end - pos);
        pos = end + 1;
        if (line.empty()) continue;
        if (!header_seen) {
            if (line != "agent,beta_mode,beta,t,mean_cum_regret,ci95_lo,ci95_hi")
                throw std::runtime_error("summary.csv: unexpected header '" + line + "'");
            header_seen = true;
            continue;
        }
        auto f = split_csv_line(line);
        if (f.size() != 7) throw std::runtime_error("summary.csv: expected 7 fields, got line '" + line + "'");
        SummaryRow row;
        row.agent = f[0];
        row.beta_mode = f[1];
        row.beta = f[2];
        row.t = static_cast<std::size_t>(parse_num(f[3], "t"));
        row.mean_cum_regret = parse_num(f[4], "mean_cum_regret");
        row.ci95_lo = parse_num(f[5], "ci95_lo");
        row.ci95_hi = parse_num(f[6], "ci95_hi");
        table.rows.push_back(std::move(row));
    }
    if (!header_seen) throw std::runtime_error("summary.csv: empty file");
    return table;
}

SummaryTable load_summary_csv(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_summary_csv(text);
}

void write_text_file(const std::filesystem::path& file, const std::string& content, bool force) {
    if (!force && std::filesystem::exists(file))
        throw std::runtime_error(file.string() + " already exists (pass --force to overwrite)");
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    out << content;
    if (!out) throw std::runtime_error("short write to " + file.string());
}

std::vector<std::filesystem::path> emit_outputs(const ExperimentResult& result,
                                                const std::filesystem::path& out_dir, bool force,
                                                bool with_svg) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("cannot create " + out_dir.string() + ": " + ec.message());

    std::vector<std::filesystem::path> written;
    const auto steps = out_dir / "steps.csv";
    write_text_file(steps, steps_csv(result), force);
    written.push_back(steps);
    const auto summary = out_dir / "summary.csv";
    write_text_file(summary, summary_csv(result), force);
    written.push_back(summary);
    if (with_svg) {
        const auto svg = out_dir / "summary.svg";
        write_text_file(svg, render_summary_svg(result.summary), force);
        written.push_back(svg);
    }
    return written;
}

}  // namespace blasts::harness
