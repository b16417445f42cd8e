#pragma once

// Seeded experiment runner. Every (agent, seed) episode derives its own named
// random streams from the root seed, so episodes are independent tasks: the
// runner may execute them on any number of threads and still aggregate
// byte-identical CSV output, and adding an agent to the roster never perturbs
// another agent's draws. The environment stream depends only on the seed, so
// all agents at one seed face the same sampled environment.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "blasts/agents.hpp"
#include "blasts/bandit.hpp"
#include "blasts/belief.hpp"

namespace blasts::harness {

struct AgentSpec {
    enum class Kind { ThompsonSampling, Uniform, Blasts };
    Kind kind = Kind::ThompsonSampling;
    agents::BetaSchedule schedule{};  // Blasts only

    static AgentSpec ts() { return {Kind::ThompsonSampling, {}}; }
    static AgentSpec uniform() { return {Kind::Uniform, {}}; }
    static AgentSpec blasts(agents::BetaSchedule s) { return {Kind::Blasts, s}; }

    std::string label() const;      // "ts" | "uniform" | "blasts"
    std::string beta_mode() const;  // "" | "fixed" | "adaptive"
    std::string beta_desc() const;  // fixed beta value, else ""
    std::string key() const;        // label/mode/desc identity for grouping
};

struct ExperimentConfig {
    bandit::BanditKind env = bandit::BanditKind::bernoulli();
    std::size_t num_arms = 10;
    std::size_t horizon = 2000;
    std::vector<AgentSpec> agents;
    std::size_t posterior_samples = 64;  // Z
    std::size_t ba_max_iters = 100;
    double ba_tol = 1e-6;
    std::vector<std::uint64_t> seeds;
    belief::Prior prior{};
    std::uint64_t root_seed = 0;
    std::string out_dir = "out";
    std::size_t threads = 1;
};

std::vector<std::uint64_t> seed_range(std::size_t count);

struct StepRecord {
    std::size_t t = 0;
    std::size_t action = 0;
    double reward = 0.0;
    double expected_regret = 0.0;  // against the true sampled environment
    double cum_regret = 0.0;
    std::optional<agents::StepDiagnostics> diag;  // Blasts agents only

    bool operator==(const StepRecord&) const = default;
};

struct Trajectory {
    std::size_t agent_index = 0;
    std::uint64_t seed = 0;
    std::vector<StepRecord> steps;

    bool operator==(const Trajectory&) const = default;
};

struct SummaryRow {
    std::string agent;
    std::string beta_mode;
    std::string beta;  // descriptor; empty unless a fixed-beta agent
    std::size_t t = 0;
    double mean_cum_regret = 0.0;
    double ci95_lo = 0.0;
    double ci95_hi = 0.0;
};

struct SummaryTable {
    std::vector<SummaryRow> rows;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<Trajectory> trajectories;  // agent-major, seed-minor; failures omitted
    SummaryTable summary;
    std::vector<std::string> warnings;  // one entry per failed (agent, seed)
};

void validate(const ExperimentConfig& config);

Trajectory run_episode(const ExperimentConfig& config, const AgentSpec& agent, std::uint64_t seed);

// Runs every (agent, seed) pair, in parallel when config.threads > 1; the
// merge order is fixed by the config, not by thread timing.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Per (agent, t): mean cumulative regret over seeds and the normal 95% CI
// mean +/- 1.96 * sd / sqrt(n) with the sample standard deviation.
SummaryTable summarize(const ExperimentConfig& config, const std::vector<Trajectory>& trajectories);

std::string steps_csv(const ExperimentResult& result);
std::string summary_csv(const ExperimentResult& result);

SummaryTable parse_summary_csv(const std::string& text);
SummaryTable load_summary_csv(const std::filesystem::path& file);

// Refuses to clobber an existing file unless force is set.
void write_text_file(const std::filesystem::path& file, const std::string& content, bool force);

// Writes steps.csv, summary.csv and (optionally) summary.svg under out_dir;
// returns the paths written.
std::vector<std::filesystem::path> emit_outputs(const ExperimentResult& result,
                                                const std::filesystem::path& out_dir, bool force,
                                                bool with_svg);

}  // namespace blasts::harness
