#include <cmath>
#include <filesystem>
#include <fstream>

#include "blasts/harness.hpp"
#include "blasts/svg.hpp"
#include "doctest.h"

namespace harness = blasts::harness;
namespace agents = blasts::agents;
namespace bandit = blasts::bandit;
using harness::AgentSpec;

namespace {

harness::ExperimentConfig small_config() {
    harness::ExperimentConfig cfg;
    cfg.env = bandit::BanditKind::bernoulli();
    cfg.num_arms = 4;
    cfg.horizon = 50;
    cfg.posterior_samples = 16;
    cfg.ba_max_iters = 50;
    cfg.ba_tol = 1e-6;
    cfg.seeds = harness::seed_range(3);
    cfg.agents = {AgentSpec::ts(), AgentSpec::uniform(),
                  AgentSpec::blasts(agents::BetaSchedule::fixed(4.0)),
                  AgentSpec::blasts(agents::BetaSchedule::adaptive())};
    return cfg;
}

std::filesystem::path fresh_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("blasts_test_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("seed_range") {
    CHECK(harness::seed_range(3) == std::vector<std::uint64_t>{0, 1, 2});
    CHECK(harness::seed_range(0).empty());
}

TEST_CASE("agent identities") {
    CHECK(AgentSpec::ts().key() == "ts");
    CHECK(AgentSpec::uniform().beta_mode() == "");
    auto fixed = AgentSpec::blasts(agents::BetaSchedule::fixed(8.0));
    CHECK(fixed.key() == "blasts/fixed/8");
    CHECK(fixed.beta_desc() == "8");
    auto adaptive = AgentSpec::blasts(agents::BetaSchedule::adaptive());
    CHECK(adaptive.key() == "blasts/adaptive");
    CHECK(adaptive.beta_desc() == "");
}

TEST_CASE("config validation") {
    auto cfg = small_config();
    cfg.seeds.clear();
    CHECK_THROWS_AS(harness::run_experiment(cfg), std::invalid_argument);
    cfg = small_config();
    cfg.agents.clear();
    CHECK_THROWS_AS(harness::run_experiment(cfg), std::invalid_argument);
    cfg = small_config();
    cfg.horizon = 0;
    CHECK_THROWS_AS(harness::run_experiment(cfg), std::invalid_argument);
}

TEST_CASE("uniform agent matches the order-statistics oracle") {
    // E[max of K uniforms] - E[mean of K uniforms]; for K=2 that is
    // 2/3 - 1/2 = 1/6 expected regret per step.
    const double oracle = 2.0 / 3.0 - 1.0 / 2.0;
    harness::ExperimentConfig cfg;
    cfg.num_arms = 2;
    cfg.horizon = 200;
    cfg.agents = {AgentSpec::uniform()};
    cfg.seeds = harness::seed_range(100);
    double mean_rate = 0.0;
    for (auto seed : cfg.seeds) {
        auto traj = harness::run_episode(cfg, cfg.agents[0], seed);
        mean_rate += traj.steps.back().cum_regret / static_cast<double>(cfg.horizon);
    }
    mean_rate /= static_cast<double>(cfg.seeds.size());
    CHECK(std::abs(mean_rate - oracle) < 0.05);
}

TEST_CASE("thompson sampling regret grows sublinearly") {
    harness::ExperimentConfig cfg;
    cfg.num_arms = 10;
    cfg.horizon = 2000;
    cfg.agents = {AgentSpec::ts()};
    cfg.seeds = harness::seed_range(10);
    double first_half = 0.0, second_half = 0.0;
    for (auto seed : cfg.seeds) {
        auto traj = harness::run_episode(cfg, cfg.agents[0], seed);
        first_half += traj.steps[999].cum_regret;
        second_half += traj.steps[1999].cum_regret - traj.steps[999].cum_regret;
    }
    CHECK(second_half < first_half);
}

TEST_CASE("trajectories are deterministic and well-formed") {
    auto cfg = small_config();
    for (const auto& spec : cfg.agents) {
        auto a = harness::run_episode(cfg, spec, 7);
        auto b = harness::run_episode(cfg, spec, 7);
        CHECK(a == b);
        REQUIRE(a.steps.size() == cfg.horizon);
        double prev = 0.0;
        for (const auto& s : a.steps) {
            CHECK(s.expected_regret >= 0.0);
            CHECK(s.cum_regret >= prev);
            prev = s.cum_regret;
            if (spec.kind == AgentSpec::Kind::Blasts) {
                REQUIRE(s.diag.has_value());
                CHECK(s.diag->rate_bits <= std::log2(static_cast<double>(cfg.num_arms)) + 1e-6);
                const bool adaptive = spec.schedule.mode == agents::BetaSchedule::Mode::AdaptiveInfoRatio;
                CHECK(s.diag->psi_bar.has_value() == adaptive);
            } else {
                CHECK(!s.diag.has_value());
            }
        }
    }
}

TEST_CASE("adding agents never perturbs another agent's draws") {
    auto cfg = small_config();
    cfg.agents = {AgentSpec::uniform()};
    auto lone = harness::run_experiment(cfg);
    cfg.agents = {AgentSpec::ts(), AgentSpec::blasts(agents::BetaSchedule::fixed(1.0)),
                  AgentSpec::uniform()};
    auto crowd = harness::run_experiment(cfg);
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
        const auto& a = lone.trajectories[i];
        const auto& b = crowd.trajectories[2 * cfg.seeds.size() + i];
        CHECK(a.seed == b.seed);
        CHECK(a.steps == b.steps);
    }
}

TEST_CASE("all agents at one seed face the same sampled environment") {
    // per-step expected regret is optimal_mean - means[action], so the set of
    // values an agent can ever produce is pinned by the environment; with a
    // shared environment the ts agent's values must be a subset of the
    // uniform agent's (which visits every arm over 50 steps w.h.p.).
    auto cfg = small_config();
    auto uni = harness::run_episode(cfg, AgentSpec::uniform(), 3);
    auto ts = harness::run_episode(cfg, AgentSpec::ts(), 3);
    std::vector<double> support;
    for (const auto& s : uni.steps) support.push_back(s.expected_regret);
    for (const auto& s : ts.steps) {
        bool found = false;
        for (double v : support)
            if (v == s.expected_regret) found = true;
        CHECK(found);
    }
}

TEST_CASE("summary aggregation is invariant to seed order") {
    auto cfg = small_config();
    cfg.seeds = {0, 1, 2, 3};
    auto a = harness::run_experiment(cfg);
    cfg.seeds = {3, 1, 0, 2};
    auto b = harness::run_experiment(cfg);
    CHECK(harness::summary_csv(a) == harness::summary_csv(b));
}

TEST_CASE("partial failures leave a warning and the summary covers survivors only") {
    auto cfg = small_config();
    // an invalid schedule smuggled past the factory: every episode of this
    // agent throws, the others must still complete
    harness::AgentSpec broken;
    broken.kind = AgentSpec::Kind::Blasts;
    broken.schedule = agents::BetaSchedule{agents::BetaSchedule::Mode::AdaptiveInfoRatio, 0.0, -1.0};
    cfg.agents = {AgentSpec::ts(), broken};
    auto result = harness::run_experiment(cfg);
    CHECK(result.warnings.size() == cfg.seeds.size());
    CHECK(result.trajectories.size() == cfg.seeds.size());
    for (const auto& w : result.warnings) CHECK(w.find("blasts/adaptive") != std::string::npos);
    for (const auto& row : result.summary.rows) CHECK(row.agent == "ts");
}

TEST_CASE("run_experiment: counts, summary coverage, parallel merge determinism") {
    auto cfg = small_config();
    cfg.threads = 1;
    auto serial = harness::run_experiment(cfg);
    CHECK(serial.trajectories.size() == cfg.agents.size() * cfg.seeds.size());
    CHECK(serial.warnings.empty());
    CHECK(serial.summary.rows.size() == cfg.agents.size() * cfg.horizon);

    cfg.threads = 8;
    auto parallel = harness::run_experiment(cfg);
    CHECK(harness::steps_csv(serial) == harness::steps_csv(parallel));
    CHECK(harness::summary_csv(serial) == harness::summary_csv(parallel));
}

TEST_CASE("summarize: degenerate and hand-computed intervals") {
    harness::ExperimentConfig cfg = small_config();
    cfg.agents = {AgentSpec::ts()};
    cfg.horizon = 1;

    harness::Trajectory t1, t2;
    t1.agent_index = t2.agent_index = 0;
    t1.seed = 0;
    t2.seed = 1;
    t1.steps = {{0, 0, 0.0, 0.0, 10.0, {}}};
    t2.steps = {{0, 0, 0.0, 0.0, 20.0, {}}};

    SUBCASE("two seeds, values 10 and 20") {
        auto table = harness::summarize(cfg, {t1, t2});
        REQUIRE(table.rows.size() == 1);
        CHECK(table.rows[0].mean_cum_regret == doctest::Approx(15.0));
        // half-width 1.96 * sqrt(50)/sqrt(2) = 9.8
        CHECK(table.rows[0].ci95_lo == doctest::Approx(5.2).epsilon(1e-12));
        CHECK(table.rows[0].ci95_hi == doctest::Approx(24.8).epsilon(1e-12));
    }
    SUBCASE("identical trajectories give zero width") {
        auto t3 = t1;
        t3.seed = 1;
        auto table = harness::summarize(cfg, {t1, t3});
        REQUIRE(table.rows.size() == 1);
        CHECK(table.rows[0].ci95_lo == table.rows[0].ci95_hi);
        CHECK(table.rows[0].mean_cum_regret == 10.0);
    }
    SUBCASE("single seed gives a zero-width interval") {
        auto table = harness::summarize(cfg, {t1});
        REQUIRE(table.rows.size() == 1);
        CHECK(table.rows[0].ci95_lo == table.rows[0].mean_cum_regret);
        CHECK(table.rows[0].ci95_hi == table.rows[0].mean_cum_regret);
    }
}

TEST_CASE("csv schemas: exact headers and empty diagnostics for baselines") {
    auto cfg = small_config();
    cfg.horizon = 3;
    cfg.seeds = {0};
    auto result = harness::run_experiment(cfg);
    const auto steps = harness::steps_csv(result);
    CHECK(steps.rfind("agent,beta_mode,beta,seed,t,action,reward,expected_regret,cum_regret,"
                      "rate_bits,achieved_distortion,ba_iterations,psi_bar\n",
                      0) == 0);
    // first data line belongs to ts: identity columns then empty diagnostics
    const auto line = steps.substr(steps.find('\n') + 1);
    CHECK(line.rfind("ts,,,0,0,", 0) == 0);
    CHECK(line.substr(0, line.find('\n')).ends_with(",,,"));

    const auto summary = harness::summary_csv(result);
    CHECK(summary.rfind("agent,beta_mode,beta,t,mean_cum_regret,ci95_lo,ci95_hi\n", 0) == 0);

    auto parsed = harness::parse_summary_csv(summary);
    CHECK(parsed.rows.size() == result.summary.rows.size());
    for (std::size_t i = 0; i < parsed.rows.size(); ++i) {
        CHECK(parsed.rows[i].agent == result.summary.rows[i].agent);
        CHECK(parsed.rows[i].mean_cum_regret == result.summary.rows[i].mean_cum_regret);
        CHECK(parsed.rows[i].ci95_hi == result.summary.rows[i].ci95_hi);
    }
    CHECK_THROWS_AS(harness::parse_summary_csv("nope\n"), std::runtime_error);
}

TEST_CASE("emit_outputs: writes, refuses to clobber, svg togglable") {
    auto cfg = small_config();
    cfg.horizon = 5;
    cfg.seeds = {0, 1};
    auto result = harness::run_experiment(cfg);

    const auto dir = fresh_dir("emit");
    auto written = harness::emit_outputs(result, dir, false, true);
    CHECK(written.size() == 3);
    CHECK(std::filesystem::exists(dir / "steps.csv"));
    CHECK(std::filesystem::exists(dir / "summary.csv"));
    CHECK(std::filesystem::exists(dir / "summary.svg"));

    CHECK_THROWS_AS(harness::emit_outputs(result, dir, false, true), std::runtime_error);
    CHECK_NOTHROW(harness::emit_outputs(result, dir, true, true));

    const auto dir2 = fresh_dir("emit_nosvg");
    harness::emit_outputs(result, dir2, false, false);
    CHECK(!std::filesystem::exists(dir2 / "summary.svg"));

    auto svg = harness::render_summary_svg(result.summary);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("blasts beta=4") != std::string::npos);
    CHECK(svg.find("blasts adaptive") != std::string::npos);

    std::filesystem::remove_all(dir);
    std::filesystem::remove_all(dir2);
}

}  // TEST_SUITE
