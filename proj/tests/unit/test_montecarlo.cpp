#include <cmath>
#include <set>

#include "helpers.hpp"
#include "voter/montecarlo.hpp"
#include "voter/topology.hpp"

using namespace voter;

namespace {

SimulationConfig config(TopologySpec topology, InitialCondition init, int runs, std::uint64_t seed) {
  SimulationConfig c;
  c.topology = std::move(topology);
  c.init = std::move(init);
  c.runs = runs;
  c.master_seed = seed;
  return c;
}

}  // namespace

TEST_SUITE("montecarlo") {
  TEST_CASE("single-step transition frequencies") {
    const int n = 20, j = 6;
    const auto t = generate_complete(n);
    std::vector<std::uint8_t> states(n, 0);
    for (int i = 0; i < j; ++i) states[i] = 1;
    const MicroState start(t, states);
    Engine rng(99);
    const int steps = 1000000;
    int up = 0, down = 0;
    for (int s = 0; s < steps; ++s) {
      MicroState m = start;
      step(m, t, rng);
      if (m.count_a() == j + 1) ++up;
      if (m.count_a() == j - 1) --down;
    }
    const double p = static_cast<double>(j * (n - j)) / (n * (n - 1));
    const double sigma = std::sqrt(p * (1 - p) / steps);
    CHECK(std::abs(static_cast<double>(up) / steps - p) < 4 * sigma);
    CHECK(std::abs(static_cast<double>(-down) / steps - p) < 4 * sigma);
  }

  TEST_CASE("micro state bookkeeping") {
    const auto t = generate_bipartite(6, 3);
    std::vector<std::uint8_t> states(9, 0);
    MicroState m(t, states);
    CHECK(m.unanimous());
    m.set(2, 1);
    m.set(7, 1);
    CHECK(m.count_a() == 2);
    Engine rng(3);
    for (int s = 0; s < 5000 && !m.unanimous(); ++s) step(m, t, rng);
    CHECK(m.audit());
    std::vector<std::uint8_t> bad(9, 2);
    CHECK_VOTER_ERROR(MicroState(t, bad), ErrorCode::invalid_argument);
    CHECK_VOTER_ERROR(MicroState(t, std::vector<std::uint8_t>(4, 0)), ErrorCode::length_mismatch);
  }

  TEST_CASE("unanimous states are absorbing") {
    const auto t = generate_complete(10);
    MicroState m(t, std::vector<std::uint8_t>(10, 1));
    Engine rng(1);
    for (int s = 0; s < 1000; ++s) step(m, t, rng);
    CHECK(m.count_a() == 10);
    const auto rec = run_to_consensus(config(CompleteSpec{10}, CountInit{0}, 1, 4), 0);
    CHECK(rec.consensus_time == 0);
    CHECK_FALSE(rec.censored);
  }

  TEST_CASE("two nodes reach consensus in one step") {
    const auto runs = simulate(config(CompleteSpec{2}, CountInit{1}, 200, 8));
    for (const auto& r : runs) {
      CHECK(r.consensus_time == 1);
      CHECK((r.final_count == 0 || r.final_count == 2));
    }
  }

  TEST_CASE("determinism and thread independence") {
    auto c = config(ErdosRenyiSpec{40, 0.15}, FractionInit{0.5}, 24, 2024);
    c.threads = 1;
    const auto serial = simulate(c);
    c.threads = 3;
    const auto parallel = simulate(c);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
      CHECK(serial[i].replica == static_cast<int>(i));
      CHECK(serial[i].seed == parallel[i].seed);
      CHECK(serial[i].consensus_time == parallel[i].consensus_time);
      CHECK(serial[i].normalization == parallel[i].normalization);
    }
    CHECK(run_to_consensus(c, 5).consensus_time == serial[5].consensus_time);
    CHECK(replica_seed(2024, 5) == serial[5].seed);
    // Each replica draws its own graph.
    std::set<double> norms;
    for (const auto& r : serial) norms.insert(r.normalization);
    CHECK(norms.size() > 1);
  }

  TEST_CASE("fixation probability equals the initial density (martingale)") {
    const int runs = 4000;
    const auto complete = simulate(config(CompleteSpec{10}, CountInit{3}, runs, 77));
    int fixed = 0;
    for (const auto& r : complete) fixed += r.final_count == 10;
    CHECK(std::abs(fixed / static_cast<double>(runs) - 0.3) < 4 * std::sqrt(0.21 / runs));

    // Bipartite graphs conserve the degree-weighted density instead.
    const auto bip = simulate(config(BipartiteSpec{8, 2}, GroupInit{0, 1}, runs, 78));
    fixed = 0;
    for (const auto& r : bip) fixed += r.final_count == 10;
    CHECK(std::abs(fixed / static_cast<double>(runs) - 0.25) < 4 * std::sqrt(0.1875 / runs));
  }

  TEST_CASE("initial conditions") {
    const auto fr = simulate(config(BipartiteSpec{8, 4}, FractionInit{0.5}, 3, 1));
    for (const auto& r : fr) CHECK(r.initial_count == 6);
    const auto draw = simulate(config(CompleteSpec{4}, MacrostateDraw{{0, 0, 0, 1, 0}}, 5, 1));
    for (const auto& r : draw) CHECK(r.initial_count == 3);
    CHECK_VOTER_ERROR(simulate(config(CompleteSpec{4}, CountInit{5}, 1, 1)), ErrorCode::invalid_argument);
    CHECK_VOTER_ERROR(simulate(config(CompleteSpec{4}, GroupInit{1, 1}, 1, 1)), ErrorCode::invalid_argument);
    CHECK_VOTER_ERROR(simulate(config(CompleteSpec{4}, MacrostateDraw{{1, 0}}, 1, 1)), ErrorCode::length_mismatch);
    CHECK_VOTER_ERROR(simulate(config(CompleteSpec{4}, CountInit{1}, 0, 1)), ErrorCode::invalid_argument);
  }

  TEST_CASE("moment estimates") {
    auto runs = simulate(config(CompleteSpec{30}, CountInit{15}, 1, 5));
    const auto single = estimate_moments(runs, 2, false);
    CHECK(single.moments[0].value == static_cast<double>(runs[0].consensus_time));
    CHECK(std::isnan(single.moments[0].std_error));
    CHECK(single.moments[1].log_scaled == doctest::Approx(2 * std::log(single.moments[0].value) - std::log(2.0)));

    auto c = config(CompleteSpec{30}, CountInit{15}, 50, 6);
    c.max_steps = 400;
    const auto mixed = simulate(c);
    const auto report = estimate_moments(mixed, 1, false);
    CHECK(report.censored_runs > 0);
    CHECK(report.used_runs + report.censored_runs == 50);
    CHECK_FALSE(report.warnings.empty());
    c.max_steps = 2;
    CHECK_VOTER_ERROR(estimate_moments(simulate(c), 1, false), ErrorCode::all_runs_censored);
    CHECK_VOTER_ERROR(estimate_moments(mixed, 0, false), ErrorCode::invalid_argument);
  }

  TEST_CASE("normalised moments divide by mu1^2/mu2") {
    const auto runs = simulate(config(BipartiteSpec{8, 2}, FractionInit{0.5}, 40, 12));
    const auto raw = estimate_moments(runs, 1, false);
    const auto norm = estimate_moments(runs, 1, true);
    // mu1 = 3.2, mu2 = 16 on (8, 2).
    CHECK(runs[0].normalization == doctest::Approx(3.2 * 3.2 / 16));
    CHECK(norm.moments[0].value == doctest::Approx(raw.moments[0].value / 0.64));
    CHECK(norm.normalized);
  }

  TEST_CASE("local-time tallies") {
    auto c = config(CompleteSpec{20}, CountInit{10}, 30, 13);
    c.record_local_times = true;
    const auto runs = simulate(c);
    for (const auto& r : runs) {
      std::uint64_t interior = 0;
      for (int j = 1; j < 20; ++j) interior += r.visits[j];
      CHECK(interior == r.consensus_time);
    }
    const auto hist = local_time_histogram(c.topology, runs);
    CHECK(hist.mean.size() == 19);
    CHECK(hist.mean[9] >= 1.0);
    CHECK_VOTER_ERROR(local_time_histogram(BipartiteSpec{4, 4}, runs), ErrorCode::unsupported_observable);
  }

  TEST_CASE("fixed graphs and descriptions") {
    auto g = std::make_shared<const Topology>(generate_er(30, 0.3, 4));
    const auto runs = simulate(config(FixedGraph{g}, FractionInit{0.5}, 5, 3));
    for (const auto& r : runs) CHECK_FALSE(r.censored);
    CHECK(population(TopologySpec{BipartiteSpec{3, 5}}) == 8);
    CHECK(describe(TopologySpec{CompleteSpec{7}}).find('7') != std::string::npos);
  }
}
