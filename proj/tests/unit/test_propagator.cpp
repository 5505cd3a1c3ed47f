#include <cmath>

#include "helpers.hpp"
#include "voter/propagator.hpp"
#include "voter/spectral.hpp"

using namespace voter;
using testing::q;

TEST_SUITE("propagator") {
  TEST_CASE("transition rates") {
    const TransitionOperator op(4);
    CHECK(op.rates_exact() == std::vector<Rational>{0, q(1, 4), q(1, 3), q(1, 4), 0});
    CHECK(op.rates()[2] == doctest::Approx(1.0 / 3));
    CHECK_VOTER_ERROR(TransitionOperator(1), ErrorCode::invalid_population);
  }

  TEST_CASE("single step") {
    const TransitionOperator op(4);
    const auto next = single_step(op, ExactDistribution{testing::delta(4, 2), 0});
    CHECK(next.a == std::vector<Rational>{0, q(1, 3), q(1, 3), q(1, 3), 0});
    CHECK(next.step == 1);
    CHECK(single_step(op, ExactDistribution{testing::delta(4, 0), 0}).a == testing::delta(4, 0));
    CHECK(single_step(op, ExactDistribution{testing::delta(4, 4), 0}).a == testing::delta(4, 4));
    CHECK_VOTER_ERROR(single_step(op, ExactDistribution{testing::delta(3, 0), 0}), ErrorCode::length_mismatch);
  }

  TEST_CASE("mass and mean are conserved exactly (property)") {
    testing::Gen gen(21);
    for (int trial = 0; trial < 100; ++trial) {
      const int n = gen.integer(2, 20);
      const TransitionOperator op(n);
      ExactDistribution dist{gen.distribution(n), 0};
      const Rational mean0 = mean_state<Rational>(dist.a);
      for (int s = 0; s < 25; ++s) dist = single_step(op, dist);
      CHECK(total_mass<Rational>(dist.a) == 1);
      CHECK(mean_state<Rational>(dist.a) == mean0);
    }
  }

  TEST_CASE("spectral propagation examples") {
    const auto d = build_decomposition(4);
    const auto coords = to_coordinates(d, testing::delta(4, 2));
    CHECK(propagate_spectral_exact(d, coords, 0).a == testing::delta(4, 2));
    CHECK(propagate_spectral_exact(d, coords, 1).a == std::vector<Rational>{0, q(1, 3), q(1, 3), q(1, 3), 0});
    const auto frozen = to_coordinates(d, testing::delta(4, 0));
    for (std::int64_t m : {0, 1, 7, 1000}) CHECK(propagate_spectral_exact(d, frozen, m).a == testing::delta(4, 0));
    CHECK_VOTER_ERROR(propagate_spectral_exact(d, coords, -1), ErrorCode::invalid_argument);
    CHECK_VOTER_ERROR(propagate_spectral_exact(d, coords, 11, 10), ErrorCode::invalid_argument);
  }

  TEST_CASE("exact spectral equals repeated single steps (property)") {
    testing::Gen gen(22);
    for (int trial = 0; trial < 60; ++trial) {
      const int n = gen.integer(2, 12);
      const auto d = build_decomposition(n);
      const TransitionOperator op(n);
      const auto a0 = gen.distribution(n);
      const int m = gen.integer(0, 30);
      const auto direct = dense_oracle(op, ExactDistribution{a0, 0}, m);
      CHECK(propagate_spectral_exact(d, to_coordinates(d, a0), m).a == direct.a);
      CHECK(direct.step == m);
    }
  }

  TEST_CASE("floating spectral equals double stepping") {
    for (int n : {4, 12, 64, 100}) {
      const auto d = build_decomposition(n, NumericMode::floating);
      const TransitionOperator op(n);
      for (int start : {1, n / 3, n / 2}) {
        const auto coords = to_coordinates(d, testing::delta(n, start));
        FloatDistribution direct{testing::to_doubles(testing::delta(n, start)), 0};
        std::int64_t done = 0;
        for (std::int64_t m : {1, 10, 1000, 10000}) {
          direct = dense_oracle(op, direct, m - done);
          done = m;
          const auto spectral = propagate_spectral_float(d, coords, m);
          for (int j = 0; j <= n; ++j) CHECK(std::abs(spectral.a[j] - direct.a[j]) <= 1e-10);
          CHECK(total_mass<double>(spectral.a) == doctest::Approx(1.0).epsilon(1e-12));
          CHECK(mean_state<double>(spectral.a) == doctest::Approx(start).epsilon(1e-12));
        }
      }
    }
  }

  TEST_CASE("late times stay non-negative") {
    const int n = 30;
    const auto d = build_decomposition(n, NumericMode::floating);
    const auto coords = to_coordinates(d, testing::delta(n, 15));
    const auto late = propagate_spectral_float(d, coords, 2000000);
    for (double x : late.a) CHECK(x >= 0);
    CHECK(late.a[0] == doctest::Approx(0.5));
    CHECK(late.a[n] == doctest::Approx(0.5));
  }

  TEST_CASE("limit distribution") {
    const int n = 10;
    const auto d = build_decomposition(n);
    for (int j = 0; j <= n; ++j) {
      const auto lim = limit_distribution(d, to_coordinates(d, testing::delta(n, j)));
      CHECK(lim.a[n] == q(j, n));
      CHECK(lim.a[0] == q(n - j, n));
      CHECK(interior_mass<Rational>(lim.a) == 0);
    }
    const auto u = limit_distribution(d, to_coordinates(d, testing::uniform(n)));
    CHECK(u.a[0] == q(1, 2));
    CHECK(u.a[n] == q(1, 2));
  }

  TEST_CASE("dense oracle") {
    const TransitionOperator op(12);
    const FloatDistribution en{testing::to_doubles(testing::delta(12, 12)), 0};
    CHECK(dense_oracle(op, en, 0).a == en.a);
    CHECK(dense_oracle(op, en, 500).a == en.a);
    CHECK_VOTER_ERROR(dense_oracle(op, en, -1), ErrorCode::invalid_argument);
    const TransitionOperator big(300);
    CHECK_VOTER_ERROR(dense_oracle(big, FloatDistribution{testing::to_doubles(testing::delta(300, 1)), 0}, 1),
                      ErrorCode::oracle_limit);
  }

  TEST_CASE("distribution checks") {
    CHECK_NOTHROW(check_distribution(std::span<const Rational>(testing::uniform(5))));
    const std::vector<Rational> neg = {2, -1};
    CHECK_VOTER_ERROR(check_distribution(std::span<const Rational>(neg)), ErrorCode::normalization);
    const std::vector<double> loose = {0.5, 0.5 + 1e-9};
    CHECK_VOTER_ERROR(check_distribution(std::span<const double>(loose)), ErrorCode::normalization);
    std::vector<double> rounded = {-1e-14, 1.0};
    clamp_roundoff(rounded);
    CHECK(rounded[0] == 0.0);
    std::vector<double> bad = {-1e-3, 1.0};
    CHECK_VOTER_ERROR(clamp_roundoff(bad), ErrorCode::normalization);
  }
}
