#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "voter/continuum.hpp"
#include "voter/spectral.hpp"

using namespace voter;
using testing::q;

TEST_SUITE("continuum") {
  TEST_CASE("terminating hypergeometric eigenfunctions") {
    CHECK(hypergeometric_eigenfunction(2).coeffs == std::vector<Rational>{1});
    CHECK(hypergeometric_eigenfunction(3).coeffs == std::vector<Rational>{1, -2});
    const auto u7 = hypergeometric_eigenfunction(7);
    CHECK(u7.degree() == 5);
    CHECK(u7(0.0) == 1.0);
    CHECK_VOTER_ERROR(hypergeometric_eigenfunction(1), ErrorCode::trivial_solution);
    CHECK_VOTER_ERROR(hypergeometric_eigenfunction(0), ErrorCode::trivial_solution);
  }

  TEST_CASE("eigenfunctions solve x(1-x)u'' + (2-4x)u' + (k+1)(k-2)u = 0") {
    for (int k = 2; k <= 12; ++k) {
      const auto u = hypergeometric_eigenfunction(k);
      // Exact polynomial derivatives of the coefficient list.
      for (double x : {0.1, 0.37, 0.5, 0.83}) {
        double v = 0, d1 = 0, d2 = 0;
        for (int i = 0; i <= u.degree(); ++i) {
          const double c = to_double(u.coeffs[i]);
          v += c * std::pow(x, i);
          if (i >= 1) d1 += c * i * std::pow(x, i - 1);
          if (i >= 2) d2 += c * i * (i - 1) * std::pow(x, i - 2);
        }
        const double residual = x * (1 - x) * d2 + (2 - 4 * x) * d1 + (k + 1.0) * (k - 2) * v;
        CHECK(std::abs(residual) < 1e-8 * (1 + std::abs(d2)));
      }
    }
  }

  TEST_CASE("rescaled discrete eigenvector approaches the continuum") {
    for (int k : {3, 5, 7}) {
      double previous = INFINITY;
      for (int n : {25, 50, 100}) {
        const auto d = build_decomposition(n);
        const auto u = hypergeometric_eigenfunction(k);
        std::vector<double> disc, cont;
        for (int j = 1; j < n; ++j) {
          disc.push_back(to_double(d.pair(k).c[j]));
          cont.push_back(u(static_cast<double>(j) / n));
        }
        const double err = relative_linf_after_fit(disc, cont);
        if (err > 1e-12) CHECK(err < previous);  // k = 3 is exact up to round-off
        previous = err;
      }
      if (k == 7) CHECK(previous <= 0.05);
    }
  }

  TEST_CASE("Green's kernel and local times") {
    const int n = 100;
    for (double rho : {0.05, 0.3, 0.5, 0.9}) {
      CHECK(greens_local_time(uniform_density(), rho, n) == doctest::Approx(n / 2.0).epsilon(1e-9));
    }
    CHECK(greens_local_time(PointMass{0.5}, 0.25, n) == doctest::Approx(2.0 * n / 3));
    for (double xi : {0.1, 0.5, 0.77}) {
      CHECK(greens_kernel(xi, xi) == doctest::Approx(1.0));
      CHECK(greens_kernel(xi - 1e-9, xi) == doctest::Approx(greens_kernel(xi + 1e-9, xi)).epsilon(1e-6));
    }
    CHECK_VOTER_ERROR(greens_local_time(uniform_density(), 0.0, n), ErrorCode::density_out_of_range);
    CHECK_VOTER_ERROR(greens_local_time(uniform_density(), 1.0, n), ErrorCode::density_out_of_range);
    CHECK_VOTER_ERROR(greens_local_time(PointMass{1.5}, 0.5, n), ErrorCode::density_out_of_range);
    const InitialDensity tilted{[](double x) { return 2 * x; }};
    // integral 2x g(rho, x) dx = rho^2 (1-rho)... split by hand:
    // below: int_0^rho 2x^2/rho = 2 rho^2/3, above: int_rho^1 2x(1-x)/(1-rho).
    const double rho = 0.4;
    const double above = (1.0 / 3 - rho * rho + 2 * rho * rho * rho / 3) / (1 - rho);
    CHECK(greens_local_time(tilted, rho, 10) == doctest::Approx(10 * (2 * rho * rho / 3 + above)).epsilon(1e-9));
  }

  TEST_CASE("adaptive quadrature") {
    CHECK(integrate_adaptive([](double x) { return std::sin(x); }, 0, std::numbers::pi) ==
          doctest::Approx(2.0).epsilon(1e-10));
    CHECK(integrate_adaptive([](double x) { return std::sqrt(x); }, 0, 1) == doctest::Approx(2.0 / 3).epsilon(1e-9));
  }

  TEST_CASE("scale fitting") {
    const std::vector<double> cont = {1, -2, 3, 0.5};
    std::vector<double> disc;
    for (double x : cont) disc.push_back(-0.01 * x);
    CHECK(relative_linf_after_fit(disc, cont) < 1e-14);
    CHECK_VOTER_ERROR(relative_linf_after_fit({1, 2}, {1}), ErrorCode::length_mismatch);
    CHECK_VOTER_ERROR(relative_linf_after_fit({0, 0}, {1, 2}), ErrorCode::invalid_argument);
  }
}
