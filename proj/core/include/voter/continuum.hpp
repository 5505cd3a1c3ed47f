#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "voter/rational.hpp"

namespace voter {

/// Large-N eigenfunction u_k(x) = 2F1(k+1, 2-k; 2; x), a polynomial of
/// degree k - 2 because the series terminates.
struct ContinuumEigenfunction {
  int k = 2;
  std::vector<Rational> coeffs;  // ascending powers of x

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  double operator()(double x) const;
};

ContinuumEigenfunction hypergeometric_eigenfunction(int k);

/// Local-time kernel for a start at density xi:
///   g = (1 - xi)/(1 - rho) for rho < xi, xi/rho for rho > xi.
double greens_kernel(double rho, double xi);

struct PointMass {
  double xi;
};

struct InitialDensity {
  std::function<double(double)> f;  // integrates to one on (0, 1)
};

using DensitySpec = std::variant<PointMass, InitialDensity>;

InitialDensity uniform_density();

/// M(rho) ~ N * integral f(xi) g(rho, xi) dxi.
double greens_local_time(const DensitySpec& f, double rho, int n);

/// Adaptive Simpson on [a, b] to absolute tolerance.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol = 1e-10);

/// Least-squares scale alpha minimising |alpha * discrete - continuum|, then
/// max |alpha * discrete - continuum| / max |continuum|.
double relative_linf_after_fit(const std::vector<double>& discrete, const std::vector<double>& continuum);

}  // namespace voter
