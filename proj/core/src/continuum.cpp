#include "voter/continuum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "voter/error.hpp"

namespace voter {

double ContinuumEigenfunction::operator()(double x) const {
  double v = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * x + to_double(*it);
  return v;
}

ContinuumEigenfunction hypergeometric_eigenfunction(int k) {
  if (k < 2) {
    fail(ErrorCode::trivial_solution, "k = " + std::to_string(k) + " has only the trivial continuum solution u = 0");
  }
  // 2F1(a, b; c; x) with a = k+1, b = 2-k, c = 2; (b)_n vanishes past n = k-2.
  const long a = k + 1;
  const long b = 2 - k;
  const long c = 2;
  ContinuumEigenfunction u;
  u.k = k;
  Rational term = 1;
  u.coeffs.push_back(term);
  for (long n = 0; b + n != 0; ++n) {
    Rational ratio((a + n) * (b + n), (c + n) * (n + 1));
    ratio.canonicalize();
    term *= ratio;
    u.coeffs.push_back(term);
  }
  return u;
}

double greens_kernel(double rho, double xi) {
  if (rho <= xi) return (1 - xi) / (1 - rho);
  return xi / rho;
}

InitialDensity uniform_density() {
  return InitialDensity{[](double) { return 1.0; }};
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa, double b, double fb, double m, double fm,
               double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6 * (fa + 4 * flm + fm);
  const double right = (b - m) / 6 * (fm + 4 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15 * tol) return left + right + delta / 15;
  return simpson(f, a, fa, m, fm, lm, flm, left, tol / 2, depth - 1) +
         simpson(f, m, fm, b, fb, rm, frm, right, tol / 2, depth - 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol) {
  if (b <= a) return 0;
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double whole = (b - a) / 6 * (fa + 4 * fm + fb);
  return simpson(f, a, fa, b, fb, m, fm, whole, abs_tol, 48);
}

double greens_local_time(const DensitySpec& f, double rho, int n) {
  if (!(rho > 0 && rho < 1)) fail(ErrorCode::density_out_of_range, "density rho must lie in (0, 1)");
  if (n < 2) fail(ErrorCode::invalid_population, "population N must be >= 2");
  if (const auto* point = std::get_if<PointMass>(&f)) {
    if (!(point->xi > 0 && point->xi < 1)) fail(ErrorCode::density_out_of_range, "point mass must lie in (0, 1)");
    return n * greens_kernel(rho, point->xi);
  }
  const auto& density = std::get<InitialDensity>(f).f;
  // Split at the kink so each piece is smooth.
  const double below = integrate_adaptive([&](double xi) { return density(xi) * xi / rho; }, 0.0, rho);
  const double above = integrate_adaptive([&](double xi) { return density(xi) * (1 - xi) / (1 - rho); }, rho, 1.0);
  return n * (below + above);
}

double relative_linf_after_fit(const std::vector<double>& discrete, const std::vector<double>& continuum) {
  if (discrete.size() != continuum.size() || discrete.empty()) {
    fail(ErrorCode::length_mismatch, "fit needs two non-empty sequences of equal length");
  }
  double num = 0, den = 0, scale = 0;
  for (std::size_t i = 0; i < discrete.size(); ++i) {
    num += discrete[i] * continuum[i];
    den += discrete[i] * discrete[i];
    scale = std::max(scale, std::abs(continuum[i]));
  }
  if (den == 0 || scale == 0) fail(ErrorCode::invalid_argument, "fit needs non-zero sequences");
  const double alpha = num / den;
  double worst = 0;
  for (std::size_t i = 0; i < discrete.size(); ++i) {
    worst = std::max(worst, std::abs(alpha * discrete[i] - continuum[i]));
  }
  return worst / scale;
}

}  // namespace voter
