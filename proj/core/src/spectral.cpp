#include "voter/spectral.hpp"

#include <cmath>
#include <string>

#include "voter/error.hpp"
#include "voter/propagator.hpp"

namespace voter {
namespace {

void require_population(int n) {
  if (n < 2) fail(ErrorCode::invalid_population, "population N must be >= 2, got " + std::to_string(n));
}

Integer common_denominator(std::span<const Rational> v) {
  Integer lcm = 1;
  for (const auto& x : v) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den_mpz_t());
  return lcm;
}

// Scale to integers so the O(N^2) inner loop runs without gcd normalisation.
std::vector<Rational> pascal_transform(std::span<const Rational> v, const BinomialTable& binom, bool alternating) {
  const int n = static_cast<int>(v.size()) - 1;
  const Integer den = common_denominator(v);
  std::vector<Integer> scaled(v.size());
  for (int i = 0; i <= n; ++i) {
    scaled[i] = v[i].get_num() * (den / v[i].get_den());
  }
  std::vector<Rational> out(v.size());
  Integer acc;
  for (int j = 0; j <= n; ++j) {
    acc = 0;
    for (int i = j; i <= n; ++i) {
      if (sgn(scaled[i]) == 0) continue;
      if (alternating && ((i - j) & 1)) {
        mpz_submul(acc.get_mpz_t(), binom(i, j).get_mpz_t(), scaled[i].get_mpz_t());
      } else {
        mpz_addmul(acc.get_mpz_t(), binom(i, j).get_mpz_t(), scaled[i].get_mpz_t());
      }
    }
    out[j] = Rational(acc, den);
    out[j].canonicalize();
  }
  return out;
}

}  // namespace

Rational eigenvalue(int n, int k) {
  require_population(n);
  if (k < 0 || k > n) fail(ErrorCode::index_out_of_range, "eigen index k must lie in [0, N]");
  Rational lambda(static_cast<long>(k) * (k - 1), static_cast<long>(n) * (n - 1));
  lambda.canonicalize();
  return 1 - lambda;
}

std::vector<Rational> eigenvalues(int n) {
  require_population(n);
  std::vector<Rational> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) out.push_back(eigenvalue(n, k));
  return out;
}

std::vector<Rational> b_coefficients(int n, int k) {
  require_population(n);
  if (k < 2 || k > n) {
    fail(ErrorCode::index_out_of_range,
         "b coefficients are defined for 2 <= k <= N (k = 0, 1 are the consensus indicators); got k = " +
             std::to_string(k));
  }
  std::vector<Rational> b(static_cast<std::size_t>(n) + 1, Rational(0));
  b[k] = 1;
  const long kk = static_cast<long>(k) * (k - 1);
  for (int i = k + 1; i <= n; ++i) {
    Rational factor(static_cast<long>(i - 1) * (n - i + 1), static_cast<long>(i) * (i - 1) - kk);
    factor.canonicalize();
    b[i] = b[i - 1] * factor;
  }
  return b;
}

std::vector<Rational> binomial_transform(std::span<const Rational> b) {
  if (b.empty()) fail(ErrorCode::length_mismatch, "binomial transform needs a non-empty sequence");
  return pascal_transform(b, BinomialTable(static_cast<int>(b.size()) - 1), true);
}

std::vector<Rational> unsigned_binomial_transform(std::span<const Rational> c) {
  if (c.empty()) fail(ErrorCode::length_mismatch, "binomial transform needs a non-empty sequence");
  return pascal_transform(c, BinomialTable(static_cast<int>(c.size()) - 1), false);
}

SpectralDecomposition::SpectralDecomposition(int n, NumericMode mode, std::vector<EigenPair> pairs)
    : n_(n), mode_(mode), pairs_(std::move(pairs)) {
  if (static_cast<int>(pairs_.size()) != n + 1) {
    fail(ErrorCode::length_mismatch, "decomposition needs N+1 eigenpairs");
  }
}

int max_floating_population() {
  // The k = N eigenvector is (-1)^{N-j} C(N, j); its middle entry is the
  // largest component of the whole basis.
  int n = 2;
  while (std::lgamma(n + 2.0) - 2 * std::lgamma((n + 1) / 2 + 1.0) < 1023 * std::log(2.0) - 8) ++n;
  return n;
}

std::vector<Rational> eigen_residual(int n, const Rational& lambda, std::span<const Rational> c) {
  if (static_cast<int>(c.size()) != n + 1) fail(ErrorCode::length_mismatch, "eigenvector length must be N+1");
  TransitionOperator op(n);
  const auto& p = op.rates_exact();
  std::vector<Rational> r(c.size());
  for (int j = 0; j <= n; ++j) {
    Rational v = (1 - 2 * p[j]) * c[j] - lambda * c[j];
    if (j > 0) v += p[j - 1] * c[j - 1];
    if (j < n) v += p[j + 1] * c[j + 1];
    r[j] = v;
  }
  return r;
}

SpectralDecomposition build_decomposition(int n, NumericMode mode) {
  require_population(n);
  if (mode == NumericMode::floating && n > max_floating_population()) {
    fail(ErrorCode::numeric_overflow, "eigenvector components for N = " + std::to_string(n) +
                                          " overflow binary64; use exact mode (largest float N is " +
                                          std::to_string(max_floating_population()) + ")");
  }
  const BinomialTable binom(n);
  std::vector<EigenPair> pairs(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    EigenPair& ep = pairs[k];
    ep.k = k;
    ep.lambda = eigenvalue(n, k);
    if (k == 0) {
      ep.c.assign(static_cast<std::size_t>(n) + 1, Rational(0));
      ep.c[0] = 1;
      ep.b = ep.c;
    } else if (k == 1) {
      ep.c.assign(static_cast<std::size_t>(n) + 1, Rational(0));
      ep.c[n] = 1;
      ep.b.resize(static_cast<std::size_t>(n) + 1);
      for (int j = 0; j <= n; ++j) ep.b[j] = Rational(binom(n, j));
    } else {
      ep.b = b_coefficients(n, k);
      ep.c = pascal_transform(ep.b, binom, true);
    }
    for (const auto& r : eigen_residual(n, ep.lambda, ep.c)) {
      if (sgn(r) != 0) {
        fail(ErrorCode::internal, "eigenpair k = " + std::to_string(k) + " failed the exact residual check");
      }
    }
  }
  return SpectralDecomposition(n, mode, std::move(pairs));
}

namespace {

// The b-matrix is unit lower triangular in the u basis apart from column 1,
// where e_N maps to the binomial row C(N, j).
EigenCoordinates solve_coordinates(const SpectralDecomposition& decomp, std::span<const Rational> a0) {
  const int n = decomp.population();
  const std::vector<Rational> u = unsigned_binomial_transform(a0);
  const auto& pairs = decomp.pairs();
  EigenCoordinates coords;
  auto& d = coords.d;
  d.assign(static_cast<std::size_t>(n) + 1, Rational(0));
  d[1] = u[1] / pairs[1].b[1];
  d[0] = u[0] - d[1] * pairs[1].b[0];
  for (int j = 2; j <= n; ++j) {
    Rational v = u[j] - pairs[1].b[j] * d[1];
    for (int k = 2; k < j; ++k) {
      if (sgn(d[k]) != 0) v -= pairs[k].b[j] * d[k];
    }
    d[j] = std::move(v);
  }
  return coords;
}

void require_length(const SpectralDecomposition& decomp, std::size_t size) {
  const int n = decomp.population();
  if (static_cast<int>(size) != n + 1) {
    fail(ErrorCode::length_mismatch, "initial distribution must have N+1 = " + std::to_string(n + 1) + " entries");
  }
}

}  // namespace

EigenCoordinates to_coordinates(const SpectralDecomposition& decomp, std::span<const Rational> a0) {
  require_length(decomp, a0.size());
  check_distribution(a0);
  return solve_coordinates(decomp, a0);
}

EigenCoordinates to_coordinates(const SpectralDecomposition& decomp, std::span<const double> a0) {
  require_length(decomp, a0.size());
  check_distribution(a0);
  const std::vector<Rational> exact(a0.begin(), a0.end());
  return solve_coordinates(decomp, exact);
}

std::vector<Rational> reconstruct(const SpectralDecomposition& decomp, const EigenCoordinates& coords) {
  const int n = decomp.population();
  std::vector<Rational> a(static_cast<std::size_t>(n) + 1, Rational(0));
  for (int k = 0; k <= n; ++k) {
    if (sgn(coords.d[k]) == 0) continue;
    const auto& c = decomp.pair(k).c;
    for (int j = 0; j <= n; ++j) a[j] += coords.d[k] * c[j];
  }
  return a;
}

}  // namespace voter
