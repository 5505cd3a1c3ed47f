#include "voter/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "voter/error.hpp"

namespace voter {

TransitionOperator::TransitionOperator(int n) : n_(n) {
  if (n < 2) fail(ErrorCode::invalid_population, "population N must be >= 2, got " + std::to_string(n));
  p_exact_.resize(static_cast<std::size_t>(n) + 1);
  p_.resize(static_cast<std::size_t>(n) + 1);
  const long denom = static_cast<long>(n) * (n - 1);
  for (int j = 0; j <= n; ++j) {
    p_exact_[j] = Rational(static_cast<long>(j) * (n - j), denom);
    p_exact_[j].canonicalize();
    p_[j] = static_cast<double>(static_cast<long>(j) * (n - j)) / static_cast<double>(denom);
  }
}

void check_distribution(std::span<const Rational> a) {
  Rational sum = 0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (sgn(a[j]) < 0) fail(ErrorCode::normalization, "negative probability at macrostate " + std::to_string(j));
    sum += a[j];
  }
  if (sum != 1) fail(ErrorCode::normalization, "distribution sums to " + format_rational(sum) + ", not 1");
}

void check_distribution(std::span<const double> a) {
  double sum = 0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (!(a[j] >= -kDistributionTolerance)) {
      fail(ErrorCode::normalization, "negative probability at macrostate " + std::to_string(j));
    }
    sum += a[j];
  }
  if (!(std::abs(sum - 1.0) <= kDistributionTolerance)) {
    fail(ErrorCode::normalization, "distribution sums to " + format_double(sum) + ", not 1");
  }
}

template <class T>
MacrostateDistribution<T> single_step(const TransitionOperator& op, const MacrostateDistribution<T>& dist) {
  const int n = op.population();
  if (dist.population() != n) fail(ErrorCode::length_mismatch, "distribution length must be N+1");
  const auto& p = op.rates_as<T>();
  const auto& a = dist.a;
  MacrostateDistribution<T> out;
  out.step = dist.step + 1;
  out.a.resize(a.size());
  for (int j = 0; j <= n; ++j) {
    T v = (1 - 2 * p[j]) * a[j];
    if (j > 0) v += p[j - 1] * a[j - 1];
#ifdef VOTER_INJECT_FAULT
    if (j < n) v -= p[j + 1] * a[j + 1];
#else
    if (j < n) v += p[j + 1] * a[j + 1];
#endif
    out.a[j] = std::move(v);
  }
  return out;
}

template MacrostateDistribution<Rational> single_step(const TransitionOperator&, const MacrostateDistribution<Rational>&);
template MacrostateDistribution<double> single_step(const TransitionOperator&, const MacrostateDistribution<double>&);

namespace {

Rational power(const Rational& x, std::int64_t m) {
  Rational out;
  mpz_pow_ui(out.get_num_mpz_t(), x.get_num_mpz_t(), static_cast<unsigned long>(m));
  mpz_pow_ui(out.get_den_mpz_t(), x.get_den_mpz_t(), static_cast<unsigned long>(m));
  return out;
}

void require_coordinates(const SpectralDecomposition& decomp, const EigenCoordinates& coords, std::int64_t m) {
  if (static_cast<int>(coords.d.size()) != decomp.population() + 1) {
    fail(ErrorCode::length_mismatch, "coordinates must have N+1 entries");
  }
  if (m < 0) fail(ErrorCode::invalid_argument, "step count m must be >= 0");
}

}  // namespace

ExactDistribution propagate_spectral_exact(const SpectralDecomposition& decomp, const EigenCoordinates& coords,
                                           std::int64_t m, std::int64_t step_cap) {
  require_coordinates(decomp, coords, m);
  if (m > step_cap) {
    fail(ErrorCode::invalid_argument, "exact propagation is capped at m = " + std::to_string(step_cap) +
                                          "; use float mode for longer horizons");
  }
  const int n = decomp.population();
  ExactDistribution out;
  out.step = m;
  out.a.assign(static_cast<std::size_t>(n) + 1, Rational(0));
  for (int k = 0; k <= n; ++k) {
    if (sgn(coords.d[k]) == 0) continue;
    const Rational weight = coords.d[k] * power(decomp.pair(k).lambda, m);
    if (sgn(weight) == 0) continue;
    const auto& c = decomp.pair(k).c;
    for (int j = 0; j <= n; ++j) out.a[j] += weight * c[j];
  }
  return out;
}

FloatDistribution propagate_spectral_float(const SpectralDecomposition& decomp, const EigenCoordinates& coords,
                                           std::int64_t m) {
  require_coordinates(decomp, coords, m);
  const int n = decomp.population();

  // Terms d_k c_j^{(k)} reach ~4^N while the sum is a probability; carry
  // enough mantissa bits to absorb the cancellation.
  long top = 0;
  for (int k = 0; k <= n; ++k) {
    if (sgn(coords.d[k]) == 0) continue;
    const long dk = log2_magnitude(coords.d[k]);
    for (const auto& c : decomp.pair(k).c) {
      if (sgn(c) != 0) top = std::max(top, dk + log2_magnitude(c));
    }
  }
  const auto prec = static_cast<mp_bitcnt_t>(std::max<long>(128, top + 96));

  std::vector<mpf_class> acc(static_cast<std::size_t>(n) + 1, mpf_class(0, prec));
  mpf_class lambda_m(0, prec);
  mpf_class term(0, prec);
  for (int k = 0; k <= n; ++k) {
    if (sgn(coords.d[k]) == 0) continue;
    const Rational& lambda = decomp.pair(k).lambda;
    if (m == 0) {
      lambda_m = 1;
    } else if (sgn(lambda) == 0) {
      continue;
    } else {
      mpf_class base(lambda, prec);
      mpf_pow_ui(lambda_m.get_mpf_t(), base.get_mpf_t(), static_cast<unsigned long>(m));
    }
    const auto& c = decomp.pair(k).c;
    for (int j = 0; j <= n; ++j) {
      if (sgn(c[j]) == 0) continue;
      term = mpf_class(Rational(coords.d[k] * c[j]), prec);
      term *= lambda_m;
      acc[j] += term;
    }
  }
  FloatDistribution out;
  out.step = m;
  out.a.resize(acc.size());
  for (std::size_t j = 0; j < acc.size(); ++j) out.a[j] = acc[j].get_d();
  clamp_roundoff(out.a);
  return out;
}

ExactDistribution limit_distribution(const SpectralDecomposition& decomp, const EigenCoordinates& coords) {
  const int n = decomp.population();
  if (static_cast<int>(coords.d.size()) != n + 1) fail(ErrorCode::length_mismatch, "coordinates must have N+1 entries");
  ExactDistribution out;
  out.step = -1;
  out.a.assign(static_cast<std::size_t>(n) + 1, Rational(0));
  out.a[0] = coords.d[0];
  out.a[n] = coords.d[1];
  return out;
}

template <class T>
MacrostateDistribution<T> dense_oracle(const TransitionOperator& op, const MacrostateDistribution<T>& a0,
                                       std::int64_t m, int oracle_limit) {
  if (op.population() > oracle_limit) {
    fail(ErrorCode::oracle_limit, "oracle limited to N <= " + std::to_string(oracle_limit));
  }
  if (m < 0) fail(ErrorCode::invalid_argument, "step count m must be >= 0");
  MacrostateDistribution<T> cur = a0;
  for (std::int64_t s = 0; s < m; ++s) cur = single_step(op, cur);
  return cur;
}

template MacrostateDistribution<Rational> dense_oracle(const TransitionOperator&, const MacrostateDistribution<Rational>&,
                                                       std::int64_t, int);
template MacrostateDistribution<double> dense_oracle(const TransitionOperator&, const MacrostateDistribution<double>&,
                                                     std::int64_t, int);

void clamp_roundoff(std::vector<double>& a) {
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] < 0) {
      if (a[j] < -kDistributionTolerance) {
        fail(ErrorCode::normalization, "probability " + format_double(a[j]) + " at macrostate " + std::to_string(j) +
                                           " is below round-off level");
      }
      a[j] = 0;
    }
  }
}

}  // namespace voter
