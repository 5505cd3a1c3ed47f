#include "voter/observables.hpp"

#include <cmath>
#include <string>

#include "voter/error.hpp"

namespace voter {

const char* to_string(MomentMethod method) noexcept {
  switch (method) {
    case MomentMethod::exact_spectral: return "exact-spectral";
    case MomentMethod::asymptotic: return "asymptotic";
    case MomentMethod::fundamental_matrix_oracle: return "fundamental-matrix-oracle";
    case MomentMethod::truncated_series: return "truncated-series";
  }
  return "unknown";
}

template <class T>
T consensus_entry_probability(std::span<const T> a_prev) {
  const int n = static_cast<int>(a_prev.size()) - 1;
  if (n < 2) fail(ErrorCode::invalid_population, "population N must be >= 2");
  return (a_prev[1] + a_prev[n - 1]) / T(n);
}

template Rational consensus_entry_probability(std::span<const Rational>);
template double consensus_entry_probability(std::span<const double>);

std::vector<Integer> eulerian_coefficients(int p) {
  if (p < 0) fail(ErrorCode::invalid_argument, "Eulerian polynomial order must be >= 0");
  // A(n, m) = (n - m) A(n-1, m-1) + (m + 1) A(n-1, m)
  std::vector<Integer> row{1};
  for (int order = 1; order <= p; ++order) {
    std::vector<Integer> next(static_cast<std::size_t>(order), Integer(0));
    for (int m = 0; m < order; ++m) {
      if (m >= 1) next[m] += (order - m) * row[m - 1];
      if (m < static_cast<int>(row.size())) next[m] += (m + 1) * row[m];
    }
    row = std::move(next);
  }
  return row;
}

Rational eulerian_polynomial(int p, const Rational& x) {
  const auto coeffs = eulerian_coefficients(p);
  Rational v = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * x + Rational(*it);
  return v;
}

std::vector<Integer> stirling_second_kind(int p) {
  // S(n, r) = r S(n-1, r) + S(n-1, r-1)
  std::vector<Integer> row{1};
  for (int order = 1; order <= p; ++order) {
    std::vector<Integer> next(static_cast<std::size_t>(order) + 1, Integer(0));
    for (int r = 1; r <= order; ++r) {
      if (r < static_cast<int>(row.size())) next[r] += r * row[r];
      next[r] += row[r - 1];
    }
    row = std::move(next);
  }
  return row;
}

namespace {

void require_moment_inputs(const SpectralDecomposition& decomp, const EigenCoordinates& coords, int p) {
  if (p < 1) fail(ErrorCode::invalid_argument, "moment order p must be >= 1, got " + std::to_string(p));
  if (static_cast<int>(coords.d.size()) != decomp.population() + 1) {
    fail(ErrorCode::length_mismatch, "coordinates must have N+1 entries");
  }
  for (std::size_t k = 2; k < coords.d.size(); ++k) {
    if (sgn(coords.d[k]) != 0) return;
  }
  fail(ErrorCode::undefined_moment, "initial distribution has no interior mass; consensus time moments are undefined");
}

Integer factorial(int p) {
  Integer f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(p));
  return f;
}

Rational power(const Rational& x, int e) {
  Rational out;
  mpz_pow_ui(out.get_num_mpz_t(), x.get_num_mpz_t(), static_cast<unsigned long>(e));
  mpz_pow_ui(out.get_den_mpz_t(), x.get_den_mpz_t(), static_cast<unsigned long>(e));
  return out;
}

// Solves -v_{i-1} + 2 v_i - v_{i+1} = rhs_i on i = 1..N-1 with v_0 = v_N = 0.
// Index 0 of the vectors is macrostate 1.
template <class T>
std::vector<T> solve_second_difference(const std::vector<T>& rhs) {
  const std::size_t m = rhs.size();
  std::vector<T> cp(m), dp(m), v(m);
  T denom = 2;
  cp[0] = T(-1) / denom;
  dp[0] = rhs[0] / denom;
  for (std::size_t i = 1; i < m; ++i) {
    denom = 2 + cp[i - 1];
    cp[i] = T(-1) / denom;
    dp[i] = (rhs[i] + dp[i - 1]) / denom;
  }
  v[m - 1] = dp[m - 1];
  for (std::size_t i = m - 1; i-- > 0;) v[i] = dp[i] - cp[i] * v[i + 1];
  return v;
}

template <class T>
void require_oracle(const TransitionOperator& op, std::span<const T> a0, int oracle_limit) {
  if (op.population() > oracle_limit) {
    fail(ErrorCode::oracle_limit, "oracle limited to N <= " + std::to_string(oracle_limit));
  }
  if (static_cast<int>(a0.size()) != op.population() + 1) {
    fail(ErrorCode::length_mismatch, "initial distribution must have N+1 entries");
  }
  check_distribution(a0);
}

}  // namespace

std::vector<Rational> boundary_weights(const SpectralDecomposition& decomp, const EigenCoordinates& coords) {
  const int n = decomp.population();
  std::vector<Rational> s(static_cast<std::size_t>(n) + 1, Rational(0));
  for (int k = 2; k <= n; ++k) {
    const auto& c = decomp.pair(k).c;
    s[k] = coords.d[k] * (c[1] + c[n - 1]);
  }
  return s;
}

ConsensusMoment moment_exact(const SpectralDecomposition& decomp, const EigenCoordinates& coords, int p) {
  require_moment_inputs(decomp, coords, p);
  const int n = decomp.population();
  const auto s = boundary_weights(decomp, coords);
  Rational total = 0;
  for (int k = 2; k <= n; ++k) {
    if (sgn(s[k]) == 0) continue;
    const Rational& lambda = decomp.pair(k).lambda;
    total += s[k] * eulerian_polynomial(p, lambda) / power(1 - lambda, p + 1);
  }
  total /= n;
  return {p, Scalar::in_mode(total, decomp.mode()), MomentMethod::exact_spectral};
}

ConsensusMoment moment_asymptotic(const SpectralDecomposition& decomp, const EigenCoordinates& coords, int p) {
  require_moment_inputs(decomp, coords, p);
  const int n = decomp.population();
  const auto s = boundary_weights(decomp, coords);
  Rational total = 0;
  for (int k = 2; k <= n; ++k) {
    if (sgn(s[k]) == 0) continue;
    total += s[k] / power(1 - decomp.pair(k).lambda, p + 1);
  }
  Rational scale(factorial(p), n);
  scale.canonicalize();
  total *= scale;
  return {p, Scalar::in_mode(total, decomp.mode()), MomentMethod::asymptotic};
}

Rational moment_uniform_bound(int n, int p) {
  if (p < 1) fail(ErrorCode::invalid_argument, "moment order p must be >= 1");
  const Rational lambda2 = eigenvalue(n, 2);
  return Rational(factorial(p)) * power(lambda2 / (1 - lambda2), p);
}

template <class T>
std::vector<T> moments_oracle(const TransitionOperator& op, std::span<const T> a0, int p_max, int oracle_limit) {
  require_oracle(op, a0, oracle_limit);
  if (p_max < 1) fail(ErrorCode::invalid_argument, "moment order p must be >= 1");
  const int n = op.population();
  const auto& p = op.rates_as<T>();
  const std::size_t m = static_cast<std::size_t>(n) - 1;

  // Row i of (I - Q) is p_i (-1, 2, -1), so F x = L^{-1}(x / p).
  auto apply_fundamental = [&](const std::vector<T>& x) {
    std::vector<T> rhs(m);
    for (std::size_t i = 0; i < m; ++i) rhs[i] = x[i] / p[i + 1];
    return solve_second_difference(rhs);
  };
  auto apply_q = [&](const std::vector<T>& x) {
    std::vector<T> y(m);
    for (std::size_t i = 0; i < m; ++i) {
      const T& pi = p[i + 1];
      T v = (1 - 2 * pi) * x[i];
      if (i > 0) v += pi * x[i - 1];
      if (i + 1 < m) v += pi * x[i + 1];
      y[i] = std::move(v);
    }
    return y;
  };

  // E[C(T, r)] = a Q^{r-1} F^r 1
  std::vector<T> factorial_moments(static_cast<std::size_t>(p_max) + 1, T(0));
  std::vector<T> v(m, T(1));
  for (int r = 1; r <= p_max; ++r) {
    v = apply_fundamental(v);
    std::vector<T> w = v;
    for (int s = 1; s < r; ++s) w = apply_q(w);
    T acc = 0;
    for (std::size_t i = 0; i < m; ++i) acc += a0[i + 1] * w[i];
    factorial_moments[r] = acc;
  }

  std::vector<T> raw(static_cast<std::size_t>(p_max));
  for (int order = 1; order <= p_max; ++order) {
    const auto stirling = stirling_second_kind(order);
    T acc = 0;
    for (int r = 1; r <= order; ++r) {
      const Integer coeff = stirling[r] * factorial(r);
      if constexpr (std::is_same_v<T, Rational>) {
        acc += Rational(coeff) * factorial_moments[r];
      } else {
        acc += coeff.get_d() * factorial_moments[r];
      }
    }
    raw[order - 1] = acc;
  }
  return raw;
}

template std::vector<Rational> moments_oracle(const TransitionOperator&, std::span<const Rational>, int, int);
template std::vector<double> moments_oracle(const TransitionOperator&, std::span<const double>, int, int);

double moment_truncated_series(const TransitionOperator& op, std::span<const double> a0, int p, double rel_tol) {
  if (p < 1) fail(ErrorCode::invalid_argument, "moment order p must be >= 1");
  if (static_cast<int>(a0.size()) != op.population() + 1) {
    fail(ErrorCode::length_mismatch, "initial distribution must have N+1 entries");
  }
  check_distribution(a0);
  const int n = op.population();
  if (interior_mass(a0) <= 0) {
    fail(ErrorCode::undefined_moment, "initial distribution has no interior mass; consensus time moments are undefined");
  }

  // Geometric tail: surviving mass S leaves at rate 1 - lambda_2, so the rest
  // of the sum is about S E[(m + G)^p] with G ~ Geometric(1 - lambda_2) on
  // {1, 2, ...}, E[G^r] = A_r(lambda_2) / (1 - lambda_2)^r.
  const double lambda2 = to_double(eigenvalue(n, 2));
  const double gap = 1.0 - lambda2;
  std::vector<double> geometric_moments(static_cast<std::size_t>(p) + 1);
  for (int r = 0; r <= p; ++r) {
    geometric_moments[r] = r == 0 ? 1.0 : to_double(eulerian_polynomial(r, eigenvalue(n, 2))) / std::pow(gap, r);
  }
  const BinomialTable binom(p);
  auto tail_estimate = [&](double mass, double m) {
    double e = 0;
    for (int r = 0; r <= p; ++r) e += binom(p, r).get_d() * std::pow(m, p - r) * geometric_moments[r];
    return mass * e;
  };

  FloatDistribution cur{std::vector<double>(a0.begin(), a0.end()), 0};
  double acc = 0;
  for (std::int64_t m = 1;; ++m) {
    const double q = consensus_entry_probability<double>(cur.a);
    acc += q * std::pow(static_cast<double>(m), p);
    cur = single_step(op, cur);
    if (m % 64 == 0) {
      const double mass = interior_mass<double>(cur.a);
      if (mass <= 0 || tail_estimate(mass, static_cast<double>(m)) < rel_tol * acc) break;
    }
  }
  return acc;
}

LocalTimes<Rational> local_times_exact(const SpectralDecomposition& decomp, const EigenCoordinates& coords) {
  const int n = decomp.population();
  if (static_cast<int>(coords.d.size()) != n + 1) fail(ErrorCode::length_mismatch, "coordinates must have N+1 entries");
  std::vector<Rational> total(static_cast<std::size_t>(n) + 1, Rational(0));
  for (int k = 2; k <= n; ++k) {
    if (sgn(coords.d[k]) == 0) continue;
    Rational weight(static_cast<long>(n) * (n - 1), static_cast<long>(k) * (k - 1));
    weight.canonicalize();
    weight *= coords.d[k];
    const auto& c = decomp.pair(k).c;
    for (int j = 1; j < n; ++j) total[j] += weight * c[j];
  }
  LocalTimes<Rational> out;
  out.values.assign(total.begin() + 1, total.end() - 1);
  return out;
}

template <class T>
LocalTimes<T> local_times_oracle(const TransitionOperator& op, std::span<const T> a0, int oracle_limit) {
  require_oracle(op, a0, oracle_limit);
  const int n = op.population();
  const auto& p = op.rates_as<T>();
  // Transposed system in y_i = p_i M_i is the same second difference.
  std::vector<T> rhs(a0.begin() + 1, a0.end() - 1);
  auto y = solve_second_difference(rhs);
  LocalTimes<T> out;
  out.values.resize(static_cast<std::size_t>(n) - 1);
  for (int j = 1; j < n; ++j) out.values[j - 1] = y[j - 1] / p[j];
  return out;
}

template LocalTimes<Rational> local_times_oracle(const TransitionOperator&, std::span<const Rational>, int);
template LocalTimes<double> local_times_oracle(const TransitionOperator&, std::span<const double>, int);

}  // namespace voter
