#pragma once

#include <span>
#include <string>
#include <vector>

#include "voter/propagator.hpp"
#include "voter/rational.hpp"
#include "voter/spectral.hpp"

namespace voter {

enum class MomentMethod { exact_spectral, asymptotic, fundamental_matrix_oracle, truncated_series };

const char* to_string(MomentMethod method) noexcept;

/// E[T^p], T counted in voter-model iterations.
struct ConsensusMoment {
  int p = 1;
  Scalar value;
  MomentMethod method = MomentMethod::exact_spectral;
};

/// Expected visits to each interior macrostate j = 1..N-1, counted from m = 0.
/// values[j - 1] belongs to macrostate j.
template <class T>
struct LocalTimes {
  std::vector<T> values;
};

/// q_m = (a_1 + a_{N-1}) / N from the distribution at m - 1.
template <class T>
T consensus_entry_probability(std::span<const T> a_prev);

/// Coefficient rows of the Eulerian polynomials: A_p(x) = sum_i A(p, i) x^i,
/// so that sum_{m>=1} m^p x^{m-1} = A_p(x) / (1-x)^{p+1}.
std::vector<Integer> eulerian_coefficients(int p);
Rational eulerian_polynomial(int p, const Rational& x);

/// s_k = d_k (c^{(k)}_1 + c^{(k)}_{N-1}) for k = 0..N (zero for k < 2).
std::vector<Rational> boundary_weights(const SpectralDecomposition& decomp, const EigenCoordinates& coords);

/// Exact sum over m via Eulerian polynomials.
ConsensusMoment moment_exact(const SpectralDecomposition& decomp, const EigenCoordinates& coords, int p);

/// m-sum replaced by p!/(1-lambda_k)^{p+1}. Equal to moment_exact at p = 1.
ConsensusMoment moment_asymptotic(const SpectralDecomposition& decomp, const EigenCoordinates& coords, int p);

/// Distribution-free order estimate p! lambda_2^p / (1 - lambda_2)^p.
Rational moment_uniform_bound(int n, int p);

/// Fundamental-matrix route: factorial moments from repeated (I - Q) solves,
/// converted to raw moments with Stirling numbers of the second kind.
template <class T>
std::vector<T> moments_oracle(const TransitionOperator& op, std::span<const T> a0, int p_max,
                              int oracle_limit = kDefaultOracleLimit);

/// Direct summation of q_m m^p until the geometric tail bound falls below
/// rel_tol of the accumulated value.
double moment_truncated_series(const TransitionOperator& op, std::span<const double> a0, int p,
                               double rel_tol = 1e-12);

/// N(N-1) sum_{k>=2} d_k / (k(k-1)) c^{(k)}, interior components.
LocalTimes<Rational> local_times_exact(const SpectralDecomposition& decomp, const EigenCoordinates& coords);

/// M = a0 (I - Q)^{-1} on the interior block.
template <class T>
LocalTimes<T> local_times_oracle(const TransitionOperator& op, std::span<const T> a0,
                                 int oracle_limit = kDefaultOracleLimit);

/// Stirling numbers of the second kind S(p, r), r = 0..p.
std::vector<Integer> stirling_second_kind(int p);

}  // namespace voter
