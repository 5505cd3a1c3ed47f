#pragma once

#include <cstdint>
#include <span>
#include <type_traits>
#include <vector>

#include "voter/rational.hpp"
#include "voter/spectral.hpp"

namespace voter {

/// Probability vector over macrostates j = 0..N at time step `step`.
template <class T>
struct MacrostateDistribution {
  std::vector<T> a;
  std::int64_t step = 0;

  int population() const { return static_cast<int>(a.size()) - 1; }
};

using ExactDistribution = MacrostateDistribution<Rational>;
using FloatDistribution = MacrostateDistribution<double>;

/// Tridiagonal single-step operator with absorbing ends.
class TransitionOperator {
 public:
  explicit TransitionOperator(int n);

  int population() const noexcept { return n_; }

  /// p_j = j(N-j)/(N(N-1)), j = 0..N.
  const std::vector<Rational>& rates_exact() const noexcept { return p_exact_; }
  const std::vector<double>& rates() const noexcept { return p_; }

  template <class T>
  const std::vector<T>& rates_as() const {
    if constexpr (std::is_same_v<T, Rational>) {
      return p_exact_;
    } else {
      return p_;
    }
  }

 private:
  int n_;
  std::vector<Rational> p_exact_;
  std::vector<double> p_;
};

inline constexpr double kDistributionTolerance = 1e-12;
inline constexpr std::int64_t kDefaultExactStepCap = 100000;
inline constexpr int kDefaultOracleLimit = 256;

/// Throws normalization error unless a is a distribution: exact for
/// rationals, within kDistributionTolerance for doubles.
void check_distribution(std::span<const Rational> a);
void check_distribution(std::span<const double> a);

template <class T>
MacrostateDistribution<T> single_step(const TransitionOperator& op, const MacrostateDistribution<T>& dist);

/// sum_k d_k lambda_k^m c^{(k)}. The rational overload is exact and refuses
/// m beyond `step_cap`; the floating overload evaluates in extended precision
/// sized to the cancellation in the sum and rounds once at the end.
ExactDistribution propagate_spectral_exact(const SpectralDecomposition& decomp, const EigenCoordinates& coords,
                                           std::int64_t m, std::int64_t step_cap = kDefaultExactStepCap);
FloatDistribution propagate_spectral_float(const SpectralDecomposition& decomp, const EigenCoordinates& coords,
                                           std::int64_t m);

/// d_0 e_0 + d_1 e_N: where the chain ends up.
ExactDistribution limit_distribution(const SpectralDecomposition& decomp, const EigenCoordinates& coords);

/// m-fold single_step; ground truth for the spectral route.
template <class T>
MacrostateDistribution<T> dense_oracle(const TransitionOperator& op, const MacrostateDistribution<T>& a0,
                                       std::int64_t m, int oracle_limit = kDefaultOracleLimit);

/// Output-boundary cleanup for floating distributions: round-off negatives
/// down to -kDistributionTolerance become zero, anything lower is an error.
void clamp_roundoff(std::vector<double>& a);

template <class T>
T total_mass(std::span<const T> a) {
  T s = 0;
  for (const auto& x : a) s += x;
  return s;
}

template <class T>
T mean_state(std::span<const T> a) {
  T s = 0;
  for (std::size_t j = 0; j < a.size(); ++j) s += T(static_cast<long>(j)) * a[j];
  return s;
}

template <class T>
T interior_mass(std::span<const T> a) {
  T s = 0;
  for (std::size_t j = 1; j + 1 < a.size(); ++j) s += a[j];
  return s;
}

}  // namespace voter
