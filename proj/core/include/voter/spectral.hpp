#pragma once

// Closed-form spectral decomposition of the voter-model propagator on the
// complete graph.
//
// The forward operator acts on macrostate distributions a_j (j = n_A):
//
//   a'_j = p_{j-1} a_{j-1} + (1 - 2 p_j) a_j + p_{j+1} a_{j+1},
//   p_j  = j (N - j) / (N (N - 1)).
//
// Eigenvalues are lambda_k = 1 - k(k-1)/(N(N-1)). For k >= 2 the eigenvector
// is first written in the u = x - y monomial basis (coefficients b_j, unit at
// j = k, zero below) and mapped to macrostate components c_j by the signed
// Pascal transform. The two lambda = 1 vectors are the consensus indicators
// e_0 (k = 0) and e_N (k = 1).
//
// All coefficients are held as exact rationals regardless of NumericMode; the
// mode only selects how values are reported and how time-dependent sums are
// evaluated downstream. The signed transform alternates over terms of size
// ~C(N, N/2), so binary64 arithmetic cannot produce the c_j past N ~ 40.

#include <cstddef>
#include <span>
#include <vector>

#include "voter/rational.hpp"

namespace voter {

struct EigenPair {
  int k = 0;
  Rational lambda;
  std::vector<Rational> b;  // u-basis coefficients, length N+1
  std::vector<Rational> c;  // macrostate components, length N+1
};

struct EigenCoordinates {
  std::vector<Rational> d;  // length N+1
};

/// lambda_k for k = 0..N.
std::vector<Rational> eigenvalues(int n);
Rational eigenvalue(int n, int k);

/// u-basis coefficients of eigenvector k (2 <= k <= N).
std::vector<Rational> b_coefficients(int n, int k);

/// c_j = sum_{i >= j} (-1)^{i-j} C(i, j) b_i.
std::vector<Rational> binomial_transform(std::span<const Rational> b);

/// Inverse of binomial_transform: b_j = sum_{i >= j} C(i, j) c_i.
std::vector<Rational> unsigned_binomial_transform(std::span<const Rational> c);

class SpectralDecomposition {
 public:
  SpectralDecomposition(int n, NumericMode mode, std::vector<EigenPair> pairs);

  int population() const noexcept { return n_; }
  NumericMode mode() const noexcept { return mode_; }
  const std::vector<EigenPair>& pairs() const noexcept { return pairs_; }
  const EigenPair& pair(int k) const { return pairs_.at(static_cast<std::size_t>(k)); }

  /// lambda_k in the decomposition's mode.
  Scalar lambda(int k) const { return Scalar::in_mode(pair(k).lambda, mode_); }

 private:
  int n_;
  NumericMode mode_;
  std::vector<EigenPair> pairs_;
};

/// Builds every eigenpair and checks the exact eigen-residual of each.
/// Floating mode rejects N whose eigenvector components overflow binary64.
SpectralDecomposition build_decomposition(int n, NumericMode mode = NumericMode::exact);

/// Largest N whose eigenvectors are representable in binary64.
int max_floating_population();

/// (P c - lambda c) for an arbitrary candidate pair, exact.
std::vector<Rational> eigen_residual(int n, const Rational& lambda, std::span<const Rational> c);

/// Coordinates d with sum_k d_k c^{(k)} = a0. a0 must be a distribution
/// (non-negative, summing to exactly one).
EigenCoordinates to_coordinates(const SpectralDecomposition& decomp, std::span<const Rational> a0);

/// Floating input: entries may be off by 1e-12 from a distribution; they are
/// converted exactly, without rescaling.
EigenCoordinates to_coordinates(const SpectralDecomposition& decomp, std::span<const double> a0);

/// sum_k d_k c^{(k)}.
std::vector<Rational> reconstruct(const SpectralDecomposition& decomp, const EigenCoordinates& coords);

}  // namespace voter
