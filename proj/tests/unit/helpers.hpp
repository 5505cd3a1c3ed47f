#pragma once

#include <doctest.h>

#include <cstdint>
#include <vector>

#include "voter/error.hpp"
#include "voter/random.hpp"
#include "voter/rational.hpp"

#define CHECK_VOTER_ERROR(expr, expected)                  \
  do {                                                     \
    bool thrown_ = false;                                  \
    try {                                                  \
      (void)(expr);                                        \
    } catch (const voter::VoterError& e_) {                \
      thrown_ = true;                                      \
      CHECK_MESSAGE(e_.code() == (expected), e_.what());   \
    }                                                      \
    CHECK_MESSAGE(thrown_, "expected VoterError: " #expr); \
  } while (0)

namespace testing {

inline voter::Rational q(long num, long den = 1) {
  voter::Rational r(num, den);
  r.canonicalize();
  return r;
}

inline std::vector<voter::Rational> delta(int n, int j) {
  std::vector<voter::Rational> a(static_cast<std::size_t>(n) + 1, voter::Rational(0));
  a[j] = 1;
  return a;
}

inline std::vector<voter::Rational> uniform(int n) {
  return std::vector<voter::Rational>(static_cast<std::size_t>(n) + 1, q(1, n + 1));
}

inline std::vector<double> to_doubles(const std::vector<voter::Rational>& v) {
  std::vector<double> out;
  for (const auto& x : v) out.push_back(voter::to_double(x));
  return out;
}

// Seeded generator for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  int integer(int lo, int hi) { return lo + static_cast<int>(voter::uniform_below(rng_, static_cast<std::uint64_t>(hi - lo + 1))); }

  // Random rational distribution over 0..n with small denominators; a share
  // of cases puts mass only on a few states.
  std::vector<voter::Rational> distribution(int n, bool interior_only = false) {
    std::vector<long> w(static_cast<std::size_t>(n) + 1, 0);
    const int lo = interior_only ? 1 : 0;
    const int hi = interior_only ? n - 1 : n;
    const bool sparse = integer(0, 2) == 0;
    long total = 0;
    for (int j = lo; j <= hi; ++j) {
      w[j] = sparse ? (integer(0, 4) == 0 ? integer(1, 9) : 0) : integer(0, 9);
      total += w[j];
    }
    if (total == 0) {
      w[integer(lo, hi)] = 1;
      total = 1;
    }
    std::vector<voter::Rational> a;
    for (long x : w) a.push_back(q(x, total));
    return a;
  }

 private:
  voter::Engine rng_;
};

}  // namespace testing
