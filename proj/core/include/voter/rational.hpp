#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace voter {

using Integer = mpz_class;
using Rational = mpq_class;

enum class NumericMode { exact, floating };

const char* to_string(NumericMode mode) noexcept;
NumericMode parse_mode(const std::string& text);

/// Exact rational or binary64 value; which one is decided by the caller's mode.
class Scalar {
 public:
  Scalar() : value_(0.0) {}
  explicit Scalar(Rational q) : value_(std::move(q)) {}
  explicit Scalar(double x) : value_(x) {}

  static Scalar in_mode(const Rational& q, NumericMode mode);

  bool is_exact() const noexcept { return std::holds_alternative<Rational>(value_); }
  const Rational& exact() const { return std::get<Rational>(value_); }
  double to_double() const;

  /// "num/den" (or "num" when the denominator is 1) for exact values,
  /// 17 significant digits for floats.
  std::string str() const;

  friend bool operator==(const Scalar& a, const Scalar& b);

 private:
  std::variant<Rational, double> value_;
};

std::string format_double(double x);
std::string format_rational(const Rational& q);

/// Nearest binary64 value; numeric_overflow when out of range.
double to_double(const Rational& q);
inline double to_double(double x) { return x; }

/// Upper bound on log2|q|, at most 2 above it; very negative for q == 0.
long log2_magnitude(const Rational& q);

/// Rows 0..n of Pascal's triangle; row(i)[j] = C(i, j).
class BinomialTable {
 public:
  explicit BinomialTable(int n);
  const Integer& operator()(int i, int j) const { return rows_[i][j]; }
  int size() const { return static_cast<int>(rows_.size()) - 1; }

 private:
  std::vector<std::vector<Integer>> rows_;
};

}  // namespace voter
