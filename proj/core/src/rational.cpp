#include "voter/rational.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "voter/error.hpp"

namespace voter {

const char* to_string(NumericMode mode) noexcept {
  return mode == NumericMode::exact ? "exact" : "float";
}

NumericMode parse_mode(const std::string& text) {
  if (text == "exact") return NumericMode::exact;
  if (text == "float") return NumericMode::floating;
  fail(ErrorCode::parse_error, "numeric mode must be 'exact' or 'float', got '" + text + "'");
}

Scalar Scalar::in_mode(const Rational& q, NumericMode mode) {
  if (mode == NumericMode::exact) return Scalar(q);
  return Scalar(voter::to_double(q));
}

double Scalar::to_double() const {
  if (is_exact()) return voter::to_double(exact());
  return std::get<double>(value_);
}

std::string Scalar::str() const {
  if (is_exact()) return format_rational(exact());
  return format_double(std::get<double>(value_));
}

bool operator==(const Scalar& a, const Scalar& b) { return a.value_ == b.value_; }

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_rational(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_str();
}

double to_double(const Rational& q) {
  const int sign = sgn(q);
  if (sign == 0) return 0.0;
  // 56+ bit quotient plus a sticky bit, so the final uint64 -> double
  // conversion rounds to nearest exactly once.
  Integer num = abs(q.get_num());
  Integer den = q.get_den();
  const long shift = 57 - (static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2)) -
                           static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2)));
  if (shift >= 0) {
    num <<= static_cast<mp_bitcnt_t>(shift);
  } else {
    den <<= static_cast<mp_bitcnt_t>(-shift);
  }
  Integer quot, rem;
  mpz_tdiv_qr(quot.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  quot <<= 1;
  if (sgn(rem) != 0) quot += 1;
  const double mantissa = static_cast<double>(quot.get_ui());
  const double x = std::ldexp(mantissa, static_cast<int>(std::clamp(-shift - 1, -100000L, 100000L)));
  if (!std::isfinite(x)) {
    fail(ErrorCode::numeric_overflow, "rational value does not fit in binary64; use exact mode");
  }
  return sign < 0 ? -x : x;
}

long log2_magnitude(const Rational& q) {
  if (sgn(q) == 0) return std::numeric_limits<long>::min() / 4;
  long num_bits = static_cast<long>(mpz_sizeinbase(q.get_num_mpz_t(), 2));
  long den_bits = static_cast<long>(mpz_sizeinbase(q.get_den_mpz_t(), 2));
  return num_bits - den_bits + 1;
}

BinomialTable::BinomialTable(int n) : rows_(static_cast<std::size_t>(n) + 1) {
  for (int i = 0; i <= n; ++i) {
    auto& row = rows_[i];
    row.resize(static_cast<std::size_t>(i) + 1);
    row[0] = 1;
    row[i] = 1;
    for (int j = 1; j < i; ++j) row[j] = rows_[i - 1][j - 1] + rows_[i - 1][j];
  }
}

}  // namespace voter
