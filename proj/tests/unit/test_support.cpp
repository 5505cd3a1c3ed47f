#include <cmath>
#include <set>

#include "helpers.hpp"
#include "voter/random.hpp"
#include "voter/rational.hpp"
#include "voter/stats.hpp"

using namespace voter;
using testing::q;

TEST_SUITE("support") {
  TEST_CASE("scalar formatting") {
    CHECK(Scalar(q(3, 10)).str() == "3/10");
    CHECK(Scalar(q(-4)).str() == "-4");
    CHECK(Scalar(0.1).str() == "0.10000000000000001");
    CHECK(std::stod(format_double(1.0 / 3)) == 1.0 / 3);
    CHECK(Scalar::in_mode(q(1, 4), NumericMode::floating).str() == "0.25");
    CHECK(Scalar::in_mode(q(1, 4), NumericMode::exact).is_exact());
    CHECK(Scalar(q(1, 2)) == Scalar(q(2, 4)));
  }

  TEST_CASE("modes") {
    CHECK(parse_mode("exact") == NumericMode::exact);
    CHECK(parse_mode("float") == NumericMode::floating);
    CHECK(std::string(to_string(NumericMode::floating)) == "float");
    CHECK_VOTER_ERROR(parse_mode("double"), ErrorCode::parse_error);
  }

  TEST_CASE("rational helpers") {
    const BinomialTable b(10);
    CHECK(b(10, 5) == 252);
    CHECK(b(7, 0) == 1);
    for (long v : {1L, 3L, 1024L, 1025L, 999999L}) {
      const long bound = log2_magnitude(q(v));
      CHECK(bound >= std::log2(static_cast<double>(v)));
      CHECK(bound <= std::log2(static_cast<double>(v)) + 2);
    }
    CHECK(log2_magnitude(q(1, 8)) >= -3);
    Integer huge;
    mpz_ui_pow_ui(huge.get_mpz_t(), 10, 400);
    CHECK_VOTER_ERROR(to_double(Rational(huge)), ErrorCode::numeric_overflow);
    CHECK(to_double(q(1, 3)) == 1.0 / 3);
    CHECK(to_double(q(5, 6)) == 5.0 / 6);
    CHECK(to_double(q(-1, 5)) == -0.2);
    CHECK(to_double(q(1, 1) / Rational(Integer(1) << 1070)) == std::ldexp(1.0, -1070));
    // IEEE division of exact operands is correctly rounded (property).
    testing::Gen gen(41);
    for (int i = 0; i < 2000; ++i) {
      const long a = gen.integer(-1000000, 1000000), b = gen.integer(1, 1000000);
      CHECK(to_double(q(a, b)) == static_cast<double>(a) / static_cast<double>(b));
    }
  }

  TEST_CASE("seed derivation") {
    CHECK(derive_seed(7, 3) == derive_seed(7, 3));
    std::set<std::uint64_t> seen;
    for (std::uint64_t parent = 0; parent < 20; ++parent) {
      for (std::uint64_t i = 0; i < 50; ++i) seen.insert(derive_seed(parent, i));
    }
    CHECK(seen.size() == 1000);
  }

  TEST_CASE("uniform integers") {
    Engine rng(5);
    std::vector<int> counts(6, 0);
    const int draws = 60000;
    for (int i = 0; i < draws; ++i) {
      const auto v = uniform_below(rng, 6);
      REQUIRE(v < 6);
      ++counts[v];
    }
    double chi2 = 0;
    for (int c : counts) chi2 += (c - draws / 6.0) * (c - draws / 6.0) / (draws / 6.0);
    CHECK(chi2 < 20.5);  // 5 dof, p ~ 0.001
    for (int i = 0; i < 1000; ++i) {
      const double u = uniform01(rng);
      CHECK((u >= 0 && u < 1));
    }
  }

  TEST_CASE("line fit") {
    const std::vector<double> x = {1, 2, 3, 4};
    const std::vector<double> y = {3, 5, 7, 9};
    const auto fit = fit_line(x, y);
    CHECK(fit.slope == doctest::Approx(2));
    CHECK(fit.intercept == doctest::Approx(1));
    CHECK(fit.r_squared == doctest::Approx(1));
  }
}
