#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "voter/rational.hpp"

namespace voter::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs the `voter` command line. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "delta:<j>", "uniform", "file:<path>" or "density:<rho>" as a distribution over 0..n.
std::vector<Rational> parse_init(const std::string& text, int n);

/// Exact value of a decimal or "num/den" token.
Rational parse_rational(const std::string& text);

}  // namespace voter::cli
