#pragma once

#include <stdexcept>
#include <string>

namespace voter {

enum class ErrorCode {
  invalid_population,
  index_out_of_range,
  length_mismatch,
  normalization,
  numeric_overflow,
  undefined_moment,
  invalid_argument,
  oracle_limit,
  trivial_solution,
  density_out_of_range,
  generation_failure,
  unsupported_observable,
  all_runs_censored,
  parse_error,
  internal,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries a machine-checkable code.
class VoterError : public std::runtime_error {
 public:
  VoterError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw VoterError(code, what);
}

}  // namespace voter
