#include "voter/error.hpp"

namespace voter {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_population: return "invalid-population";
    case ErrorCode::index_out_of_range: return "index-out-of-range";
    case ErrorCode::length_mismatch: return "length-mismatch";
    case ErrorCode::normalization: return "normalization";
    case ErrorCode::numeric_overflow: return "numeric-overflow";
    case ErrorCode::undefined_moment: return "undefined-moment";
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::oracle_limit: return "oracle-limit";
    case ErrorCode::trivial_solution: return "trivial-solution";
    case ErrorCode::density_out_of_range: return "density-out-of-range";
    case ErrorCode::generation_failure: return "generation-failure";
    case ErrorCode::unsupported_observable: return "unsupported-observable";
    case ErrorCode::all_runs_censored: return "all-runs-censored";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::internal: return "internal";
  }
  return "unknown";
}

}  // namespace voter
