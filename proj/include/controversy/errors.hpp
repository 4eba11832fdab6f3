#ifndef CONTROVERSY_ERRORS_HPP
#define CONTROVERSY_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace controversy {

enum class ErrorCode {
  // thread model
  empty_thread,
  multiple_roots,
  missing_parent,
  cycle_detected,
  duplicate_post_id,
  negative_timestamp,
  non_monotonic_timestamp,
  // motif census
  no_reply_edge,
  self_pair,
  // classifier
  degenerate_labels,
  empty_mask,
  dimension_mismatch,
  untrained_model,
  too_few_samples,
  // io / config
  io_error,
  parse_error,
  validation_error,
  invalid_params,
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::empty_thread: return "empty_thread";
    case ErrorCode::multiple_roots: return "multiple_roots";
    case ErrorCode::missing_parent: return "missing_parent";
    case ErrorCode::cycle_detected: return "cycle_detected";
    case ErrorCode::duplicate_post_id: return "duplicate_post_id";
    case ErrorCode::negative_timestamp: return "negative_timestamp";
    case ErrorCode::non_monotonic_timestamp: return "non_monotonic_timestamp";
    case ErrorCode::no_reply_edge: return "no_reply_edge";
    case ErrorCode::self_pair: return "self_pair";
    case ErrorCode::degenerate_labels: return "degenerate_labels";
    case ErrorCode::empty_mask: return "empty_mask";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::untrained_model: return "untrained_model";
    case ErrorCode::too_few_samples: return "too_few_samples";
    case ErrorCode::io_error: return "io_error";
    case ErrorCode::parse_error: return "parse_error";
    case ErrorCode::validation_error: return "validation_error";
    case ErrorCode::invalid_params: return "invalid_params";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

}  // namespace controversy

#endif  // CONTROVERSY_ERRORS_HPP
