#pragma once

#include <stdexcept>
#include <string>

namespace oneshot {

enum class ErrorCode {
  invalid_argument,
  dimension_mismatch,
  invalid_state,
  infeasible,
  parse_error,
  io_error,
};

/// Structured error raised by every module; the CLI maps the code to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace oneshot
