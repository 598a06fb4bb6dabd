#pragma once

#include <stdexcept>
#include <string>

namespace overlap {

enum class ErrorCode {
  invalid_argument,
  ground_mismatch,
  cap_exceeded,
  budget_exceeded,
  parse_error,
  internal,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid argument";
    case ErrorCode::ground_mismatch: return "ground-set mismatch";
    case ErrorCode::cap_exceeded: return "cap exceeded";
    case ErrorCode::budget_exceeded: return "budget exceeded";
    case ErrorCode::parse_error: return "parse error";
    case ErrorCode::internal: return "internal error";
  }
  return "error";
}

// Every domain failure in the library is reported through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) throw Error(code, what);
}

}  // namespace overlap
