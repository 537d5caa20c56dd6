#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace adviser {

enum class ErrorCode {
  unknown_state,
  invalid_adviser,
  invalid_strategy,
  no_good_adviser,
  not_good,
  bad_cap,
  domain_mismatch,
  precondition,
  disabled_input,
  script_exhausted,
  unknown_name,
  syntax,
  semantic,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::unknown_state: return "unknown_state";
    case ErrorCode::invalid_adviser: return "invalid_adviser";
    case ErrorCode::invalid_strategy: return "invalid_strategy";
    case ErrorCode::no_good_adviser: return "no_good_adviser";
    case ErrorCode::not_good: return "not_good";
    case ErrorCode::bad_cap: return "bad_cap";
    case ErrorCode::domain_mismatch: return "domain_mismatch";
    case ErrorCode::precondition: return "precondition";
    case ErrorCode::disabled_input: return "disabled_input";
    case ErrorCode::script_exhausted: return "script_exhausted";
    case ErrorCode::unknown_name: return "unknown_name";
    case ErrorCode::syntax: return "syntax";
    case ErrorCode::semantic: return "semantic";
  }
  return "unknown";
}

// Every domain failure in the library surfaces as this exception.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message) : std::runtime_error(message), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace adviser
