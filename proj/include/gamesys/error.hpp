#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gamesys {

enum class ErrorCode {
  ParseError,
  SchemaError,
  ValidationError,
  UnknownState,
  UnknownAction,
  Unaffordable,
  InvalidDesign,
  NoValidActions,
  NoLegalEdit,
  InvalidConfig,
  UnknownMetric,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Base exception for every failure raised by the library. Callers switch on
// code(); what() carries a human-readable message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gamesys
