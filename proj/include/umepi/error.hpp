#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace umepi {

enum class ErrorKind {
  EmptySet,
  DuplicateEvent,
  MissingEwu,
  SyntaxError,
  UnknownEvent,
  NonIncreasingTime,
  NonPositiveValue,
  CountMismatch,
  AbsentEvent,
  UnknownTime,
  InvalidConfig,
  BudgetExceeded,
  PreconditionViolation,
  Io,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptySet: return "EmptySet";
    case ErrorKind::DuplicateEvent: return "DuplicateEvent";
    case ErrorKind::MissingEwu: return "MissingEwu";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownEvent: return "UnknownEvent";
    case ErrorKind::NonIncreasingTime: return "NonIncreasingTime";
    case ErrorKind::NonPositiveValue: return "NonPositiveValue";
    case ErrorKind::CountMismatch: return "CountMismatch";
    case ErrorKind::AbsentEvent: return "AbsentEvent";
    case ErrorKind::UnknownTime: return "UnknownTime";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::PreconditionViolation: return "PreconditionViolation";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

// Every failure raised by the library. Parse errors carry a 1-based line and
// column; both are zero when no source position applies.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::size_t line = 0, std::size_t column = 0)
      : std::runtime_error(compose(kind, message, line, column)),
        kind_(kind),
        line_(line),
        column_(column) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string compose(ErrorKind kind, const std::string& message, std::size_t line,
                             std::size_t column) {
    std::string out(to_string(kind));
    if (line != 0) {
      out += " at " + std::to_string(line);
      if (column != 0) out += ":" + std::to_string(column);
    }
    out += ": ";
    out += message;
    return out;
  }

  ErrorKind kind_;
  std::size_t line_;
  std::size_t column_;
};

}  // namespace umepi
