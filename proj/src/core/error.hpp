#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace deplogic {

enum class ErrorCode {
  kSyntax,
  kUnknownSymbol,
  kArity,
  kNegation,
  kDomain,
  kEngine,
  kBudget,
  kLimit,
  kIo,
  kInvalid,
};

// All failures inside the core surface as Error; the C API maps code() onto
// dl_status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, std::size_t column, const std::string& what)
      : Error(ErrorCode::kSyntax, std::to_string(line) + ":" +
                                      std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace deplogic
