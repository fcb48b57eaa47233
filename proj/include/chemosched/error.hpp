#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chemosched {

enum class ErrorKind {
  kInvalidGrowth,
  kDomain,
  kInvalidSpec,
  kUnsupported,
  kInfeasibleInstance,
  kWrongBuilder,
  kSizeGuard,
  kInternal,
  kIo,
  kParse,
};

std::string_view to_string(ErrorKind kind);

// All library failures are reported through this type; `kind()` lets callers
// (the CLI in particular) map failures onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace chemosched
