#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nhk {

enum class ErrorKind {
  SingularMetric,
  SingularConstraintGram,
  SingularInertia,
  DomainViolation,
  ZeroMultiplier,
  DegenerateAlmostSymplectic,
  StepRejected,
  InvalidConstants,
  InvalidParameters,
  NotBasic,
  WrongLevel,
  NotOnConstraintManifold,
  Configuration,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace nhk
