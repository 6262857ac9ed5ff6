#pragma once

#include <stdexcept>
#include <string>

namespace ultraposet {

enum class ErrorKind {
  AntisymmetryViolation,
  DuplicateLabel,
  UnknownElement,
  ArityCarrierMismatch,
  CapExceeded,
  PositionOutOfRange,
  SyntaxError,
  UnknownSymbol,
  ArityMismatch,
  UnboundName,
  SignatureMismatch,
  EmptyGenerator,
  OutOfRangeIndex,
  PreconditionFailed,
  NotAtomic,
  NotDownsetLattice,
  SizeOutOfRange,
  ConfigOutOfRange,
  ParseError,
  ValidationError,
  IoError,
  UsageError,
};

const char* to_string(ErrorKind k);

/// Toolkit-wide exception carrying a machine-matchable kind.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace ultraposet
