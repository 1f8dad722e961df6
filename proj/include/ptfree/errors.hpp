#pragma once

#include <stdexcept>
#include <string>

namespace ptfree {

/// Base class for every error raised by the library. `code()` is a short
/// machine-readable tag used by the CLI in its structured error documents.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

/// Requested enumeration exceeds the configured guard. Carries the cost
/// estimate so callers can report it.
class GuardExceeded : public Error {
 public:
  GuardExceeded(const std::string& what, double estimated_cost, double limit)
      : Error("guard_exceeded", what), cost_(estimated_cost), limit_(limit) {}

  double estimated_cost() const noexcept { return cost_; }
  double limit() const noexcept { return limit_; }

 private:
  double cost_;
  double limit_;
};

class SizeMismatch : public Error {
 public:
  explicit SizeMismatch(const std::string& what) : Error("size_mismatch", what) {}
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what)
      : Error("precondition_violation", what) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error("parse_error", what) {}
};

/// Two routes that must agree did not. Always a bug.
class InternalInconsistency : public Error {
 public:
  explicit InternalInconsistency(const std::string& what)
      : Error("internal_inconsistency", what) {}
};

}  // namespace ptfree
