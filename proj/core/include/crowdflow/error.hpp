#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace crowdflow {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ill-formed configuration (e.g. an empty mixture).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition was violated by the caller.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// Zero-length segment handed to a line integral.
class DegenerateEdgeError : public ContractViolation {
 public:
  using ContractViolation::ContractViolation;
};

/// User-supplied input is unusable (start in collision, blocked lattice cell...).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A request would exceed a configured resource cap.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Rejection sampling could not find free space.
class InfeasibleEnvironmentError : public Error {
 public:
  using Error::Error;
};

/// Malformed scenario document. `pointer()` is the JSON pointer of the offending value.
class ParseError : public Error {
 public:
  ParseError(std::string pointer, const std::string& what)
      : Error(what + " (at " + (pointer.empty() ? std::string("/") : pointer) + ")"),
        pointer_(std::move(pointer)) {}

  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

/// Well-formed scenario document with physically invalid content.
class ValidationError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// Roadmap statistics reported when the goal cannot be reached.
struct RoadmapDiagnostics {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t reachable_from_source = 0;
  double connection_radius = 0.0;
};

class NoPathError : public Error {
 public:
  NoPathError(const std::string& what, RoadmapDiagnostics diagnostics)
      : Error(what), diagnostics_(diagnostics) {}

  const RoadmapDiagnostics& diagnostics() const noexcept { return diagnostics_; }

 private:
  RoadmapDiagnostics diagnostics_;
};

}  // namespace crowdflow
