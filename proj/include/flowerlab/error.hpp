#ifndef FLOWERLAB_ERROR_HPP
#define FLOWERLAB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace flowerlab {

enum class ErrorKind {
  InvalidGrid,
  GridMismatch,
  InvalidParameter,
  DegeneratePetal,
  DegenerateFlower,
  CertificationRequired,
  NotAFlower,
  CertificationFailed,
  UnboundedBody,
  DegenerateOutput,
  ConvergenceFailure,
  Arity,
  Singularity,
  OriginInside,
  ArcThroughInfinity,
  Inconsistency,
  RepresentationRequired,
  UnboundedDistance,
  Symmetry,
  UnsupportedDimension,
  Schema,
  Io,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidGrid: return "invalid-grid";
    case ErrorKind::GridMismatch: return "grid-mismatch";
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::DegeneratePetal: return "degenerate-petal";
    case ErrorKind::DegenerateFlower: return "degenerate-flower";
    case ErrorKind::CertificationRequired: return "certification-required";
    case ErrorKind::NotAFlower: return "not-a-flower";
    case ErrorKind::CertificationFailed: return "certification-failed";
    case ErrorKind::UnboundedBody: return "unbounded-body";
    case ErrorKind::DegenerateOutput: return "degenerate-output";
    case ErrorKind::ConvergenceFailure: return "convergence-failure";
    case ErrorKind::Arity: return "arity";
    case ErrorKind::Singularity: return "singularity";
    case ErrorKind::OriginInside: return "origin-inside";
    case ErrorKind::ArcThroughInfinity: return "arc-through-infinity";
    case ErrorKind::Inconsistency: return "inconsistency";
    case ErrorKind::RepresentationRequired: return "representation-required";
    case ErrorKind::UnboundedDistance: return "unbounded-distance";
    case ErrorKind::Symmetry: return "symmetry";
    case ErrorKind::UnsupportedDimension: return "unsupported-dimension";
    case ErrorKind::Schema: return "schema";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

/// Every domain failure in the library is reported through this type; the
/// kind lets callers (and the CLI exit-code mapping) branch without parsing
/// the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace flowerlab

#endif  // FLOWERLAB_ERROR_HPP
