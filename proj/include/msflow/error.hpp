#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace msflow {

enum class ErrorKind {
  MalformedSpec,
  InvalidCoefficient,
  UnmatchedBoundary,
  BadGluingMatrix,
  DisconnectedGraph,
  DimensionMismatch,
  Alpha0NotAllowed,
  UnknownTorus,
  UnknownOrbit,
  NotFiberOrbit,
  ZeroCoefficient,
  SaddleInLink,
  AlreadyReversed,
  AlreadyAdjusted,
  SinglePiece,
  NonFinite,
  ZeroLambda,
  OrbitNotClosed,
  DegenerateOverlap,
  RepairFailed,
  VanishingField,
  PreconditionViolated,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedSpec: return "MalformedSpec";
    case ErrorKind::InvalidCoefficient: return "InvalidCoefficient";
    case ErrorKind::UnmatchedBoundary: return "UnmatchedBoundary";
    case ErrorKind::BadGluingMatrix: return "BadGluingMatrix";
    case ErrorKind::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::Alpha0NotAllowed: return "Alpha0NotAllowed";
    case ErrorKind::UnknownTorus: return "UnknownTorus";
    case ErrorKind::UnknownOrbit: return "UnknownOrbit";
    case ErrorKind::NotFiberOrbit: return "NotFiberOrbit";
    case ErrorKind::ZeroCoefficient: return "ZeroCoefficient";
    case ErrorKind::SaddleInLink: return "SaddleInLink";
    case ErrorKind::AlreadyReversed: return "AlreadyReversed";
    case ErrorKind::AlreadyAdjusted: return "AlreadyAdjusted";
    case ErrorKind::SinglePiece: return "SinglePiece";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::ZeroLambda: return "ZeroLambda";
    case ErrorKind::OrbitNotClosed: return "OrbitNotClosed";
    case ErrorKind::DegenerateOverlap: return "DegenerateOverlap";
    case ErrorKind::RepairFailed: return "RepairFailed";
    case ErrorKind::VanishingField: return "VanishingField";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
  }
  return "Unknown";
}

/// Every typed failure in the library is reported through this exception.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace msflow
