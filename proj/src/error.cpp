#include "surgery/error.hpp"

namespace surgery {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::UnknownVariable: return "UnknownVariable";
    case ErrorKind::DuplicateVariable: return "DuplicateVariable";
    case ErrorKind::InvalidCardinality: return "InvalidCardinality";
    case ErrorKind::InvalidPermutation: return "InvalidPermutation";
    case ErrorKind::NegativeEntry: return "NegativeEntry";
    case ErrorKind::NotStochastic: return "NotStochastic";
    case ErrorKind::NotAComb: return "NotAComb";
    case ErrorKind::NoFullSupport: return "NoFullSupport";
    case ErrorKind::CycleDetected: return "CycleDetected";
    case ErrorKind::SelfLoop: return "SelfLoop";
    case ErrorKind::NotSemiMarkovian: return "NotSemiMarkovian";
    case ErrorKind::TargetLatent: return "TargetLatent";
    case ErrorKind::TargetAlreadyCut: return "TargetAlreadyCut";
    case ErrorKind::GroupingMismatch: return "GroupingMismatch";
    case ErrorKind::ShapeViolation: return "ShapeViolation";
    case ErrorKind::DimensionOverflow: return "DimensionOverflow";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

}  // namespace surgery
