#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace surgery {

enum class ErrorKind {
  DimensionMismatch,
  UnknownVariable,
  DuplicateVariable,
  InvalidCardinality,
  InvalidPermutation,
  NegativeEntry,
  NotStochastic,
  NotAComb,
  NoFullSupport,
  CycleDetected,
  SelfLoop,
  NotSemiMarkovian,
  TargetLatent,
  TargetAlreadyCut,
  GroupingMismatch,
  ShapeViolation,
  DimensionOverflow,
};

std::string_view to_string(ErrorKind kind);

/// The single exception type thrown by the library. `kind()` carries the
/// machine-readable category; `what()` the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace surgery
