#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nestmc {

// Every failure the library reports carries one of these categories. The CLI
// prints the category name verbatim so callers can match on it.
enum class ErrorCategory {
  InvalidSubset,
  UnknownVertex,
  DuplicateVertex,
  DuplicateEdge,
  SelfLoop,
  NegativePopulation,
  DisconnectedGraph,
  PlanGraphMismatch,
  UnassignedVertex,
  EmptyDistrict,
  DegeneratePopulation,
  NotContiguous,
  NotConnected,
  IncompleteElection,
  UnknownElection,
  ZeroVoteDistrict,
  DegenerateElection,
  InvalidConfig,
  InvalidSeed,
  StuckChain,
  DegeneratePlan,
  StepFailed,
  DegenerateSeries,
  SeriesTooShort,
  EmptyEnsemble,
  TooLarge,
  NoNestingExists,
  NoPartitionExists,
  SeedGenerationFailed,
  SchemaViolation,
  Io,
};

constexpr std::string_view category_name(ErrorCategory c) noexcept {
  switch (c) {
    case ErrorCategory::InvalidSubset: return "InvalidSubset";
    case ErrorCategory::UnknownVertex: return "UnknownVertex";
    case ErrorCategory::DuplicateVertex: return "DuplicateVertex";
    case ErrorCategory::DuplicateEdge: return "DuplicateEdge";
    case ErrorCategory::SelfLoop: return "SelfLoop";
    case ErrorCategory::NegativePopulation: return "NegativePopulation";
    case ErrorCategory::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCategory::PlanGraphMismatch: return "PlanGraphMismatch";
    case ErrorCategory::UnassignedVertex: return "UnassignedVertex";
    case ErrorCategory::EmptyDistrict: return "EmptyDistrict";
    case ErrorCategory::DegeneratePopulation: return "DegeneratePopulation";
    case ErrorCategory::NotContiguous: return "NotContiguous";
    case ErrorCategory::NotConnected: return "NotConnected";
    case ErrorCategory::IncompleteElection: return "IncompleteElection";
    case ErrorCategory::UnknownElection: return "UnknownElection";
    case ErrorCategory::ZeroVoteDistrict: return "ZeroVoteDistrict";
    case ErrorCategory::DegenerateElection: return "DegenerateElection";
    case ErrorCategory::InvalidConfig: return "InvalidConfig";
    case ErrorCategory::InvalidSeed: return "InvalidSeed";
    case ErrorCategory::StuckChain: return "StuckChain";
    case ErrorCategory::DegeneratePlan: return "DegeneratePlan";
    case ErrorCategory::StepFailed: return "StepFailed";
    case ErrorCategory::DegenerateSeries: return "DegenerateSeries";
    case ErrorCategory::SeriesTooShort: return "SeriesTooShort";
    case ErrorCategory::EmptyEnsemble: return "EmptyEnsemble";
    case ErrorCategory::TooLarge: return "TooLarge";
    case ErrorCategory::NoNestingExists: return "NoNestingExists";
    case ErrorCategory::NoPartitionExists: return "NoPartitionExists";
    case ErrorCategory::SeedGenerationFailed: return "SeedGenerationFailed";
    case ErrorCategory::SchemaViolation: return "SchemaViolation";
    case ErrorCategory::Io: return "Io";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(std::string(category_name(category)) + ": " + message),
        category_(category),
        message_(message) {}

  ErrorCategory category() const noexcept { return category_; }
  /// The message without the category prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCategory category_;
  std::string message_;
};

}  // namespace nestmc
