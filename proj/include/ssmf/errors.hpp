#pragma once

#include <stdexcept>
#include <string>

namespace ssmf {

// Failure categories shared across the library. The CLI maps numeric-guard
// failures (resource blowups) to a different exit code than bad input.
enum class Err {
  DuplicateRatio,
  BadProbability,
  TrivialIfs,
  BoundsViolated,
  TooLarge,
  TolTooSmall,
  DegenerateFit,
  BadK,
  PathTooShort,
  InsufficientSamples,
  NotNormalized,
  BadCoordinate,
  Cond2Violated,
  NoFeasibleK,
  BadInput,
};

inline const char* err_name(Err e) {
  switch (e) {
    case Err::DuplicateRatio: return "DuplicateRatio";
    case Err::BadProbability: return "BadProbability";
    case Err::TrivialIfs: return "TrivialIfs";
    case Err::BoundsViolated: return "BoundsViolated";
    case Err::TooLarge: return "TooLarge";
    case Err::TolTooSmall: return "TolTooSmall";
    case Err::DegenerateFit: return "DegenerateFit";
    case Err::BadK: return "BadK";
    case Err::PathTooShort: return "PathTooShort";
    case Err::InsufficientSamples: return "InsufficientSamples";
    case Err::NotNormalized: return "NotNormalized";
    case Err::BadCoordinate: return "BadCoordinate";
    case Err::Cond2Violated: return "Cond2Violated";
    case Err::NoFeasibleK: return "NoFeasibleK";
    case Err::BadInput: return "BadInput";
  }
  return "UnknownError";
}

class SpecError : public std::runtime_error {
 public:
  SpecError(Err code, const std::string& what)
      : std::runtime_error(std::string(err_name(code)) + ": " + what),
        code_(code) {}

  Err code() const noexcept { return code_; }

  // TooLarge / TolTooSmall guard against resource blowups rather than
  // malformed input; callers may want to relax a cap and retry.
  bool numeric_guard() const noexcept {
    return code_ == Err::TooLarge || code_ == Err::TolTooSmall;
  }

 private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& what) {
  throw SpecError(code, what);
}

inline void require(bool ok, Err code, const std::string& what) {
  if (!ok) fail(code, what);
}

}  // namespace ssmf
