#pragma once

#include <stdexcept>
#include <string>

namespace regrep {

// Every failure mode has a stable code so callers (and the CLI) can
// distinguish them without string matching.
enum class ErrorCode {
  NonSquarefree,
  NotCoprime,
  BadAction,
  TooLarge,
  NotNormal,
  NotSubgroup,
  DegreeMismatch,
  IndexTooLarge,
  IdentityInS,
  NotInverseClosed,
  BadChain,
  NotInK,
  HypothesisViolated,
  HypothesisFailed,
  WrongShape,
  NoCaseMatched,
  NoGRRExists,
  NotAutSubgroup,
  HypothesisNotMet,
  NotConfigured,
  NotPrime,
  ParseError,
  Internal,
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonSquarefree: return "NonSquarefree";
    case ErrorCode::NotCoprime: return "NotCoprime";
    case ErrorCode::BadAction: return "BadAction";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::NotNormal: return "NotNormal";
    case ErrorCode::NotSubgroup: return "NotSubgroup";
    case ErrorCode::DegreeMismatch: return "DegreeMismatch";
    case ErrorCode::IndexTooLarge: return "IndexTooLarge";
    case ErrorCode::IdentityInS: return "IdentityInS";
    case ErrorCode::NotInverseClosed: return "NotInverseClosed";
    case ErrorCode::BadChain: return "BadChain";
    case ErrorCode::NotInK: return "NotInK";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::HypothesisFailed: return "HypothesisFailed";
    case ErrorCode::WrongShape: return "WrongShape";
    case ErrorCode::NoCaseMatched: return "NoCaseMatched";
    case ErrorCode::NoGRRExists: return "NoGRRExists";
    case ErrorCode::NotAutSubgroup: return "NotAutSubgroup";
    case ErrorCode::HypothesisNotMet: return "HypothesisNotMet";
    case ErrorCode::NotConfigured: return "NotConfigured";
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace regrep
