#pragma once

#include <stdexcept>
#include <string>

namespace qnlat {

enum class ErrorCode {
  // poset construction
  UnknownLabel,
  DuplicateLabel,
  InvalidLabel,
  CycleDetected,
  TooManyElements,
  // constraint validation
  DegenerateConstraint,
  Incoherent,
  NotSupremum,
  NotInfimum,
  // closure
  DerivedConflict,
  DerivedNotSupremum,
  DerivedNotInfimum,
  // counting
  TooLarge,
  // document parsing
  UnknownCommand,
  MalformedCommand,
  MalformedToken,
  BadSection,
  MissingSection,
  SizeMismatch,
  UnterminatedJob,
  MissingEnddata,
  // case trees
  TreeSyntax,
  DuplicateLabelOnPath,
  ConstraintLabelNotOnPath,
  // test-support generation
  GenerationExhausted,
  // manifest / io
  BadManifest,
  IoError,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::DuplicateLabel: return "DuplicateLabel";
    case ErrorCode::InvalidLabel: return "InvalidLabel";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::TooManyElements: return "TooManyElements";
    case ErrorCode::DegenerateConstraint: return "DegenerateConstraint";
    case ErrorCode::Incoherent: return "Incoherent";
    case ErrorCode::NotSupremum: return "NotSupremum";
    case ErrorCode::NotInfimum: return "NotInfimum";
    case ErrorCode::DerivedConflict: return "DerivedConflict";
    case ErrorCode::DerivedNotSupremum: return "DerivedNotSupremum";
    case ErrorCode::DerivedNotInfimum: return "DerivedNotInfimum";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::UnknownCommand: return "UnknownCommand";
    case ErrorCode::MalformedCommand: return "MalformedCommand";
    case ErrorCode::MalformedToken: return "MalformedToken";
    case ErrorCode::BadSection: return "BadSection";
    case ErrorCode::MissingSection: return "MissingSection";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::UnterminatedJob: return "UnterminatedJob";
    case ErrorCode::MissingEnddata: return "MissingEnddata";
    case ErrorCode::TreeSyntax: return "TreeSyntax";
    case ErrorCode::DuplicateLabelOnPath: return "DuplicateLabelOnPath";
    case ErrorCode::ConstraintLabelNotOnPath: return "ConstraintLabelNotOnPath";
    case ErrorCode::GenerationExhausted: return "GenerationExhausted";
    case ErrorCode::BadManifest: return "BadManifest";
    case ErrorCode::IoError: return "IoError";
  }
  return "Error";
}

/// Error thrown by parsing, validation, and closure. `line()` is 1-based and
/// 0 when the error has no source position.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, int line = 0)
      : std::runtime_error(format(code, message, line)),
        code_(code),
        line_(line) {}

  ErrorCode code() const { return code_; }
  int line() const { return line_; }

 private:
  static std::string format(ErrorCode code, const std::string& message,
                            int line) {
    std::string out = error_code_name(code);
    if (line > 0) {
      out += " at line ";
      out += std::to_string(line);
    }
    out += ": ";
    out += message;
    return out;
  }

  ErrorCode code_;
  int line_;
};

}  // namespace qnlat
