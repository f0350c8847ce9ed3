#ifndef PPATH_ERROR_HPP
#define PPATH_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ppath {

enum class ErrorKind {
  InvalidMatrix,
  ConvergenceFailure,
  InvalidRank,
  OracleTooLarge,
  PathTooShort,
  ShapeMismatch,
  EmptyInput,
  UnknownLayer,
  DegenerateSpectrum,
  OutOfOrderSnapshot,
  InvalidConfig,
  StaleCache,
  InsufficientData,
  DegenerateBaseline,
  MalformedArchive,
  Io,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidMatrix: return "InvalidMatrix";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::InvalidRank: return "InvalidRank";
    case ErrorKind::OracleTooLarge: return "OracleTooLarge";
    case ErrorKind::PathTooShort: return "PathTooShort";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::UnknownLayer: return "UnknownLayer";
    case ErrorKind::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorKind::OutOfOrderSnapshot: return "OutOfOrderSnapshot";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::StaleCache: return "StaleCache";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::DegenerateBaseline: return "DegenerateBaseline";
    case ErrorKind::MalformedArchive: return "MalformedArchive";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace ppath

#endif  // PPATH_ERROR_HPP
