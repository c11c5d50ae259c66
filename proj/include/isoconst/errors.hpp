#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace isoconst {

enum class ErrorKind {
  DegenerateInput,
  DegenerateSimplex,
  NearSingularCovariance,
  NotIsotropic,
  FrameFailure,
  NotSimplicialVertex,
  FactoringFailure,
  InvalidMovement,
  SpanDeficient,
  RankDeficient,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::DegenerateSimplex: return "DegenerateSimplex";
    case ErrorKind::NearSingularCovariance: return "NearSingularCovariance";
    case ErrorKind::NotIsotropic: return "NotIsotropic";
    case ErrorKind::FrameFailure: return "FrameFailure";
    case ErrorKind::NotSimplicialVertex: return "NotSimplicialVertex";
    case ErrorKind::FactoringFailure: return "FactoringFailure";
    case ErrorKind::InvalidMovement: return "InvalidMovement";
    case ErrorKind::SpanDeficient: return "SpanDeficient";
    case ErrorKind::RankDeficient: return "RankDeficient";
  }
  return "Unknown";
}

// True for errors caused by the caller's input rather than by numerics.
inline bool is_validation_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegenerateInput:
    case ErrorKind::NotIsotropic:
    case ErrorKind::NotSimplicialVertex:
    case ErrorKind::FactoringFailure:
    case ErrorKind::SpanDeficient:
    case ErrorKind::RankDeficient:
      return true;
    default:
      return false;
  }
}

class GeometryError : public std::runtime_error {
 public:
  GeometryError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace isoconst
