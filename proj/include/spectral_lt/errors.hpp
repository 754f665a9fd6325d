#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace spectral_lt {

enum class ErrorKind {
  InvalidArgument,
  NotHermitian,
  NotOrthonormal,
  NoConvergence,
  SwapIllConditioned,
  BadShape,
  ShapeMismatch,
  AlphaSingular,
  GammaOutOfRange,
  SectorDegenerate,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries one of the kinds above so
// callers (and the CLI) can branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotOrthonormal: return "NotOrthonormal";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::SwapIllConditioned: return "SwapIllConditioned";
    case ErrorKind::BadShape: return "BadShape";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::AlphaSingular: return "AlphaSingular";
    case ErrorKind::GammaOutOfRange: return "GammaOutOfRange";
    case ErrorKind::SectorDegenerate: return "SectorDegenerate";
  }
  return "Unknown";
}

}  // namespace spectral_lt
