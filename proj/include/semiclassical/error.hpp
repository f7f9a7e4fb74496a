#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace semiclassical {

enum class ErrorCode {
  InvalidArgument,
  NoEffectiveMass,
  InverseDomain,
  NoClassicalRegion,
  MultiWellUnsupported,
  NotConfining,
  OutsideClassicalRegion,
  EnergyCeilingExceeded,
  DegenerateAlpha,
  QuadratureFailure,
  OddGridRequired,
  EigensolverFailure,
  IndexOutOfRange,
  StateRangeMismatch,
  WindowTooWide,
  GridMismatch,
  IoError,
};

constexpr std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NoEffectiveMass: return "NoEffectiveMass";
    case ErrorCode::InverseDomain: return "InverseDomain";
    case ErrorCode::NoClassicalRegion: return "NoClassicalRegion";
    case ErrorCode::MultiWellUnsupported: return "MultiWellUnsupported";
    case ErrorCode::NotConfining: return "NotConfining";
    case ErrorCode::OutsideClassicalRegion: return "OutsideClassicalRegion";
    case ErrorCode::EnergyCeilingExceeded: return "EnergyCeilingExceeded";
    case ErrorCode::DegenerateAlpha: return "DegenerateAlpha";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::OddGridRequired: return "OddGridRequired";
    case ErrorCode::EigensolverFailure: return "EigensolverFailure";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::StateRangeMismatch: return "StateRangeMismatch";
    case ErrorCode::WindowTooWide: return "WindowTooWide";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }

 private:
  ErrorCode code_;
};

}  // namespace semiclassical
