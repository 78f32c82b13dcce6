#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace casimir {

/// Failure categories surfaced by the library. The CLI maps these onto the
/// `error:<kind>:` prefix and its exit codes.
enum class ErrorKind {
  domain,
  overflow,
  non_convergence,
  spectral_radius,
  extrapolation_unstable,
  bracketing_failure,
  grid_too_coarse,
  step_underflow,
  quadrature_failure,
  validation,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::overflow: return "overflow";
    case ErrorKind::non_convergence: return "non_convergence";
    case ErrorKind::spectral_radius: return "spectral_radius";
    case ErrorKind::extrapolation_unstable: return "extrapolation_unstable";
    case ErrorKind::bracketing_failure: return "bracketing_failure";
    case ErrorKind::grid_too_coarse: return "grid_too_coarse";
    case ErrorKind::step_underflow: return "step_underflow";
    case ErrorKind::quadrature_failure: return "quadrature_failure";
    case ErrorKind::validation: return "validation";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// True for failures of the numerics rather than of the inputs.
  bool is_numerical() const noexcept {
    return kind_ != ErrorKind::domain && kind_ != ErrorKind::validation;
  }

 private:
  ErrorKind kind_;
};

#define CASIMIR_DEFINE_ERROR(Name, Kind)                                     \
  class Name : public Error {                                                \
   public:                                                                   \
    explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {} \
  };

CASIMIR_DEFINE_ERROR(DomainError, domain)
CASIMIR_DEFINE_ERROR(OverflowError, overflow)
CASIMIR_DEFINE_ERROR(NonConvergence, non_convergence)
CASIMIR_DEFINE_ERROR(SpectralRadiusError, spectral_radius)
CASIMIR_DEFINE_ERROR(ExtrapolationUnstable, extrapolation_unstable)
CASIMIR_DEFINE_ERROR(BracketingFailure, bracketing_failure)
CASIMIR_DEFINE_ERROR(GridTooCoarse, grid_too_coarse)
CASIMIR_DEFINE_ERROR(StepUnderflow, step_underflow)
CASIMIR_DEFINE_ERROR(QuadratureFailure, quadrature_failure)
CASIMIR_DEFINE_ERROR(ValidationError, validation)

#undef CASIMIR_DEFINE_ERROR

}  // namespace casimir
