#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace logsurf {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class ErrorKind {
  InvalidArgument,
  Parse,
  NonConvergence,
  ToleranceNotMet,
  Overflow,
  PoleAtZero,
  TailBoundFailure,
  AtSingularity,
  StepCollapse,
  TransversalityLoss,
  NewtonDivergence,
  RayCountMismatch,
  SeedFailure,
  UnresolvedComponent,
  InconsistentGluing,
  EndpointDivergence,
  PoleAtPrevertex,
  PrevertexCollision,
  SolverDivergence,
};

const char* to_string(ErrorKind kind);

/// Library-wide exception; `kind()` tells callers (and the CLI exit-code map)
/// which failure mode occurred.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline bool is_finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// Argument mapped to [0, 2pi).
inline double arg_positive(cplx z) {
  double a = std::arg(z);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a -= kTwoPi;
  return a;
}

/// Wrap an angle difference into (-pi, pi].
inline double wrap_angle(double a) {
  a = std::remainder(a, kTwoPi);
  if (a <= -kPi) a += kTwoPi;
  return a;
}

}  // namespace logsurf
