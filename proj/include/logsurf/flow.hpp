#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "logsurf/entire_map.hpp"

namespace logsurf {

/// Radius of the ball around a zero of Q inside which the field is not evaluated.
inline double exclusion_radius(cplx root) { return 1e-4 * (1.0 + std::abs(root)); }

/// X(z) = exp(-i Im P(z)) conj(Q(z)) / |Q(z)|; integral curves are level sets
/// of Im F traversed with Re F increasing.  Throws AtSingularity inside an
/// exclusion ball.
cplx field(const EntireMap& map, cplx z);

enum class StopReason { Budget, Singularity, Overflow, Escape, Exit, StepLimit };
const char* to_string(StopReason reason);

struct FlowOptions {
  double tol = 1e-9;           // per-step error, measured in the image plane when tracking F
  double h_max = 0.25;
  double h_min = 1e-12;
  double chord_tol = 5e-7;     // bound on 1 - chord/arc per step
  bool track_image = true;     // carry F along the curve and renormalize onto the level
  int renorm_every = 10;
  double escape_modulus = 1e5; // stop once |F| exceeds this ...
  bool continue_untracked = false;  // ... or drop F and keep following the field
  double stop_radius = std::numeric_limits<double>::infinity();  // stop (Exit) beyond |z| = stop_radius
  long max_steps = 2'000'000;
};

struct FlowSample {
  double t;
  cplx z;
  cplx F;  // NaN where the image is not tracked
};

struct FlowCurve {
  cplx seed;
  double im_level = 0.0;
  bool has_image = false;
  std::vector<FlowSample> samples;  // ascending t, contains t = 0
  StopReason stop_backward = StopReason::Budget;
  StopReason stop_forward = StopReason::Budget;

  double t_min() const { return samples.front().t; }
  double t_max() const { return samples.back().t; }
  const FlowSample& front() const { return samples.front(); }
  const FlowSample& back() const { return samples.back(); }
};

/// Dormand-Prince 5(4) integration of z' = X(z) over [t_min, t_max] (which
/// must contain 0).  `F0` overrides eval_F at the seed, which matters where
/// the seed's image is known more accurately by other means.
FlowCurve integrate_flow(const EntireMap& map, cplx z0, double t_min, double t_max,
                         const FlowOptions& opt = {}, std::optional<cplx> F0 = std::nullopt);

/// Radius beyond which |P + log Q - a_d z^d| < 0.2 |a_d z^d| (0 when the
/// difference vanishes identically).
double far_field_radius(const EntireMap& map);

/// Smallest k >= 1 with (k pi - 2 pi) / |a_d| >= R0^d.
int min_transversal_level(const EntireMap& map);

enum class CurveFrame { ZPlane, XiPlane };

struct TransversalCurve {
  int j = 0;
  int k = 0;
  double alpha = 0.0;
  double level = 0.0;  // k pi - alpha
  CurveFrame frame = CurveFrame::ZPlane;
  std::vector<cplx> samples;
  double min_transversality = 0.0;  // min |sin| of the angle between X and the tangent
};

struct TransversalOptions {
  double delta = -1.0;  // certificate angle; default pi / (4d)
  double step = 0.02;
};

/// Level set Im(P + log Q) = k pi - alpha inside sector j (1..2d, where
/// arg(a_d z^d) lies in ((j-1) pi, j pi)), started on the sector bisector and
/// followed arclen_budget / 2 in each direction.  arg Q is continued along the
/// curve from its far-field branch.
TransversalCurve trace_transversal(const EntireMap& map, int j, int k, double alpha, double arclen_budget,
                                   const TransversalOptions& opt = {});

struct SingularityRays {
  cplx center;
  int order = 0;  // multiplicity r of the zero of Q
  std::vector<cplx> directions;  // 2(r+1) unit vectors, ascending argument in [0, 2 pi)
  double epsilon = 0.0;
};

/// Directions in which Im(F(z) - F(z0)) = 0 changes sign on a small circle
/// around the zero z0 of Q.  The radius is halved until the counts at eps and
/// eps/2 both equal 2(r+1); throws RayCountMismatch otherwise.
SingularityRays singularity_rays(const EntireMap& map, cplx z0);

/// Sign changes on the circle of the given radius, whatever their number.
SingularityRays singularity_rays_at(const EntireMap& map, cplx z0, double epsilon);

enum class EndKind { Diverges, Asymptotic, Critical, Inconclusive };

struct EndClass {
  EndKind kind = EndKind::Inconclusive;
  int j = 0;        // asymptotic index (1-based) when kind == Asymptotic
  cplx critical{};  // zero of Q when kind == Critical
};

struct Classification {
  EndClass backward, forward;
  bool full_horizontal_line() const {
    return backward.kind == EndKind::Diverges && forward.kind == EndKind::Diverges;
  }
};

/// Escape radius used by classify_trajectory: 3 max(R0, 1).
double escape_radius(const EntireMap& map);

Classification classify_trajectory(const EntireMap& map, const FlowCurve& curve);

}  // namespace logsurf
