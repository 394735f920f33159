#include "logsurf/flow.hpp"

#include <algorithm>
#include <array>

#include "logsurf/quadrature.hpp"

namespace logsurf {

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::Budget: return "budget";
    case StopReason::Singularity: return "singularity";
    case StopReason::Overflow: return "overflow";
    case StopReason::Escape: return "escape";
    case StopReason::Exit: return "exit";
    case StopReason::StepLimit: return "step_limit";
  }
  return "unknown";
}

namespace {

struct NearestRoot {
  cplx location;
  int multiplicity = 0;
  double distance = std::numeric_limits<double>::infinity();
};

NearestRoot nearest_root(const EntireMap& map, cplx z) {
  NearestRoot best;
  for (const Root& r : map.q_roots().roots) {
    const double dist = std::abs(z - r.location);
    if (dist < best.distance) best = {r.location, r.multiplicity, dist};
  }
  return best;
}

cplx unit_field(const EntireMap& map, cplx z) {
  const cplx q = eval_poly(map.Q(), z);
  const double im_p = eval_poly(map.P(), z).imag();
  return std::polar(1.0, -im_p) * std::conj(q) / std::abs(q);
}

}  // namespace

cplx field(const EntireMap& map, cplx z) {
  const auto nr = nearest_root(map, z);
  if (nr.distance <= exclusion_radius(nr.location))
    throw Error(ErrorKind::AtSingularity, "field evaluated inside a singularity exclusion ball");
  return unit_field(map, z);
}

namespace {

// Dormand-Prince 5(4) tableau.

constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct RkStep {
  cplx z;
  cplx err;
};

template <class Rhs>
RkStep dopri_step(Rhs&& f, cplx z, cplx k1, double h) {
  const cplx k2 = f(z + h * (a21 * k1));
  const cplx k3 = f(z + h * (a31 * k1 + a32 * k2));
  const cplx k4 = f(z + h * (a41 * k1 + a42 * k2 + a43 * k3));
  const cplx k5 = f(z + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
  const cplx k6 = f(z + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
  const cplx z5 = z + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
  const cplx k7 = f(z5);
  const cplx err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
  return {z5, err};
}

struct HalfResult {
  std::vector<FlowSample> samples;  // excludes the seed
  StopReason reason = StopReason::Budget;
};

// One direction of integration: sign = +1 forward, -1 backward, up to |t| = span.
HalfResult integrate_half(const EntireMap& map, cplx z0, cplx F0, double level, double sign, double span,
                          const FlowOptions& opt) {
  HalfResult out;
  if (span <= 0.0) return out;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  auto rhs = [&](cplx z) { return sign * unit_field(map, z); };

  cplx z = z0, F = F0;
  bool tracked = opt.track_image;
  const cplx untracked_F{std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  double t = 0.0;
  double h = std::min(opt.h_max, 0.01);
  long steps = 0;
  int since_renorm = 0;
  while (t < span) {
    if (++steps > opt.max_steps) {
      out.reason = StopReason::StepLimit;
      return out;
    }
    const auto nr = nearest_root(map, z);
    double fprime_scale = 1.0;
    double curvature = 0.0;
    try {
      if (tracked) fprime_scale = std::max(1.0, std::abs(eval_F_prime(map, z)));
      curvature = std::abs((nonlinearity(map, z) * unit_field(map, z)).imag());
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Overflow) {
        out.reason = StopReason::Overflow;
        return out;
      }
      if (e.kind() != ErrorKind::PoleAtZero) throw;
      curvature = std::numeric_limits<double>::infinity();
    }
    // 1 - chord/arc ~ (kappa h)^2 / 24
    double h_cap = opt.h_max;
    if (curvature > 0.0) h_cap = std::min(h_cap, std::sqrt(24.0 * opt.chord_tol) / curvature);
    if (std::isfinite(nr.distance)) h_cap = std::min(h_cap, 0.5 * nr.distance);
    h = std::min({h, h_cap, span - t});

    const cplx k1 = rhs(z);
    const RkStep step = dopri_step(rhs, z, k1, h);
    const double err_floor = 4.0 * eps * std::max(1.0, std::abs(z)) * fprime_scale;
    const double err = std::abs(step.err) * fprime_scale;
    const double allowed = std::max(opt.tol, err_floor);
    if (!(err <= allowed)) {
      h *= std::max(0.1, 0.9 * std::pow(allowed / err, 0.2));
      if (h < opt.h_min) throw Error(ErrorKind::StepCollapse, "flow step size underflow");
      continue;
    }

    cplx z_new = step.z;
    try {
      const double curvature_end = std::abs((nonlinearity(map, z_new) * unit_field(map, z_new)).imag());
      if (curvature_end * h > std::sqrt(24.0 * opt.chord_tol)) {
        h = 0.9 * std::sqrt(24.0 * opt.chord_tol) / curvature_end;
        if (h < opt.h_min) throw Error(ErrorKind::StepCollapse, "flow step size underflow");
        continue;
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::PoleAtZero) throw;
    }
    cplx F_new = F;
    if (tracked) {
      try {
        F_new = F + integrate_segment(map, z, z_new);
        if (++since_renorm >= opt.renorm_every) {
          since_renorm = 0;
          const cplx fp = eval_F_prime(map, z_new);
          const cplx dz = cplx{0.0, level - F_new.imag()} / fp;
          if (is_finite(dz) && std::abs(dz) <= 1e-4 * h) {
            F_new += integrate_segment(map, z_new, z_new + dz);
            z_new += dz;
          }
        }
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::Overflow) throw;
        out.reason = StopReason::Overflow;
        return out;
      }
    }
    t += h;
    if (span - t < 1e-12 * span) t = span;
    z = z_new;
    F = F_new;
    out.samples.push_back({sign * t, z, tracked ? F : untracked_F});

    const auto nr_new = nearest_root(map, z);
    if (std::isfinite(nr_new.distance) && nr_new.distance <= exclusion_radius(nr_new.location)) {
      out.reason = StopReason::Singularity;
      return out;
    }
    if (std::abs(z) > opt.stop_radius) {
      out.reason = StopReason::Exit;
      return out;
    }
    if (tracked && std::abs(F) > opt.escape_modulus) {
      if (!opt.continue_untracked) {
        out.reason = StopReason::Escape;
        return out;
      }
      tracked = false;
    }
    const double growth = err > 0.0 ? 0.9 * std::pow(allowed / err, 0.2) : 5.0;
    h *= std::clamp(growth, 0.2, 5.0);
  }
  return out;
}

}  // namespace

FlowCurve integrate_flow(const EntireMap& map, cplx z0, double t_min, double t_max, const FlowOptions& opt,
                         std::optional<cplx> F0) {
  if (!(t_min <= 0.0 && 0.0 <= t_max)) throw Error(ErrorKind::InvalidArgument, "t_span must contain 0");
  const auto nr = nearest_root(map, z0);
  if (nr.distance <= exclusion_radius(nr.location))
    throw Error(ErrorKind::AtSingularity, "flow seed inside a singularity exclusion ball");

  FlowCurve curve;
  curve.seed = z0;
  curve.has_image = opt.track_image;
  cplx f0{};
  if (opt.track_image) f0 = F0 ? *F0 : eval_F(map, z0);
  curve.im_level = f0.imag();

  auto back = integrate_half(map, z0, f0, curve.im_level, -1.0, -t_min, opt);
  auto fwd = integrate_half(map, z0, f0, curve.im_level, 1.0, t_max, opt);
  curve.stop_backward = back.reason;
  curve.stop_forward = fwd.reason;
  curve.samples.reserve(back.samples.size() + fwd.samples.size() + 1);
  curve.samples.assign(back.samples.rbegin(), back.samples.rend());
  curve.samples.push_back({0.0, z0, f0});
  curve.samples.insert(curve.samples.end(), fwd.samples.begin(), fwd.samples.end());
  return curve;
}

double far_field_radius(const EntireMap& map) {
  const int d = map.d();
  if (d < 1) return 0.0;
  const cplx ad = map.P().leading();
  bool lower_vanish = true;
  for (int k = 0; k < d; ++k) lower_vanish = lower_vanish && map.P()[k] == cplx{};
  if (lower_vanish && map.m() == 0 && map.Q()[0] == cplx{1.0, 0.0}) return 0.0;

  constexpr int kSamples = 256;
  auto holds = [&](double R) {
    for (int i = 0; i < kSamples; ++i) {
      const cplx z = std::polar(R, kTwoPi * (i + 0.5) / kSamples);
      const cplx q = eval_poly(map.Q(), z);
      if (q == cplx{}) return false;
      const cplx lead = ad * std::pow(z, d);
      const cplx rest = eval_poly(map.P(), z) - lead + std::log(q);
      if (!(std::abs(rest) < 0.2 * std::abs(lead))) return false;
    }
    return true;
  };
  // Smallest grid radius from which the bound holds on the next 40 grid radii.
  std::vector<double> grid;
  for (double R = 0.01; R < 1e4; R *= 1.1) grid.push_back(R);
  int run = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (holds(grid[i])) {
      if (++run >= 40) return grid[i + 1 - static_cast<std::size_t>(run)];
    } else {
      run = 0;
    }
  }
  throw Error(ErrorKind::NonConvergence, "far-field radius not found");
}

int min_transversal_level(const EntireMap& map) {
  const int d = map.d();
  if (d < 1) throw Error(ErrorKind::InvalidArgument, "transversals need deg P >= 1");
  const double R0 = far_field_radius(map);
  const double target = std::abs(map.P().leading()) * std::pow(R0, d);
  int k = 1;
  while ((k * kPi - 2.0 * kPi) < target) ++k;
  return k;
}

double escape_radius(const EntireMap& map) {
  return 3.0 * std::max(far_field_radius(map), 1.0);
}

namespace {

// Im(P + log Q) with arg Q continued from `prev_arg_q` at `prev`.
struct PhaseState {
  cplx z;
  double arg_q;
  double phase;
};

PhaseState advance_phase(const EntireMap& map, const PhaseState& prev, cplx z) {
  const cplx q_prev = eval_poly(map.Q(), prev.z);
  const cplx q = eval_poly(map.Q(), z);
  const double arg_q = prev.arg_q + wrap_angle(std::arg(q / q_prev));
  return {z, arg_q, eval_poly(map.P(), z).imag() + arg_q};
}

cplx log_derivative(const EntireMap& map, cplx z) {
  return eval_poly(map.dP(), z) + eval_poly(map.dQ(), z) / eval_poly(map.Q(), z);
}

// Newton onto phase == level starting from a state near the curve.
std::optional<PhaseState> project_to_level(const EntireMap& map, PhaseState s, double level, double max_move) {
  const cplx start = s.z;
  const double tol = 1e-13 * std::max(1.0, std::abs(level));
  for (int it = 0; it < 12; ++it) {
    const double miss = level - s.phase;
    if (std::abs(miss) <= tol) return s;
    const cplx dz = cplx{0.0, miss} / log_derivative(map, s.z);
    if (!is_finite(dz)) return std::nullopt;
    s = advance_phase(map, s, s.z + dz);
    if (std::abs(s.z - start) > max_move) return std::nullopt;
  }
  if (std::abs(level - s.phase) <= 1e3 * tol) return s;
  return std::nullopt;
}

}  // namespace

TransversalCurve trace_transversal(const EntireMap& map, int j, int k, double alpha, double arclen_budget,
                                   const TransversalOptions& opt) {
  const int d = map.d();
  if (d < 1) throw Error(ErrorKind::InvalidArgument, "transversals need deg P >= 1");
  if (j < 1 || j > 2 * d) throw Error(ErrorKind::InvalidArgument, "sector index out of range");
  if (!(alpha > 0.0 && alpha < kTwoPi)) throw Error(ErrorKind::InvalidArgument, "alpha must lie in (0, 2 pi)");
  const double level = k * kPi - alpha;
  if ((j % 2 == 1) != (level > 0.0))
    throw Error(ErrorKind::InvalidArgument, "level sign does not match the sector parity");
  if (std::abs(k) < min_transversal_level(map)) throw Error(ErrorKind::InvalidArgument, "|k| below k0");

  const double delta = opt.delta > 0.0 ? opt.delta : kPi / (4.0 * d);
  const cplx ad = map.P().leading();
  const double theta0 = -std::arg(ad) / d;
  const double lo = theta0 + (j - 1) * kPi / d;
  const double bisector = lo + 0.5 * kPi / d;
  const cplx dir = std::polar(1.0, bisector);

  // Far-field branch of arg Q at a point of the sector: arg b_m + m theta + arg(Q / (b_m z^m)).
  auto initial_state = [&](cplx z, double theta) {
    const cplx bm = map.Q().leading();
    const int m = map.m();
    const double arg_q =
        std::arg(bm) + m * theta + std::arg(eval_poly(map.Q(), z) / (bm * std::pow(z, m)));
    return PhaseState{z, arg_q, eval_poly(map.P(), z).imag() + arg_q};
  };

  // Seed: radius on the bisector where the phase crosses the level (|a_d| r^d ~ |level|).
  double r = std::pow(std::abs(level) / std::abs(ad), 1.0 / d);
  r = std::max(r, 1e-3);
  std::optional<PhaseState> seed;
  for (int attempt = 0; attempt < 8 && !seed; ++attempt) {
    seed = project_to_level(map, initial_state(r * dir, bisector), level, 0.5 * r + 1.0);
    r *= 1.5;
  }
  if (!seed) throw Error(ErrorKind::NewtonDivergence, "transversal seed projection failed");

  TransversalCurve out;
  out.j = j;
  out.k = k;
  out.alpha = alpha;
  out.level = level;
  out.frame = CurveFrame::ZPlane;

  auto trace_half = [&](double sign) {
    std::vector<PhaseState> pts;
    PhaseState s = *seed;
    double length = 0.0, h = opt.step;
    const double budget = 0.5 * arclen_budget;
    while (budget - length > 1e-9 * budget) {
      const cplx g = log_derivative(map, s.z);
      const cplx tangent = sign * std::conj(g) / std::abs(g);
      const double step = std::min(h, budget - length);
      const PhaseState pred = advance_phase(map, s, s.z + step * tangent);
      auto corr = project_to_level(map, pred, level, 0.3 * step);
      if (!corr) {
        h *= 0.5;
        if (h < 1e-10) throw Error(ErrorKind::NewtonDivergence, "transversal corrector failed");
        continue;
      }
      length += std::abs(corr->z - s.z);
      s = *corr;
      pts.push_back(s);
      h = std::min(opt.step, 1.5 * h);
    }
    return pts;
  };
  auto back = trace_half(-1.0);
  auto fwd = trace_half(1.0);
  for (auto it = back.rbegin(); it != back.rend(); ++it) out.samples.push_back(it->z);
  out.samples.push_back(seed->z);
  for (const auto& s : fwd) out.samples.push_back(s.z);

  double min_sin = 1.0;
  for (cplx z : out.samples) {
    const cplx g = log_derivative(map, z);
    const cplx tangent = std::conj(g) / std::abs(g);
    min_sin = std::min(min_sin, std::abs((std::conj(field(map, z)) * tangent).imag()));
  }
  out.min_transversality = min_sin;
  if (min_sin < std::sin(delta)) throw Error(ErrorKind::TransversalityLoss, "transversality certificate failed");
  return out;
}

namespace {

// Im of the integral of Q e^P from z0 to z0 + eps e^{i theta}, to full relative precision.
double local_im(const EntireMap& map, cplx z0, double eps, double theta) {
  const cplx dz = std::polar(eps, theta);
  auto f = [&](double s) {
    const cplx z = z0 + s * dz;
    return eval_poly(map.Q(), z) * std::exp(eval_poly(map.P(), z)) * dz;
  };
  quad::AdaptiveOptions o;
  o.abs_tol = 0.0;
  o.rel_tol = 1e-15;
  o.max_panels = 64;
  return quad::integrate_adaptive(f, {0.0, 1.0}, o).value.imag();
}

std::vector<double> ray_angles(const EntireMap& map, cplx z0, int r, double eps) {
  const int n = 64 * (r + 1);
  std::vector<double> vals(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) vals[static_cast<std::size_t>(i)] = local_im(map, z0, eps, kTwoPi * i / n);
  std::vector<double> angles;
  for (int i = 0; i < n; ++i) {
    double a = kTwoPi * i / n, b = kTwoPi * (i + 1) / n;
    double fa = vals[static_cast<std::size_t>(i)], fb = vals[static_cast<std::size_t>((i + 1) % n)];
    if (fa == 0.0) {
      angles.push_back(a);
      continue;
    }
    if (fb == 0.0 || (fa > 0.0) == (fb > 0.0)) continue;
    for (int it = 0; it < 60 && b - a > 1e-15; ++it) {
      const double mid = 0.5 * (a + b);
      const double fm = local_im(map, z0, eps, mid);
      if (fm == 0.0) {
        a = b = mid;
        break;
      }
      if ((fm > 0.0) == (fa > 0.0)) {
        a = mid;
        fa = fm;
      } else {
        b = mid;
      }
    }
    angles.push_back(std::fmod(0.5 * (a + b), kTwoPi));
  }
  std::sort(angles.begin(), angles.end());
  return angles;
}

}  // namespace

SingularityRays singularity_rays_at(const EntireMap& map, cplx z0, double epsilon) {
  const auto nr = nearest_root(map, z0);
  if (!(nr.distance <= 1e-6 * (1.0 + std::abs(z0))))
    throw Error(ErrorKind::InvalidArgument, "singularity_rays needs a zero of Q");
  if (!(epsilon > 0.0)) throw Error(ErrorKind::InvalidArgument, "epsilon must be positive");
  SingularityRays out;
  out.center = nr.location;
  out.order = nr.multiplicity;
  out.epsilon = epsilon;
  for (double t : ray_angles(map, nr.location, nr.multiplicity, epsilon)) out.directions.push_back(std::polar(1.0, t));
  return out;
}

SingularityRays singularity_rays(const EntireMap& map, cplx z0) {
  const auto nr = nearest_root(map, z0);
  if (!(nr.distance <= 1e-6 * (1.0 + std::abs(z0))))
    throw Error(ErrorKind::InvalidArgument, "singularity_rays needs a zero of Q");
  const int r = nr.multiplicity;
  const cplx center = nr.location;
  // Keep the circle well inside the distance to the other zeros.
  double sep = std::numeric_limits<double>::infinity();
  for (const Root& other : map.q_roots().roots) {
    if (other.location != center) sep = std::min(sep, std::abs(other.location - center));
  }
  double eps = std::min(1e-3, 0.1 * sep);
  const std::size_t expected = static_cast<std::size_t>(2 * (r + 1));
  for (int attempt = 0; attempt <= 8; ++attempt) {
    const auto a = ray_angles(map, center, r, eps);
    const auto b = ray_angles(map, center, r, 0.5 * eps);
    if (a.size() == expected && b.size() == expected) {
      SingularityRays out;
      out.center = center;
      out.order = r;
      out.epsilon = eps;
      for (double t : a) out.directions.push_back(std::polar(1.0, t));
      return out;
    }
    eps *= 0.5;
  }
  throw Error(ErrorKind::RayCountMismatch, "sign-change count differs from 2(r+1)");
}

Classification classify_trajectory(const EntireMap& map, const FlowCurve& curve) {
  const double R_esc = escape_radius(map);
  const int d = map.d();
  auto classify_end = [&](const FlowSample& s, StopReason reason) {
    EndClass e;
    if (reason == StopReason::Singularity) {
      e.kind = EndKind::Critical;
      e.critical = nearest_root(map, s.z).location;
      return e;
    }
    if (reason == StopReason::Escape || reason == StopReason::Overflow) {
      e.kind = EndKind::Diverges;
      return e;
    }
    if (std::abs(s.z) > R_esc && d >= 1) {
      const double margin = kPi / (2.0 * d) - kPi / (8.0 * d);
      const auto& dirs = map.directions();
      for (std::size_t j = 0; j < dirs.size(); ++j) {
        if (std::abs(wrap_angle(std::arg(s.z) - std::arg(dirs[j]))) < margin) {
          e.kind = EndKind::Asymptotic;
          e.j = static_cast<int>(j) + 1;
          return e;
        }
      }
      e.kind = EndKind::Diverges;
    }
    return e;
  };
  return {classify_end(curve.front(), curve.stop_backward), classify_end(curve.back(), curve.stop_forward)};
}

}  // namespace logsurf
