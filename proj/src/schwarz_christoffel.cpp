#include "logsurf/schwarz_christoffel.hpp"

#include <Eigen/Dense>
#include <algorithm>

#include "logsurf/quadrature.hpp"

namespace logsurf {

namespace {

constexpr double kCircleTol = 1e-12;
constexpr double kHitTol = 1e-14;

std::vector<cplx> all_prevertices(const SCMapSpec& spec) {
  std::vector<cplx> out;
  for (const auto& v : spec.vertices) out.push_back(v.z);
  for (const auto& e : spec.ends) out.push_back(e.z);
  return out;
}

// Principal log with a signed-zero imaginary part read as +0, so log(-1) = i pi.
cplx principal_log(cplx w) { return std::log(cplx{w.real(), w.imag() == 0.0 ? 0.0 : w.imag()}); }

// log (t - p) on the branch that is principal at t = 0 and continuous inside the disk.
cplx log_factor(cplx t, cplx p) { return principal_log(-p) + principal_log(1.0 - t / p); }

}  // namespace

void SCMapSpec::validate() const {
  if (A == cplx{}) throw Error(ErrorKind::InvalidArgument, "A must be nonzero");
  for (const auto& v : vertices)
    if (!(v.alpha > 0.0)) throw Error(ErrorKind::InvalidArgument, "vertex angles must be positive");
  for (const auto& e : ends)
    if (!(e.beta >= 0.0)) throw Error(ErrorKind::InvalidArgument, "end angles must be non-negative");
  const auto pts = all_prevertices(*this);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (std::abs(std::abs(pts[i]) - 1.0) > kCircleTol)
      throw Error(ErrorKind::InvalidArgument, "prevertices must lie on the unit circle");
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(pts[i] - pts[j]) < kCircleTol) throw Error(ErrorKind::InvalidArgument, "coincident prevertices");
  }
}

void LogPolygonSpec::validate() const {
  if (vertices.empty() && end_angles.empty()) throw Error(ErrorKind::InvalidArgument, "empty log-polygon");
  for (const auto& v : vertices)
    if (!(v.angle > 0.0)) throw Error(ErrorKind::InvalidArgument, "vertex angles must be positive");
  for (double a : end_angles)
    if (!(a >= 0.0)) throw Error(ErrorKind::InvalidArgument, "end angles must be non-negative");
  if (symmetry < 1) throw Error(ErrorKind::InvalidArgument, "symmetry order must be at least 1");
}

cplx sc_integrand(const SCMapSpec& spec, cplx t) {
  cplx log_sum = spec.C * t;
  for (const auto& v : spec.vertices) log_sum += (v.alpha - 1.0) * log_factor(t, v.z);
  for (const auto& e : spec.ends) log_sum += (-e.beta - 1.0) * log_factor(t, e.z);
  return std::exp(log_sum);
}

cplx sc_derivative(const SCMapSpec& spec, cplx z) { return spec.A * sc_integrand(spec, z); }

cplx sc_eval(const SCMapSpec& spec, cplx z, double tol) {
  if (std::abs(z) > 1.0 + kCircleTol) throw Error(ErrorKind::InvalidArgument, "sc_eval needs |z| <= 1");
  for (const auto& e : spec.ends)
    if (std::abs(z - e.z) < kHitTol) throw Error(ErrorKind::EndpointDivergence, "z is an end prevertex");
  if (z == cplx{}) return spec.B;

  const quad::AdaptiveOptions qopt{tol, tol, 8000};
  auto radial = [&](double s) { return z * sc_integrand(spec, s * z); };

  const SCVertex* hit = nullptr;
  for (const auto& v : spec.vertices)
    if (std::abs(z - v.z) < kHitTol) hit = &v;

  cplx integral;
  if (hit == nullptr) {
    std::vector<double> init{0.0, 0.5, 1.0};
    if (std::abs(z) > 0.9) init = {0.0, 0.5, 0.9, 0.99, 1.0};
    const auto r = quad::integrate_adaptive(radial, init, qopt);
    if (!r.converged) throw Error(ErrorKind::ToleranceNotMet, "sc_eval quadrature did not converge");
    integral = r.value;
  } else {
    // s = 1 - u^(1/a) absorbs the (1 - s)^(a - 1) endpoint behaviour.
    const double a = hit->alpha;
    const auto head = quad::integrate_adaptive(radial, {0.0, 0.25, 0.5}, qopt);
    // With t - z_k = -(1 - s) z_k the endpoint factor times the Jacobian is the constant (-z_k)^(a-1) / a.
    const cplx endpoint = std::exp((a - 1.0) * principal_log(-hit->z)) / a;
    auto tail_fn = [&](double u) {
      const cplx t = (1.0 - std::pow(u, 1.0 / a)) * z;
      cplx log_rest = spec.C * t;
      for (const auto& v : spec.vertices)
        if (&v != hit) log_rest += (v.alpha - 1.0) * log_factor(t, v.z);
      for (const auto& e : spec.ends) log_rest += (-e.beta - 1.0) * log_factor(t, e.z);
      return z * std::exp(log_rest) * endpoint;
    };
    const double u_end = std::pow(0.5, a);
    const auto tail = quad::integrate_adaptive(tail_fn, {0.0, 0.5 * u_end, u_end}, qopt);
    if (!head.converged || !tail.converged)
      throw Error(ErrorKind::ToleranceNotMet, "sc_eval quadrature did not converge");
    integral = head.value + tail.value;
  }
  return spec.A * integral + spec.B;
}

cplx sc_nonlinearity(const SCMapSpec& spec, cplx z) {
  cplx sum = spec.C;
  for (const auto& v : spec.vertices) {
    if (std::abs(z - v.z) < kHitTol) throw Error(ErrorKind::PoleAtPrevertex, "z is a prevertex");
    sum += (v.alpha - 1.0) / (z - v.z);
  }
  for (const auto& e : spec.ends) {
    if (std::abs(z - e.z) < kHitTol) throw Error(ErrorKind::PoleAtPrevertex, "z is a prevertex");
    sum += (-e.beta - 1.0) / (z - e.z);
  }
  return sum;
}

cplx schwarzian_eval(const SchwarzianSpec& spec, cplx z) {
  cplx sum{};
  for (std::size_t k = 0; k < spec.z.size(); ++k) {
    const cplx dz = z - spec.z[k];
    if (std::abs(dz) < kHitTol) throw Error(ErrorKind::PoleAtPrevertex, "z is a prevertex");
    sum += (1.0 - spec.alpha[k] * spec.alpha[k]) / (2.0 * dz * dz) + spec.beta[k] / dz;
  }
  return sum;
}

SchwarzianResiduals sc_schwarzian_residuals(const SchwarzianSpec& spec) {
  if (spec.alpha.size() != spec.z.size() || spec.beta.size() != spec.z.size())
    throw Error(ErrorKind::InvalidArgument, "Schwarzian spec lists differ in length");
  cplx s1{}, s2{}, s3{};
  for (std::size_t k = 0; k < spec.z.size(); ++k) {
    const double c = 1.0 - spec.alpha[k] * spec.alpha[k];
    s1 += spec.beta[k];
    s2 += 2.0 * spec.beta[k] * spec.z[k] + c;
    s3 += spec.beta[k] * spec.z[k] * spec.z[k] + c * spec.z[k];
  }
  return {std::abs(s1), std::abs(s2), std::abs(s3)};
}

SCMapSpec build_DN_spec(int d, int N, cplx u, cplx v) {
  if (d < 1 || N < 1) throw Error(ErrorKind::InvalidArgument, "D_N needs d >= 1 and N >= 1");
  if (std::abs(std::abs(u) - 1.0) > kCircleTol || std::abs(std::abs(v) - 1.0) > kCircleTol)
    throw Error(ErrorKind::InvalidArgument, "phases must have unit modulus");
  const double angle = 2.0 * (2 * N + 1);
  SCMapSpec spec;
  for (int k = 0; k < d; ++k) {
    const cplx w = std::polar(1.0, kTwoPi * k / d);
    spec.vertices.push_back({u * w, angle});
    spec.ends.push_back({v * w, angle});
  }
  for (const auto& a : spec.vertices)
    for (const auto& b : spec.ends)
      if (std::abs(a.z - b.z) < kCircleTol)
        throw Error(ErrorKind::PrevertexCollision, "finite and end prevertices coincide");
  return spec;
}

namespace {

void require_gauss(const EntireMap& map) {
  const int d = map.d();
  bool ok = d >= 1 && map.m() == 0 && map.Q()[0] == cplx{1.0, 0.0} && map.P()[d] == cplx{1.0, 0.0};
  for (int k = 0; k < d && ok; ++k) ok = map.P()[k] == cplx{};
  if (!ok) throw Error(ErrorKind::InvalidArgument, "symmetric solve needs P = z^d and Q = 1");
}

}  // namespace

LogPolygonSpec build_DN_polygon(const EntireMap& map, int N) {
  require_gauss(map);
  LogPolygonSpec poly;
  poly.symmetry = map.d();
  for (int j = 1; j <= map.d(); ++j) {
    poly.vertices.push_back({asymptotic_value(map, j).w, kTwoPi * (2 * N + 1)});
    poly.end_angles.push_back(kTwoPi * (2 * N + 1));
  }
  return poly;
}

SymmetricSolution solve_symmetric_parameters(const EntireMap& map, int N, const SymmetricSolveOptions& opt) {
  require_gauss(map);
  const int d = map.d();
  const cplx u = map.directions()[0] / std::abs(map.directions()[0]);
  const cplx target = asymptotic_value(map, 1).w;
  const cplx probes[2] = {std::polar(0.6, 0.4), std::polar(0.8, 1.3)};

  auto make_spec = [&](const Eigen::Vector4d& x) {
    SCMapSpec s = build_DN_spec(d, N, u, u * std::polar(1.0, x[0]));
    s.A = std::polar(x[1], x[2]);
    s.B = x[3];
    return s;
  };
  auto residual = [&](const Eigen::Vector4d& x) {
    const SCMapSpec s = make_spec(x);
    Eigen::VectorXd r(7);
    const cplx fv = sc_eval(s, u, opt.quad_tol) - target;
    r[0] = fv.real();
    r[1] = fv.imag();
    r[2] = std::abs(sc_eval(s, 0.0, opt.quad_tol));
    for (int i = 0; i < 2; ++i) {
      const cplx sym = sc_eval(s, std::conj(probes[i]), opt.quad_tol) - std::conj(sc_eval(s, probes[i], opt.quad_tol));
      r[3 + 2 * i] = sym.real();
      r[4 + 2 * i] = sym.imag();
    }
    return r;
  };

  // F(z_1) is linear in A, which gives the starting A at the guessed phase.
  const double phase0 = std::isnan(opt.initial_phase) ? kPi / d : opt.initial_phase;
  const cplx a0 = target / sc_eval(build_DN_spec(d, N, u, u * std::polar(1.0, phase0)), u, opt.quad_tol);
  Eigen::Vector4d x(phase0, std::abs(a0), std::arg(a0), 0.0);
  Eigen::VectorXd r = residual(x);
  int it = 0;
  for (; it < opt.max_iterations && r.lpNorm<Eigen::Infinity>() > opt.target; ++it) {
    Eigen::MatrixXd J(7, 4);
    for (int c = 0; c < 4; ++c) {
      const double h = 1e-6 * std::max(1.0, std::abs(x[c]));
      Eigen::Vector4d xp = x, xm = x;
      xp[c] += h;
      xm[c] -= h;
      J.col(c) = (residual(xp) - residual(xm)) / (2.0 * h);
    }
    const Eigen::Vector4d step = J.colPivHouseholderQr().solve(-r);
    double lambda = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 30; ++ls, lambda *= 0.5) {
      Eigen::Vector4d trial = x + lambda * step;
      if (trial[1] <= 0.0) continue;
      try {
        const Eigen::VectorXd rt = residual(trial);
        if (rt.norm() < r.norm()) {
          x = trial;
          r = rt;
          improved = true;
          break;
        }
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::PrevertexCollision && e.kind() != ErrorKind::ToleranceNotMet) throw;
      }
    }
    if (!improved) break;
  }
  const double res = r.lpNorm<Eigen::Infinity>();
  if (res > opt.target)
    throw Error(ErrorKind::SolverDivergence,
                "symmetric solve stalled after " + std::to_string(it) + " iterations, residual " + std::to_string(res));

  SymmetricSolution out;
  out.spec = make_spec(x);
  out.phase = x[0];
  out.residual = res;
  out.iterations = it;
  for (const auto& v : out.spec.vertices) out.vertex_images.push_back(sc_eval(out.spec, v.z, opt.quad_tol));
  return out;
}

}  // namespace logsurf
