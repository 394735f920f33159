#include "logsurf/verify.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <random>

#include "logsurf/run_config.hpp"
#include "strf.hpp"

namespace logsurf {

namespace {

const Polynomial kOne{1.0};

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

cplx random_in_disk(std::mt19937_64& rng, double r) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return std::polar(r * std::sqrt(u(rng)), kTwoPi * u(rng));
}

struct CheckInfo {
  const char* id;
  const char* anchor;
  double tolerance;
};

const CheckInfo kChecks[] = {
    {"c1",
     "asymptotic values of z^2 and z^3 against Gamma-function closed forms",
     1e-8},
    {"c2",
     "F = e^z - 1 for P = z, Q = 1 on |z| <= 3",
     1e-10},
    {"c3",
     "rotation and conjugation symmetries of the Gauss maps on |z| <= 2",
     1e-10},
    {"c4",
     "flow invariants on z^3: level of Im F, increasing Re F, unit speed",
     1e-6},
    {"c5",
     "trapping of E2 forward and E3 backward for z^2",
     0.0},
    {"c6",
     "separatrix of z^2 lands at a_1; its two sides map to opposite half-planes",
     1e-6},
    {"c7",
     "2(r+1) singularity rays at every zero of Q, stable when eps is halved",
     1e-6},
    {"c8",
     "skeleton counts: deg P infinite nodes and deg Q finite order excess, K = 2",
     0.0},
    {"c9",
     "nonlinearity F''/F' = P' + Q'/Q against differences of log F'",
     1e-6},
    {"c10",
     "Schwarz-Christoffel wedge against ((1+z)/(1-z))^alpha",
     1e-8},
    {"c11",
     "symmetric D_N solve for z^2, N = 1: residual, vertex images, 2d poles of the nonlinearity",
     1e-6},
    {"c12",
     "conformal radius growth and kernel convergence of D_N are limit statements without a finite certificate; "
     "only the finite D_N structure is checked",
     0.0},
};

CheckResult make(const std::string& id) {
  CheckResult r;
  r.id = id;
  for (const auto& c : kChecks) {
    if (id != c.id) continue;
    r.anchor = c.anchor;
    r.tolerance = c.tolerance;
  }
  return r;
}

// P and Q of the skeleton-count grid.
std::vector<Polynomial> grid_P() {
  return {Polynomial{0.0, 1.0}, Polynomial::monomial(2), Polynomial::monomial(3), Polynomial{0.0, -1.0, 0.0, 1.0}};
}
std::vector<Polynomial> grid_Q() { return {kOne, Polynomial{0.0, 1.0}, Polynomial{-1.0, 0.0, 1.0}}; }

std::string poly_str(const Polynomial& p) {
  std::string s;
  for (int k = p.degree(); k >= 0; --k) {
    const cplx c = p[k];
    if (c == cplx{} && p.degree() > 0) continue;
    std::string coef = c.imag() == 0.0 ? strf("%g", c.real()) : strf("(%g%+gi)", c.real(), c.imag());
    if (k > 0 && coef == "1") coef.clear();
    if (k > 0 && coef == "-1") coef = "-";
    std::string term = coef + (k == 0 ? "" : k == 1 ? "z" : "z^" + std::to_string(k));
    if (!s.empty() && term[0] != '-') s += "+";
    s += term;
  }
  return s;
}

// Fourth-order central difference of log f, written with log ratios so the
// branch of the logarithm never jumps.
cplx log_derivative(const std::function<cplx(cplx)>& f, cplx z, double h) {
  auto dlog = [&](double k) { return std::log(f(z + k * h) / f(z - k * h)); };
  return (8.0 * dlog(1.0) - dlog(2.0)) / (12.0 * h);
}

CheckResult c1(const VerifyOptions& o) {
  auto r = make("c1");
  double worst = 0.0, slowest = 0.0;
  {
    Timer t;
    const EntireMap g(Polynomial::monomial(2), kOne, o.quad_tol);
    const auto v = asymptotic_values(g);
    slowest = std::max(slowest, t.seconds());
    const double a = std::tgamma(1.5);
    if (v.size() != 2) throw Error(ErrorKind::ToleranceNotMet, "z^2 must have two asymptotic values");
    worst = std::max({worst, std::abs(v[0].w - cplx{0.0, a}), std::abs(v[1].w - cplx{0.0, -a})});
  }
  {
    Timer t;
    const EntireMap g(Polynomial::monomial(3), kOne, o.quad_tol);
    const auto v = asymptotic_values(g);
    slowest = std::max(slowest, t.seconds());
    const double g43 = std::tgamma(4.0 / 3.0);
    if (v.size() != 3) throw Error(ErrorKind::ToleranceNotMet, "z^3 must have three asymptotic values");
    for (int j = 0; j < 3; ++j) {
      const cplx w = v[static_cast<std::size_t>(j)].w;
      worst = std::max({worst, std::abs(std::abs(w) - g43), std::abs(wrap_angle(std::arg(w) - (2 * j + 1) * kPi / 3.0))});
    }
  }
  r.measured = worst;
  r.pass = worst <= r.tolerance && slowest < 1.0;
  r.detail = strf("slowest map %.3f s (limit 1 s)", slowest);
  return r;
}

CheckResult c2(const VerifyOptions& o) {
  auto r = make("c2");
  Timer t;
  const EntireMap e(Polynomial{0.0, 1.0}, kOne, o.quad_tol);
  std::mt19937_64 rng(2);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const cplx z = random_in_disk(rng, 3.0);
    worst = std::max(worst, std::abs(eval_F(e, z) - (std::exp(z) - 1.0)));
  }
  const double s = t.seconds();
  r.measured = worst;
  r.pass = worst <= r.tolerance && s < 1.0;
  r.detail = strf("100 points, %.3f s (limit 1 s)", s);
  return r;
}

CheckResult c3(const VerifyOptions& o) {
  auto r = make("c3");
  std::mt19937_64 rng(3);
  double rot = 0.0, conj = 0.0;
  for (int d : {2, 3}) {
    const EntireMap g(Polynomial::monomial(d), kOne, o.quad_tol);
    const cplx omega = std::polar(1.0, kTwoPi / d);
    for (int i = 0; i < 100; ++i) {
      const cplx z = random_in_disk(rng, 2.0);
      const cplx f = eval_F(g, z);
      rot = std::max(rot, std::abs(eval_F(g, omega * z) - omega * f));
      conj = std::max(conj, std::abs(eval_F(g, std::conj(z)) - std::conj(f)));
    }
  }
  r.measured = std::max(rot, conj);
  r.pass = r.measured <= r.tolerance;
  r.detail = strf("d = 2, 3, 100 points each; rotation %.2e, conjugation %.2e", rot, conj);
  return r;
}

CheckResult c4(const VerifyOptions& o) {
  auto r = make("c4");
  const EntireMap cubic(Polynomial::monomial(3), kOne, o.quad_tol);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  double drift = 0.0, speed = 0.0, arc_min = 1e300;
  long nonmonotone = 0, samples = 0;
  for (int i = 0; i < 20; ++i) {
    const cplx z0{u(rng), u(rng)};
    const auto c = integrate_flow(cubic, z0, -10.0, 10.0);
    arc_min = std::min(arc_min, c.t_max() - c.t_min());
    for (std::size_t k = 0; k < c.samples.size(); ++k) {
      const auto& b = c.samples[k];
      drift = std::max(drift, std::abs(eval_F(cubic, b.z).imag() - c.im_level));
      ++samples;
      if (k == 0) continue;
      const auto& a = c.samples[k - 1];
      if (!(b.F.real() > a.F.real())) ++nonmonotone;
      speed = std::max(speed, std::abs(std::abs(b.z - a.z) / (b.t - a.t) - 1.0));
    }
  }
  r.measured = drift;
  r.pass = drift <= r.tolerance && nonmonotone == 0 && speed <= 1e-6;
  r.detail = strf("20 seeds, %ld samples; %ld steps where Re F fails to increase; max |speed - 1| %.2e (tol 1e-6); shortest arc %.2f",
                  samples, nonmonotone, speed, arc_min);
  return r;
}

CheckResult c5(const VerifyOptions& o) {
  auto r = make("c5");
  const EntireMap gauss(Polynomial::monomial(2), kOne, o.quad_tol);
  FlowOptions fo;
  fo.track_image = false;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> frac(0.01, 0.99), xs(0.4, 3.0);
  long violations = 0, samples = 0;
  for (int band : {2, 3}) {
    const bool forward = band == 2;
    for (int i = 0; i < 50; ++i) {
      const double v = (band + frac(rng)) * kPi;
      const double x = xs(rng);
      const cplx z0{x, v / (2.0 * x)};
      const auto c = forward ? integrate_flow(gauss, z0, 0.0, 50.0, fo) : integrate_flow(gauss, z0, -50.0, 0.0, fo);
      for (const auto& s : c.samples) {
        const double im = (s.z * s.z).imag();
        ++samples;
        if (!(im > band * kPi && im < (band + 1) * kPi)) ++violations;
      }
    }
  }
  r.measured = static_cast<double>(violations);
  r.pass = violations == 0;
  r.detail = strf("100 seeds, arc length 50, %ld samples", samples);
  return r;
}

CheckResult c6(const VerifyOptions& o) {
  auto r = make("c6");
  const EntireMap gauss(Polynomial::monomial(2), kOne, o.quad_tol);
  const BBox box;
  const cplx a1 = asymptotic_value(gauss, 1).w;
  const double R = separatrix_seed_radius(gauss, 1, box);
  const auto seeds = asymptotic_seeds(gauss, 1, 1, true, R);
  const auto it = std::find_if(seeds.begin(), seeds.end(), [](const AsymptoticSeed& s) { return s.k == 1; });
  if (it == seeds.end()) throw Error(ErrorKind::SeedFailure, "no k = 1 seed");
  // Tracing stops once |F| passes the escape modulus, where an absolute level
  // tolerance of 1e-6 is no longer resolvable.
  const auto sep = trace_asymptotic_separatrix(gauss, *it, 60.0, FlowOptions{});
  const auto& c = sep.curve;
  // The landing end is the sample with the largest t.
  const double landing = std::abs(eval_F(gauss, c.back().z) - a1);

  double drift = 0.0;
  long checked = 0, violations = 0, in_box = 0;
  const double eta = 1e-3;
  for (std::size_t k = 1; k + 1 < c.samples.size(); ++k) {
    const cplx z = c.samples[k].z;
    if (!box.contains(z)) continue;
    ++in_box;
    drift = std::max(drift, std::abs(eval_F(gauss, z).imag() - a1.imag()));
    const cplx tangent = c.samples[k + 1].z - c.samples[k - 1].z;
    const cplx n = cplx{0.0, 1.0} * tangent / std::abs(tangent);
    // Skip points where the offset moves Im F by less than the quadrature can resolve.
    if (std::abs(eval_F_prime(gauss, z)) * eta < 1e-8) continue;
    ++checked;
    const double left = eval_F(gauss, z + eta * n).imag() - a1.imag();
    const double right = eval_F(gauss, z - eta * n).imag() - a1.imag();
    if (!(left > 0.0 && right < 0.0)) ++violations;
  }
  r.measured = landing;
  r.pass = landing <= r.tolerance && violations == 0 && checked > 0 && drift <= 1e-6;
  r.detail = strf("arc %.1f of budget 60; |Im F - Im a_1| <= %.2e on %ld window samples; side violations %ld of %ld", c.t_max() - c.t_min(),
                  drift, in_box, violations, checked);
  return r;
}

CheckResult c7(const VerifyOptions& o) {
  auto r = make("c7");
  const std::vector<Polynomial> Ps{Polynomial(), Polynomial{0.0, 1.0}};
  const std::vector<Polynomial> Qs{Polynomial{0.0, 1.0}, Polynomial::monomial(2), Polynomial{-1.0, 0.0, 1.0}};
  int mismatches = 0, roots = 0;
  double axis_err = 0.0;
  for (const auto& P : Ps) {
    for (const auto& Q : Qs) {
      const EntireMap m(P, Q, o.quad_tol);
      for (const auto& root : m.q_roots().roots) {
        ++roots;
        const std::size_t expected = static_cast<std::size_t>(2 * (root.multiplicity + 1));
        const auto a = singularity_rays(m, root.location);
        const auto b = singularity_rays_at(m, root.location, 0.5 * a.epsilon);
        if (a.directions.size() != expected || b.directions.size() != expected) {
          ++mismatches;
          continue;
        }
        // Real coefficients make Im F vanish on the real axis, so 0 and pi are
        // always rays; for P = 0, Q = z^r the rays are exactly k pi / (r+1).
        std::vector<double> known{0.0, kPi};
        const bool pure = P.degree() == 0 && Q.degree() == root.multiplicity;
        if (pure)
          for (int k = 0; k < 2 * (root.multiplicity + 1); ++k) known.push_back(k * kPi / (root.multiplicity + 1));
        for (double ang : known) {
          double best = kPi;
          for (cplx d : a.directions) best = std::min(best, std::abs(wrap_angle(std::arg(d) - ang)));
          axis_err = std::max(axis_err, best);
        }
      }
    }
  }
  r.measured = axis_err;
  r.pass = mismatches == 0 && axis_err <= r.tolerance;
  r.detail = strf("%d zeros over 6 maps; ray-count mismatches %d (at eps and eps/2)", roots, mismatches);
  return r;
}

CheckResult c8(const VerifyOptions& o) {
  auto r = make("c8");
  int failed = 0;
  double slowest = 0.0;
  std::string detail;
  for (const auto& P : grid_P()) {
    for (const auto& Q : grid_Q()) {
      const EntireMap m(P, Q, o.quad_tol);
      const BBox box = auto_window(m, 2);
      PartitionOptions po;
      po.grid_n = std::max(400, static_cast<int>(std::ceil(box.height() / 0.25)));
      Timer t;
      std::string status;
      bool ok = false;
      try {
        const auto res = analyze_window(m, 2, box, po);
        const int inf = res.skeleton.infinite_count(), exc = res.skeleton.finite_order_excess();
        ok = inf == P.degree() && exc == Q.degree();
        status = strf("%d/%d", inf, exc);
      } catch (const Error& e) {
        status = std::string("error ") + to_string(e.kind());
      }
      const double s = t.seconds();
      slowest = std::max(slowest, s);
      if (!ok || s >= 60.0) ++failed;
      if (!detail.empty()) detail += ", ";
      detail += "(" + poly_str(P) + ", " + poly_str(Q) + ") " + status + (ok ? "" : " FAIL");
    }
  }
  r.measured = failed;
  r.pass = failed == 0;
  r.detail = strf("slowest case %.2f s (limit 60 s); inf/excess: ", slowest) + detail;
  return r;
}

CheckResult c9(const VerifyOptions& o) {
  auto r = make("c9");
  std::vector<EntireMap> maps;
  for (const auto& P : grid_P())
    for (const auto& Q : grid_Q()) maps.emplace_back(P, Q, o.quad_tol);
  maps.emplace_back(Polynomial{0.0, 0.5, cplx{1.0, 1.0}}, Polynomial{cplx{0.0, -0.3}, 1.0}, o.quad_tol);
  std::mt19937_64 rng(9);
  double worst = 0.0;
  for (const auto& m : maps) {
    int done = 0;
    while (done < 50) {
      const cplx z = random_in_disk(rng, 2.0);
      if (m.q_roots().distance_to_nearest(z) <= 0.1) continue;
      const cplx fd = log_derivative([&](cplx t) { return eval_F_prime(m, t); }, z, 1e-3);
      worst = std::max(worst, std::abs(fd - nonlinearity(m, z)));
      ++done;
    }
  }
  r.measured = worst;
  r.pass = worst <= r.tolerance;
  r.detail = strf("%zu maps, 50 points each", maps.size());
  return r;
}

// w = ((1+z)/(1-z))^alpha: A = 2 alpha exp(i pi (alpha+1)) for the principal
// branches of the integrand at t = 0, and B = 1.
SCMapSpec wedge(double alpha) {
  SCMapSpec s;
  s.vertices = {{-1.0, alpha}};
  s.ends = {{1.0, alpha}};
  s.A = 2.0 * alpha * std::exp(cplx{0.0, kPi * (alpha + 1.0)});
  s.B = 1.0;
  return s;
}

CheckResult c10(const VerifyOptions&) {
  auto r = make("c10");
  std::mt19937_64 rng(10);
  double eval_err = 0.0, nl_err = 0.0, schw = 0.0;
  for (double alpha : {3.0, 0.5}) {
    const SCMapSpec s = wedge(alpha);
    std::vector<cplx> pts;
    for (int i = 0; i < 200; ++i) pts.push_back(random_in_disk(rng, 0.9));
    for (int i = 0; i < 64; ++i) pts.push_back(std::polar(0.9, kTwoPi * i / 64));
    for (cplx z : pts) eval_err = std::max(eval_err, std::abs(sc_eval(s, z) - std::pow((1.0 + z) / (1.0 - z), alpha)));
    for (int i = 0; i < 20; ++i) {
      const cplx z = random_in_disk(rng, 0.8);
      const cplx fd = log_derivative([&](cplx t) { return sc_derivative(s, t); }, z, 1e-3);
      nl_err = std::max(nl_err, std::abs(fd - sc_nonlinearity(s, z)));
    }
    // {w, z} = 2 (1 - alpha^2) / (1 - z^2)^2, whose residues at +-1 are -+(1 - alpha^2) / 2.
    SchwarzianSpec sp;
    sp.z = {-1.0, 1.0};
    sp.alpha = {alpha, alpha};
    sp.beta = {0.5 * (1.0 - alpha * alpha), -0.5 * (1.0 - alpha * alpha)};
    schw = std::max(schw, sc_schwarzian_residuals(sp).max());
  }
  r.measured = eval_err;
  r.pass = eval_err <= r.tolerance && nl_err <= 1e-6 && schw <= 1e-9;
  r.detail = strf("alpha = 3, 1/2; nonlinearity %.2e (tol 1e-6); Schwarzian residuals %.2e (tol 1e-9)", nl_err, schw);
  return r;
}

struct PoleCount {
  int poles = 0;
  std::vector<double> residues;
};

// Poles of the SC nonlinearity on the unit circle: local maxima of |N| on a
// fine scan, each confirmed by a contour residue.
PoleCount circle_poles(const SCMapSpec& s) {
  const int n = 4096;
  std::vector<double> mag(n);
  for (int i = 0; i < n; ++i) {
    try {
      mag[static_cast<std::size_t>(i)] = std::abs(sc_nonlinearity(s, std::polar(1.0, kTwoPi * (i + 0.5) / n)));
    } catch (const Error&) {
      mag[static_cast<std::size_t>(i)] = std::numeric_limits<double>::infinity();
    }
  }
  std::vector<double> sorted = mag;
  std::nth_element(sorted.begin(), sorted.begin() + n / 2, sorted.end());
  const double median = sorted[n / 2];
  const double radius = 4.0 * kTwoPi / n;
  PoleCount out;
  std::vector<double> found;
  for (int i = 0; i < n; ++i) {
    const double m = mag[static_cast<std::size_t>(i)];
    if (!(m > 10.0 * median) || m < mag[static_cast<std::size_t>((i + n - 1) % n)] ||
        m < mag[static_cast<std::size_t>((i + 1) % n)])
      continue;
    const double theta = kTwoPi * (i + 0.5) / n;
    if (std::any_of(found.begin(), found.end(), [&](double f) { return std::abs(wrap_angle(f - theta)) < 2.0 * radius; }))
      continue;
    const cplx c = std::polar(1.0, theta);
    cplx sum{};
    const int m_pts = 256;
    for (int k = 0; k < m_pts; ++k) {
      const cplx e = std::polar(1.0, kTwoPi * k / m_pts);
      sum += sc_nonlinearity(s, c + radius * e) * radius * e;
    }
    const double res = (sum / static_cast<double>(m_pts)).real();
    if (std::abs(res) > 0.5) {
      found.push_back(theta);
      out.residues.push_back(res);
    }
  }
  out.poles = static_cast<int>(found.size());
  return out;
}

CheckResult c11(const VerifyOptions& o) {
  auto r = make("c11");
  Timer t;
  const EntireMap gauss(Polynomial::monomial(2), kOne, o.quad_tol);
  const auto sol = solve_symmetric_parameters(gauss, 1);
  const double a = std::tgamma(1.5);
  double img = 1e300;
  if (sol.vertex_images.size() == 2)
    img = std::max(std::abs(sol.vertex_images[0] - cplx{0.0, a}), std::abs(sol.vertex_images[1] - cplx{0.0, -a}));
  const auto pc = circle_poles(sol.spec);
  const double s = t.seconds();
  r.measured = sol.residual;
  r.pass = sol.residual <= r.tolerance && img <= 1e-5 && pc.poles == 4 && s < 60.0;
  std::string res;
  for (double v : pc.residues) res += strf(" %.6f", v);
  r.detail = strf("image error %.2e (tol 1e-5); %d poles on |z| = 1 (want 4), residues%s; %.2f s", img, pc.poles,
                  res.c_str(), s);
  return r;
}

CheckResult c12(const VerifyOptions& o) {
  auto r = make("c12");
  const EntireMap gauss(Polynomial::monomial(2), kOne, o.quad_tol);
  const double a = std::tgamma(1.5);
  int failed = 0;
  std::string detail = "not reproducible at finite N; proxy over N = 1..3:";
  for (int N = 1; N <= 3; ++N) {
    const auto sol = solve_symmetric_parameters(gauss, N);
    const auto pc = circle_poles(sol.spec);
    // Residues of the nonlinearity are the exponents 4N+1 (vertices) and -4N-3 (ends).
    int exponents_ok = 0;
    for (double v : pc.residues)
      if (std::abs(v - (4 * N + 1)) < 1e-6 || std::abs(v + (4 * N + 3)) < 1e-6) ++exponents_ok;
    const double img = sol.vertex_images.size() == 2 ? std::abs(sol.vertex_images[0] - cplx{0.0, a}) : 1e300;
    const bool ok = sol.residual <= 1e-6 && pc.poles == 4 && exponents_ok == 4 && img <= 1e-5;
    if (!ok) ++failed;
    detail += strf(" N=%d %s (poles %d, residual %.1e)", N, ok ? "ok" : "FAIL", pc.poles, sol.residual);
  }
  r.measured = failed;
  r.pass = failed == 0;
  r.detail = detail;
  return r;
}

using CheckFn = CheckResult (*)(const VerifyOptions&);

const std::map<std::string, CheckFn>& registry() {
  static const std::map<std::string, CheckFn> m{{"c1", c1}, {"c2", c2},   {"c3", c3},   {"c4", c4},
                                                {"c5", c5}, {"c6", c6},   {"c7", c7},   {"c8", c8},
                                                {"c9", c9}, {"c10", c10}, {"c11", c11}, {"c12", c12}};
  return m;
}

}  // namespace

bool VerificationReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

const std::vector<std::string>& check_ids() {
  static const std::vector<std::string> ids{"c1", "c2", "c3", "c4", "c5", "c6", "c7", "c8", "c9", "c10", "c11", "c12"};
  return ids;
}

bool is_check_id(const std::string& id) { return registry().count(id) > 0; }

CheckResult run_check(const std::string& id, const VerifyOptions& opt) {
  const auto it = registry().find(id);
  if (it == registry().end()) throw Error(ErrorKind::InvalidArgument, "unknown check id '" + id + "'");
  Timer t;
  CheckResult r;
  try {
    r = it->second(opt);
  } catch (const Error& e) {
    r = make(id);
    r.pass = false;
    r.measured = std::numeric_limits<double>::quiet_NaN();
    r.detail = e.what();
  }
  r.seconds = t.seconds();
  return r;
}

VerificationReport run_checks(const std::vector<std::string>& ids, const VerifyOptions& opt) {
  for (const auto& id : ids)
    if (!is_check_id(id)) throw Error(ErrorKind::InvalidArgument, "unknown check id '" + id + "'");
  VerificationReport rep;
  for (const auto& id : ids.empty() ? check_ids() : ids) rep.checks.push_back(run_check(id, opt));
  return rep;
}

std::string format_line(const CheckResult& r) {
  return strf("%-4s %s  measured %.3e  tol %.1e  %s  [%.2f s]  %s", r.id.c_str(), r.pass ? "PASS" : "FAIL", r.measured,
              r.tolerance, r.anchor.c_str(), r.seconds, r.detail.c_str());
}

Json to_json(const VerificationReport& report) {
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    Json e;
    e["id"] = c.id;
    e["anchor"] = c.anchor;
    e["status"] = c.pass ? "pass" : "fail";
    e["measured"] = std::isfinite(c.measured) ? Json(c.measured) : Json(nullptr);
    e["tolerance"] = c.tolerance;
    e["detail"] = c.detail;
    checks.push_back(std::move(e));
  }
  Json j;
  j["checks"] = std::move(checks);
  j["pass"] = report.all_pass();
  return j;
}

}  // namespace logsurf
