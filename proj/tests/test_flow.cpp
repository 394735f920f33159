#include <random>

#include "doctest.h"
#include "logsurf/flow.hpp"

using namespace logsurf;

namespace {

const Polynomial kOne{1.0};

double max_drift(const EntireMap& map, const FlowCurve& c) {
  double worst = 0.0;
  for (const auto& s : c.samples) worst = std::max(worst, std::abs(eval_F(map, s.z).imag() - c.im_level));
  return worst;
}

// Point of the first quadrant with Im z^2 = v.
cplx on_hyperbola(double v, double x) { return {x, v / (2.0 * x)}; }

}  // namespace

TEST_CASE("field values") {
  const EntireMap gauss(Polynomial::monomial(2), kOne);
  CHECK(std::abs(field(gauss, 0.7) - 1.0) < 1e-15);
  const EntireMap lin(Polynomial(), Polynomial{0.0, 1.0});
  CHECK(std::abs(field(lin, {0.0, 1.0}) - cplx{0.0, -1.0}) < 1e-15);
  CHECK_THROWS_AS(field(lin, 1e-6), Error);

  const EntireMap mixed(Polynomial{0.0, 1.0, 0.5, 1.0}, Polynomial{-1.0, 0.0, 1.0});
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int i = 0; i < 1000; ++i) {
    const cplx z{u(rng), u(rng)};
    CHECK(std::abs(std::abs(field(mixed, z)) - 1.0) <= 1e-15);
  }
}

TEST_CASE("real axis is invariant for the Gauss maps") {
  for (int d : {2, 3}) {
    const EntireMap g(Polynomial::monomial(d), kOne);
    const auto c = integrate_flow(g, 0.5, 0.0, 1.0);
    for (const auto& s : c.samples) CHECK(std::abs(s.z - (0.5 + s.t)) < 1e-12);
    CHECK(c.stop_forward == StopReason::Budget);
    CHECK(c.t_max() == doctest::Approx(1.0));
  }
}

TEST_CASE("flow invariants on z^3") {
  const EntireMap cubic(Polynomial::monomial(3), kOne);
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  for (int i = 0; i < 5; ++i) {
    const cplx z0{u(rng), u(rng)};
    const auto c = integrate_flow(cubic, z0, -20.0, 20.0);
    CHECK(max_drift(cubic, c) <= 1e-6);
    for (std::size_t k = 1; k < c.samples.size(); ++k) {
      const auto& a = c.samples[k - 1];
      const auto& b = c.samples[k];
      CHECK(b.F.real() > a.F.real());
      const double ratio = std::abs(b.z - a.z) / (b.t - a.t);
      CHECK(ratio >= 1.0 - 1e-6);
      CHECK(ratio <= 1.0 + 1e-6);
    }
  }
}

TEST_CASE("trapping regions of z^2") {
  const EntireMap gauss(Polynomial::monomial(2), kOne);
  FlowOptions opt;
  opt.track_image = false;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> level(2.05 * kPi, 2.95 * kPi), xs(0.4, 3.0);
  for (int i = 0; i < 5; ++i) {
    const auto c = integrate_flow(gauss, on_hyperbola(level(rng), xs(rng)), 0.0, 50.0, opt);
    for (const auto& s : c.samples) {
      const double v = (s.z * s.z).imag();
      CHECK(v > 2.0 * kPi);
      CHECK(v < 3.0 * kPi);
    }
  }
}

TEST_CASE("curves from consecutive transversal levels stay apart") {
  const EntireMap gauss(Polynomial::monomial(2), kOne);
  const auto a = integrate_flow(gauss, on_hyperbola(2.0 * kPi, 1.5), 0.0, 15.0);
  const auto b = integrate_flow(gauss, on_hyperbola(3.0 * kPi, 1.5), 0.0, 15.0);
  double closest = 1e300;
  for (const auto& p : a.samples)
    for (const auto& q : b.samples) closest = std::min(closest, std::abs(p.z - q.z));
  CHECK(closest > 2e-9);
}

TEST_CASE("R0 and k0") {
  CHECK(far_field_radius(EntireMap(Polynomial::monomial(2), kOne)) == 0.0);
  CHECK(min_transversal_level(EntireMap(Polynomial::monomial(2), kOne)) == 2);
  const EntireMap shifted(Polynomial{0.0, 1.0, 1.0}, kOne);
  const double R0 = far_field_radius(shifted);
  CHECK(R0 > 4.0);
  CHECK(R0 < 6.0);
  CHECK(min_transversal_level(shifted) >= 2);
}

TEST_CASE("transversal traces") {
  const EntireMap gauss(Polynomial::monomial(2), kOne);
  TransversalOptions o;
  o.delta = kPi / 8.0;
  const auto t = trace_transversal(gauss, 1, 2, kPi / 2.0, 1.0, o);
  CHECK(t.samples.size() > 20);
  for (cplx z : t.samples) CHECK(std::abs((z * z).imag() - 1.5 * kPi) <= 1e-9);
  CHECK(t.min_transversality >= std::sin(kPi / 8.0));
  CHECK(t.frame == CurveFrame::ZPlane);

  // On the sector edge the certificate must fail once the trace runs far enough.
  CHECK_THROWS_AS(trace_transversal(gauss, 1, 2, kPi / 2.0, 8.0, o), Error);

  const EntireMap shifted(Polynomial{0.0, 1.0, 1.0}, kOne);
  TransversalOptions o2;
  o2.delta = kPi / 4.0 - 0.1;
  const int k = min_transversal_level(shifted) + 6;
  for (int j = 1; j <= 4; ++j) {
    const int kk = j % 2 == 1 ? k : -k;
    const double alpha = (j - 0.5) * kPi / 2.0;
    const auto c = trace_transversal(shifted, j, kk, alpha, 6.0, o2);
    CHECK(c.min_transversality >= std::sin(o2.delta));
    for (cplx z : c.samples) {
      const double phase = eval_poly(shifted.P(), z).imag();
      CHECK(std::abs(phase - c.level) <= 1e-9 * std::max(1.0, std::abs(c.level)));
    }
  }
}

TEST_CASE("singularity rays") {
  const EntireMap q1(Polynomial(), Polynomial{0.0, 1.0});
  const auto r1 = singularity_rays(q1, 0.0);
  REQUIRE(r1.directions.size() == 4);
  for (int k = 0; k < 4; ++k)
    CHECK(std::abs(arg_positive(r1.directions[static_cast<std::size_t>(k)]) - k * kPi / 2.0) < 1e-6);

  const EntireMap q2(Polynomial(), Polynomial{0.0, 0.0, 1.0});
  const auto r2 = singularity_rays(q2, 0.0);
  REQUIRE(r2.directions.size() == 6);
  CHECK(r2.order == 2);
  for (int k = 0; k < 6; ++k)
    CHECK(std::abs(arg_positive(r2.directions[static_cast<std::size_t>(k)]) - k * kPi / 3.0) < 1e-6);

  // F'' (1) = e for P = z, Q = z - 1: the local model is (e/2) (z-1)^2, so rays at k pi/2.
  const EntireMap q3(Polynomial{0.0, 1.0}, Polynomial{-1.0, 1.0});
  const auto r3 = singularity_rays(q3, 1.0);
  REQUIRE(r3.directions.size() == 4);
  for (int k = 0; k < 4; ++k) {
    const double a = arg_positive(r3.directions[static_cast<std::size_t>(k)]);
    CHECK(std::abs(wrap_angle(a - k * kPi / 2.0)) < 1e-2);
  }
  CHECK_THROWS_AS(singularity_rays(q3, 0.5), Error);
}

TEST_CASE("trajectory classification") {
  const EntireMap gauss(Polynomial::monomial(2), kOne);
  const auto c = integrate_flow(gauss, 0.5, -20.0, 20.0);
  const auto cls = classify_trajectory(gauss, c);
  CHECK(cls.full_horizontal_line());

  const EntireMap lin(Polynomial(), Polynomial{0.0, 1.0});
  const auto c2 = integrate_flow(lin, 1.0, -5.0, 1.0);
  const auto cls2 = classify_trajectory(lin, c2);
  CHECK(cls2.backward.kind == EndKind::Critical);
  CHECK(std::abs(cls2.backward.critical) < 1e-12);
  CHECK(std::abs(c2.front().F) < 1e-7);
}
