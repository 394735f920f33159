#include <functional>
#include <random>

#include "doctest.h"
#include "logsurf/schwarz_christoffel.hpp"

using namespace logsurf;

namespace {

// w = ((1+z)/(1-z))^alpha with dw/dz = 2 alpha (1+z)^(alpha-1) (1-z)^(-alpha-1).
// At t = 0 the principal integrand factors give (-1)^(-alpha-1) = exp(-i pi (alpha+1)),
// so A = 2 alpha exp(i pi (alpha+1)); B = w(0) = 1.
SCMapSpec wedge(double alpha) {
  SCMapSpec s;
  s.vertices = {{-1.0, alpha}};
  s.ends = {{1.0, alpha}};
  s.A = 2.0 * alpha * std::exp(cplx{0.0, kPi * (alpha + 1.0)});
  s.B = 1.0;
  return s;
}

cplx wedge_closed(double alpha, cplx z) { return std::pow((1.0 + z) / (1.0 - z), alpha); }

cplx random_in_disk(std::mt19937_64& rng, double r) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return std::polar(r * std::sqrt(u(rng)), kTwoPi * u(rng));
}

// Residue of a meromorphic function at c by the trapezoidal rule on a circle.
cplx residue(const std::function<cplx(cplx)>& f, cplx c, double radius) {
  const int n = 512;
  cplx sum{};
  for (int k = 0; k < n; ++k) {
    const cplx e = std::polar(1.0, kTwoPi * k / n);
    sum += f(c + radius * e) * radius * e;
  }
  return sum / static_cast<double>(n);
}

}  // namespace

TEST_CASE("trivial SC maps") {
  SCMapSpec id;
  CHECK(std::abs(sc_eval(id, {0.3, -0.4}) - cplx{0.3, -0.4}) < 1e-15);
  CHECK(sc_nonlinearity(id, 0.2) == cplx{});

  SCMapSpec affine;
  affine.vertices = {{1.0, 1.0}, {cplx{0.0, 1.0}, 1.0}, {-1.0, 1.0}};
  affine.A = {2.0, -1.0};
  affine.B = 0.5;
  const cplx z{0.1, 0.7};
  CHECK(std::abs(sc_eval(affine, z) - (affine.A * z + affine.B)) < 1e-14);
}

TEST_CASE("wedge map against its closed form") {
  for (double alpha : {3.0, 0.5}) {
    const SCMapSpec s = wedge(alpha);
    s.validate();
    std::mt19937_64 rng(5);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const cplx z = random_in_disk(rng, 0.9);
      worst = std::max(worst, std::abs(sc_eval(s, z) - wedge_closed(alpha, z)));
    }
    CHECK(worst <= 1e-8);
    CHECK_THROWS_AS(sc_eval(s, 1.0), Error);
    CHECK(std::abs(sc_eval(s, 0.999)) > 0.9 * std::pow(1999.0, alpha));
  }
  // Radial limit at the finite prevertex, where w = 0.
  CHECK(std::abs(sc_eval(wedge(0.5), -1.0)) < 1e-10);
  CHECK(std::abs(sc_eval(wedge(3.0), -1.0)) < 1e-10);
}

TEST_CASE("SC nonlinearity") {
  CHECK(std::abs(sc_nonlinearity(wedge(3.0), 0.0) - 6.0) < 1e-15);
  CHECK_THROWS_AS(sc_nonlinearity(wedge(3.0), -1.0), Error);

  SCMapSpec mixed = wedge(0.5);
  mixed.vertices.push_back({cplx{0.0, 1.0}, 1.7});
  mixed.ends.push_back({cplx{0.0, -1.0}, 0.4});
  mixed.C = {0.3, -0.2};
  std::mt19937_64 rng(9);
  for (int i = 0; i < 20; ++i) {
    const cplx z = random_in_disk(rng, 0.8);
    const double h = 1e-3;
    auto dlog = [&](double k) { return std::log(sc_derivative(mixed, z + k * h) / sc_derivative(mixed, z - k * h)); };
    const cplx fd = (8.0 * dlog(1.0) - dlog(2.0)) / (12.0 * h);
    CHECK(std::abs(fd - sc_nonlinearity(mixed, z)) <= 1e-6);
    // sc_eval differentiates to sc_derivative.
    const cplx dF = (sc_eval(mixed, z + h) - sc_eval(mixed, z - h)) / (2.0 * h);
    CHECK(std::abs(dF - sc_derivative(mixed, z)) <= 1e-5 * std::max(1.0, std::abs(dF)));
  }
}

TEST_CASE("straight sides and vertex angle of the wedge") {
  const double alpha = 0.5;
  const SCMapSpec s = wedge(alpha);
  for (double sign : {1.0, -1.0}) {
    const double ref = std::arg(sc_derivative(s, std::polar(1.0, sign * 1.0)) * cplx{0.0, sign} *
                                std::polar(1.0, sign * 1.0));
    for (double th = 0.1; th < 3.0; th += 0.1) {
      const cplx e = std::polar(1.0, sign * th);
      const double a = std::arg(sc_derivative(s, e) * cplx{0.0, sign} * e);
      CHECK(std::abs(wrap_angle(a - ref)) <= 1e-6);
    }
  }
  // Turning angle at z = -1, walking the circle counterclockwise.
  const double dlt = 1e-3;
  const cplx v = sc_eval(s, -1.0);
  const cplx in = v - sc_eval(s, std::polar(1.0, kPi - dlt));
  const cplx out = sc_eval(s, std::polar(1.0, kPi + dlt)) - v;
  CHECK(std::abs(wrap_angle(std::arg(out / in) - kPi * (1.0 - alpha))) <= 1e-3);
}

TEST_CASE("Schwarzian residuals") {
  // {w, z} for the wedge, built from w''/w' = (alpha-1)/(1+z) + (alpha+1)/(1-z).
  for (double alpha : {3.0, 0.5}) {
    auto schwarzian = [alpha](cplx z) {
      const cplx n = (alpha - 1.0) / (1.0 + z) + (alpha + 1.0) / (1.0 - z);
      const cplx dn = -(alpha - 1.0) / ((1.0 + z) * (1.0 + z)) + (alpha + 1.0) / ((1.0 - z) * (1.0 - z));
      return dn - 0.5 * n * n;
    };
    SchwarzianSpec sp;
    sp.z = {-1.0, 1.0};
    sp.alpha = {alpha, alpha};
    for (cplx zk : sp.z) sp.beta.push_back(residue(schwarzian, zk, 0.5));
    const auto r = sc_schwarzian_residuals(sp);
    CHECK(r.max() <= 1e-12);
    for (cplx z : {cplx{0.2, 0.1}, cplx{-0.5, 0.6}}) CHECK(std::abs(schwarzian_eval(sp, z) - schwarzian(z)) < 1e-10);

    sp.beta[0] += 1e-3;
    CHECK(sc_schwarzian_residuals(sp).res1 == doctest::Approx(1e-3).epsilon(1e-9));
  }
  SchwarzianSpec mobius;
  mobius.z = {cplx{0.0, 1.0}};
  mobius.alpha = {1.0};
  mobius.beta = {0.0};
  const auto r = sc_schwarzian_residuals(mobius);
  CHECK(r.res1 == 0.0);
  CHECK(r.res2 == 0.0);
  CHECK(r.res3 == 0.0);
}

TEST_CASE("D_N specs") {
  const auto s = build_DN_spec(2, 1, cplx{0.0, 1.0}, 1.0);
  REQUIRE(s.vertices.size() == 2);
  REQUIRE(s.ends.size() == 2);
  for (const auto& v : s.vertices) CHECK(v.alpha - 1.0 == 5.0);
  for (const auto& e : s.ends) CHECK(-e.beta - 1.0 == -7.0);
  s.validate();
  for (const auto& e : s.ends) CHECK(std::abs(sc_eval(s, 0.999 * e.z)) > 1e3);

  CHECK_THROWS_AS(build_DN_spec(1, 1, 1.0, 1.0), Error);
  CHECK_NOTHROW(build_DN_spec(1, 1, 1.0, -1.0));
  try {
    build_DN_spec(2, 1, 1.0, -1.0);
    FAIL("collision not detected");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PrevertexCollision);
  }
}

TEST_CASE("symmetric D_N solve") {
  const EntireMap gauss(Polynomial::monomial(2), Polynomial{1.0});
  const auto sol = solve_symmetric_parameters(gauss, 1);
  CHECK(sol.residual <= 1e-6);
  REQUIRE(sol.vertex_images.size() == 2);
  const double a = std::sqrt(kPi) / 2.0;
  CHECK(std::abs(sol.vertex_images[0] - cplx{0.0, a}) <= 1e-5);
  CHECK(std::abs(sol.vertex_images[1] - cplx{0.0, -a}) <= 1e-5);
  for (const auto& v : sol.spec.vertices) CHECK(std::abs(std::abs(v.z) - 1.0) < 1e-12);
  for (const auto& e : sol.spec.ends) CHECK(std::abs(std::abs(e.z) - 1.0) < 1e-12);

  SymmetricSolveOptions coarse;
  coarse.quad_tol = 1e-11;
  coarse.target = 1e-9;
  CHECK(std::abs(solve_symmetric_parameters(gauss, 1, coarse).phase - sol.phase) <= 1e-7);

  SymmetricSolveOptions off;
  off.initial_phase = kPi / 2.0 + 0.05;
  const auto moved = solve_symmetric_parameters(gauss, 1, off);
  CHECK(moved.iterations > 0);
  CHECK(std::abs(moved.phase - kPi / 2.0) <= 1e-7);
  CHECK(std::abs(moved.vertex_images[0] - cplx{0.0, a}) <= 1e-5);

  const EntireMap e(Polynomial{0.0, 1.0}, Polynomial{1.0});
  const auto s1 = solve_symmetric_parameters(e, 1);
  CHECK(s1.residual <= 1e-6);
  CHECK(std::abs(s1.vertex_images[0] - cplx{-1.0, 0.0}) <= 1e-6);

  CHECK_THROWS_AS(solve_symmetric_parameters(EntireMap(Polynomial{0.0, 1.0, 1.0}, Polynomial{1.0}), 1), Error);
}
