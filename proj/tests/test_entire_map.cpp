#include <random>

#include "doctest.h"
#include "logsurf/entire_map.hpp"

using namespace logsurf;

namespace {

const Polynomial kOne{1.0};

// sum_{n>=0} 1 / (n! (2n+1)) = integral_0^1 exp(t^2) dt
double erfi_series_at_one() {
  double sum = 0.0, fact = 1.0;
  for (int n = 0; n < 30; ++n) {
    if (n > 0) fact *= n;
    sum += 1.0 / (fact * (2 * n + 1));
  }
  return sum;
}

}  // namespace

TEST_CASE("eval_F closed forms") {
  const EntireMap exp_map(Polynomial{0.0, 1.0}, kOne);
  CHECK(std::abs(eval_F(exp_map, 1.0) - (std::exp(1.0) - 1.0)) < 1e-13);
  CHECK(eval_F(exp_map, 0.0) == cplx{});

  const EntireMap gauss(Polynomial::monomial(2), kOne);
  CHECK(std::abs(eval_F(gauss, 1.0) - erfi_series_at_one()) < 1e-13);
  CHECK(std::abs(erfi_series_at_one() - 1.462651746) < 1e-9);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 50; ++i) {
    cplx z{u(rng), u(rng)};
    if (std::abs(z) > 3.0) z *= 3.0 / std::abs(z);
    CHECK(std::abs(eval_F(exp_map, z) - (std::exp(z) - 1.0)) <= 1e-10);
  }
}

TEST_CASE("eval_F_prime and overflow") {
  const EntireMap gauss(Polynomial::monomial(2), kOne);
  CHECK(eval_F_prime(gauss, 0.0) == cplx{1.0, 0.0});
  const EntireMap lin(Polynomial(), Polynomial{0.0, 1.0});
  CHECK(eval_F_prime(lin, {0.0, 3.0}) == cplx{0.0, 3.0});
  CHECK_THROWS_AS(eval_F_prime(gauss, 30.0), Error);
  try {
    eval_F_prime(gauss, 30.0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Overflow);
  }

  const EntireMap cubic(Polynomial{0.0, 1.0, 0.0, 1.0}, Polynomial{1.0, 1.0});
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.4, 1.4);
  const double h = 1e-4;
  for (int i = 0; i < 50; ++i) {
    const cplx z{u(rng), u(rng)};
    const cplx fd = (eval_F(cubic, z + h) - eval_F(cubic, z - h)) / (2.0 * h);
    CHECK(std::abs(fd - eval_F_prime(cubic, z)) <= 1e-6 * std::max(1.0, std::abs(fd)));
  }
}

TEST_CASE("nonlinearity") {
  const EntireMap gauss(Polynomial::monomial(2), kOne);
  CHECK(std::abs(nonlinearity(gauss, {1.5, -0.5}) - cplx{3.0, -1.0}) < 1e-15);
  const EntireMap lin(Polynomial(), Polynomial{0.0, 1.0});
  CHECK(std::abs(nonlinearity(lin, 2.0) - 0.5) < 1e-15);
  CHECK_THROWS_AS(nonlinearity(lin, 0.0), Error);
}

TEST_CASE("asymptotic values") {
  const EntireMap exp_map(Polynomial{0.0, 1.0}, kOne);
  const auto w = asymptotic_value(exp_map, 1);
  CHECK(std::abs(w.w + 1.0) < 1e-12);
  CHECK(w.tail_bound <= exp_map.quad_tol());

  const double half_sqrt_pi = std::sqrt(kPi) / 2.0;
  const EntireMap gauss(Polynomial::monomial(2), kOne);
  const auto vals = asymptotic_values(gauss);
  REQUIRE(vals.size() == 2);
  CHECK(std::abs(vals[0].w - cplx{0.0, half_sqrt_pi}) < 1e-10);
  CHECK(std::abs(vals[1].w - cplx{0.0, -half_sqrt_pi}) < 1e-10);

  const EntireMap cubic(Polynomial::monomial(3), kOne);
  const double g43 = std::tgamma(4.0 / 3.0);
  const cplx omega = std::polar(1.0, 2.0 * kPi / 3.0);
  const auto c = asymptotic_values(cubic);
  REQUIRE(c.size() == 3);
  for (int j = 0; j < 3; ++j) {
    CHECK(std::abs(std::abs(c[static_cast<std::size_t>(j)].w) - g43) < 1e-10);
    CHECK(std::abs(arg_positive(c[static_cast<std::size_t>(j)].w) - kPi * (2 * j + 1) / 3.0) < 1e-10);
  }
  CHECK(std::abs(c[1].w - omega * c[0].w) < 1e-9);
  CHECK(std::abs(c[2].w - omega * c[1].w) < 1e-9);

  CHECK_THROWS_AS(asymptotic_value(cubic, 4), Error);
  const EntireMap flat(Polynomial(), kOne);
  CHECK(asymptotic_values(flat).empty());
}

TEST_CASE("symmetries of the Gauss maps") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int d : {2, 3}) {
    const EntireMap g(Polynomial::monomial(d), kOne);
    const cplx omega = std::polar(1.0, 2.0 * kPi / d);
    for (int i = 0; i < 30; ++i) {
      cplx z{u(rng), u(rng)};
      if (std::abs(z) > 2.0) z *= 2.0 / std::abs(z);
      const cplx f = eval_F(g, z);
      CHECK(std::abs(eval_F(g, omega * z) - omega * f) <= 1e-10);
      CHECK(std::abs(eval_F(g, std::conj(z)) - std::conj(f)) <= 1e-10);
      const cplx mid{u(rng), u(rng)};
      CHECK(std::abs(integrate_segment(g, 0.0, mid) + integrate_segment(g, mid, z) - f) <= 1e-10);
    }
  }
}

TEST_CASE("normalized tail reproduces the asymptotic value") {
  const EntireMap gauss(Polynomial::monomial(2), kOne);
  const auto w = asymptotic_value(gauss, 1);
  for (cplx z : {cplx{0.3, 1.0}, cplx{1.0, 3.0}, cplx{-2.0, 4.0}}) {
    const cplx via_tail = w.w - std::exp(eval_poly(gauss.P(), z)) * normalized_tail(gauss, z, w.rho);
    CHECK(std::abs(via_tail - eval_F(gauss, z)) < 1e-9);
  }
}
