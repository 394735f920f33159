#include "logsurf/entire_map.hpp"

#include <algorithm>
#include <mutex>
#include <optional>

#include "logsurf/quadrature.hpp"

namespace logsurf {

struct EntireMap::Cache {
  std::mutex mutex;
  std::vector<std::optional<AsymptoticValue>> values;
};

EntireMap::EntireMap(Polynomial P, Polynomial Q, double quad_tol)
    : P_(std::move(P)),
      Q_(std::move(Q)),
      dP_(derivative(P_)),
      dQ_(derivative(Q_)),
      quad_tol_(quad_tol),
      cache_(std::make_shared<Cache>()) {
  if (Q_.is_zero()) throw Error(ErrorKind::InvalidArgument, "Q must not be identically zero");
  if (!(quad_tol_ > 0.0)) throw Error(ErrorKind::InvalidArgument, "quad_tol must be positive");
  if (Q_.degree() >= 1) q_roots_ = find_roots(Q_);
  directions_ = asymptotic_directions(P_);
  cache_->values.resize(directions_.size());
}

cplx eval_F_prime(const EntireMap& map, cplx z) {
  const cplx p = eval_poly(map.P(), z);
  if (p.real() > kOverflowRePart) throw Error(ErrorKind::Overflow, "Re P exceeds the exp range");
  return eval_poly(map.Q(), z) * std::exp(p);
}

cplx nonlinearity(const EntireMap& map, cplx z) {
  const cplx q = eval_poly(map.Q(), z);
  const double scale = map.Q().max_abs_coeff() * std::pow(std::max(1.0, std::abs(z)), map.m());
  if (std::abs(q) <= 1e-14 * scale) throw Error(ErrorKind::PoleAtZero, "Q vanishes at the evaluation point");
  return eval_poly(map.dP(), z) + eval_poly(map.dQ(), z) / q;
}

namespace {

constexpr double kMaxRePVariation = 20.0;

// Partition of [s0, s1] along z(s) = origin + s * dir such that Re P varies by
// at most kMaxRePVariation on each piece (checked on 5 samples per piece).
std::vector<double> re_p_partition(const Polynomial& P, cplx origin, cplx dir, double s0, double s1) {
  std::vector<double> out{s0};
  std::vector<std::pair<double, double>> stack{{s0, s1}};
  // Process left to right: stack holds pending pieces in reverse order.
  while (!stack.empty()) {
    auto [a, b] = stack.back();
    stack.pop_back();
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i <= 4; ++i) {
      const double re = eval_poly(P, origin + (a + (b - a) * i / 4.0) * dir).real();
      lo = std::min(lo, re);
      hi = std::max(hi, re);
    }
    if (hi > kOverflowRePart) throw Error(ErrorKind::Overflow, "Re P exceeds the exp range on the path");
    if (hi - lo > kMaxRePVariation && (b - a) > 1e-12 * (s1 - s0) && out.size() < 4096) {
      const double mid = 0.5 * (a + b);
      stack.push_back({mid, b});
      stack.push_back({a, mid});
      continue;
    }
    out.push_back(b);
  }
  return out;
}

}  // namespace

cplx integrate_segment(const EntireMap& map, cplx a, cplx b) {
  if (a == b) return {};
  const cplx dir = b - a;
  auto f = [&](double s) {
    const cplx z = a + s * dir;
    return eval_poly(map.Q(), z) * std::exp(eval_poly(map.P(), z)) * dir;
  };
  const auto initial = re_p_partition(map.P(), a, dir, 0.0, 1.0);
  quad::AdaptiveOptions opt;
  opt.abs_tol = map.quad_tol();
  opt.rel_tol = map.quad_tol();
  opt.max_panels = 8000;
  const auto res = quad::integrate_adaptive(f, initial, opt);
  if (!res.converged) throw Error(ErrorKind::ToleranceNotMet, "segment quadrature budget exhausted");
  return res.value;
}

cplx eval_F(const EntireMap& map, cplx z) { return integrate_segment(map, cplx{}, z); }

AsymptoticValue asymptotic_value(const EntireMap& map, int j) {
  const int d = map.d();
  if (d < 1 || j < 1 || j > d) throw Error(ErrorKind::InvalidArgument, "asymptotic index out of range");
  auto& cache = *map.cache_;
  {
    std::lock_guard lock(cache.mutex);
    if (cache.values[static_cast<std::size_t>(j - 1)]) return *cache.values[static_cast<std::size_t>(j - 1)];
  }

  const cplx rho = map.directions()[static_cast<std::size_t>(j - 1)];
  const double r = std::abs(rho);
  const int m = map.m();

  // Along the ray, Re P(rho t) <= -lead t^d + sum_{k<d} |a_k| r^k t^k.
  const double lead = -(map.P().leading() * std::pow(rho, d)).real();
  std::vector<double> lower(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) lower[static_cast<std::size_t>(k)] = std::abs(map.P()[k]) * std::pow(r, k);
  auto lower_sum = [&](double t) {
    double s = 0.0;
    for (int k = 0; k < d; ++k) s += lower[static_cast<std::size_t>(k)] * std::pow(t, k);
    return s;
  };
  double q_sum = 0.0;
  for (int k = 0; k <= m; ++k) q_sum += std::abs(map.Q()[k]) * std::pow(r, k);

  // For t >= t0: Re P <= -c t^d with c = lead / 2, and |Q(rho t)| <= q_sum t^m.
  double t0 = 1.0;
  while (lower_sum(t0) > 0.5 * lead * std::pow(t0, d)) {
    t0 *= 1.25;
    if (t0 > 1e4) throw Error(ErrorKind::TailBoundFailure, "no decay threshold found on the ray");
  }
  const double c = 0.5 * lead;
  // g(t) = t^m exp(-c t^d) satisfies g'/g <= -lambda(T) on [T, inf), hence the
  // tail integral is at most g(T) / lambda(T).
  auto tail_bound = [&](double T) {
    const double lambda = c * d * std::pow(T, d - 1) - m / T;
    if (lambda <= 0.0) return std::numeric_limits<double>::infinity();
    return r * q_sum * std::pow(T, m) * std::exp(-c * std::pow(T, d)) / lambda;
  };
  double T = t0;
  const double target = map.quad_tol() / 10.0;
  while (tail_bound(T) >= target) {
    T *= 1.02;
    if (T > 1e4) throw Error(ErrorKind::TailBoundFailure, "tail bound not certified in search range");
  }

  auto f = [&](double t) {
    const cplx z = rho * t;
    return eval_poly(map.Q(), z) * std::exp(eval_poly(map.P(), z)) * rho;
  };
  const auto initial = re_p_partition(map.P(), cplx{}, rho, 0.0, T);
  quad::AdaptiveOptions opt;
  opt.abs_tol = map.quad_tol();
  opt.rel_tol = map.quad_tol();
  opt.max_panels = 8000;
  const auto res = quad::integrate_adaptive(f, initial, opt);
  if (!res.converged) throw Error(ErrorKind::ToleranceNotMet, "ray quadrature budget exhausted");

  AsymptoticValue out{j, rho, res.value, tail_bound(T)};
  std::lock_guard lock(cache.mutex);
  cache.values[static_cast<std::size_t>(j - 1)] = out;
  return out;
}

std::vector<AsymptoticValue> asymptotic_values(const EntireMap& map) {
  std::vector<AsymptoticValue> out;
  for (int j = 1; j <= map.d(); ++j) out.push_back(asymptotic_value(map, j));
  return out;
}

cplx normalized_tail(const EntireMap& map, cplx z, cplx rho) {
  const cplx pz = eval_poly(map.P(), z);
  auto shifted_re = [&](double s) { return (eval_poly(map.P(), z + rho * s) - pz).real(); };
  // Truncate where the integrand has decayed by e^-60 and keeps decaying.
  double s_max = 1.0 / (1.0 + std::abs(eval_poly(map.dP(), z)));
  while (!(shifted_re(s_max) < -60.0 && shifted_re(2.0 * s_max) < shifted_re(s_max))) {
    s_max *= 2.0;
    if (s_max > 1e6) throw Error(ErrorKind::TailBoundFailure, "no decay along the tail ray");
  }
  auto f = [&](double s) {
    const cplx t = z + rho * s;
    return eval_poly(map.Q(), t) * std::exp(eval_poly(map.P(), t) - pz) * rho;
  };
  // Partition on the shifted exponent so large |P(z)| does not trip the overflow guard.
  std::vector<double> initial{0.0};
  {
    std::vector<std::pair<double, double>> stack{{0.0, s_max}};
    while (!stack.empty()) {
      auto [a, b] = stack.back();
      stack.pop_back();
      double lo = 1e300, hi = -1e300;
      for (int i = 0; i <= 4; ++i) {
        const double re = shifted_re(a + (b - a) * i / 4.0);
        lo = std::min(lo, re);
        hi = std::max(hi, re);
      }
      if (hi - lo > kMaxRePVariation && initial.size() < 4096) {
        const double mid = 0.5 * (a + b);
        stack.push_back({mid, b});
        stack.push_back({a, mid});
        continue;
      }
      initial.push_back(b);
    }
  }
  quad::AdaptiveOptions opt;
  opt.abs_tol = 0.0;
  opt.rel_tol = map.quad_tol();
  opt.max_panels = 8000;
  const auto res = quad::integrate_adaptive(f, initial, opt);
  if (!res.converged) throw Error(ErrorKind::ToleranceNotMet, "tail quadrature budget exhausted");
  return res.value;
}

}  // namespace logsurf
