#pragma once

#include <memory>
#include <vector>

#include "logsurf/poly.hpp"

namespace logsurf {

/// Projection of one infinite-order ramification point: the limit of F along
/// the ray rho_j * [0, inf).
struct AsymptoticValue {
  int j = 0;          // 1-based, same order as asymptotic_directions(P)
  cplx rho;           // ray direction (-a_d)^(-1/d)
  cplx w;             // integral of Q e^P along the ray
  double tail_bound;  // certified bound on the discarded tail
};

/// F(z) = integral from 0 to z of Q(t) exp(P(t)) dt.
///
/// Immutable after construction apart from the asymptotic-value cache, which
/// is filled idempotently under a mutex; copies share the cache.
class EntireMap {
 public:
  EntireMap(Polynomial P, Polynomial Q, double quad_tol = 1e-12);

  const Polynomial& P() const noexcept { return P_; }
  const Polynomial& Q() const noexcept { return Q_; }
  const Polynomial& dP() const noexcept { return dP_; }
  const Polynomial& dQ() const noexcept { return dQ_; }
  int d() const noexcept { return P_.degree(); }
  int m() const noexcept { return Q_.degree(); }
  double quad_tol() const noexcept { return quad_tol_; }

  /// Zeros of Q (empty when Q is constant).
  const RootSet& q_roots() const noexcept { return q_roots_; }
  /// rho_1..rho_d; empty when d == 0.
  const std::vector<cplx>& directions() const noexcept { return directions_; }

  /// Same polynomials, different quadrature tolerance (fresh cache).
  EntireMap with_quad_tol(double quad_tol) const { return EntireMap(P_, Q_, quad_tol); }

 private:
  friend AsymptoticValue asymptotic_value(const EntireMap&, int);
  struct Cache;

  Polynomial P_, Q_, dP_, dQ_;
  double quad_tol_;
  RootSet q_roots_;
  std::vector<cplx> directions_;
  std::shared_ptr<Cache> cache_;
};

/// Re P above this is reported as Overflow (exp limit in double precision).
inline constexpr double kOverflowRePart = 700.0;

/// Q(z) exp(P(z)).  Throws Error(Overflow) when Re P(z) > kOverflowRePart.
cplx eval_F_prime(const EntireMap& map, cplx z);

/// Integral of Q e^P along the straight segment [a, b], adaptive
/// Gauss-Kronrod with panels split so Re P varies by at most 20 across each.
cplx integrate_segment(const EntireMap& map, cplx a, cplx b);

/// F(z) along [0, z].  Throws ToleranceNotMet or Overflow.
cplx eval_F(const EntireMap& map, cplx z);

/// F''/F' = P' + Q'/Q in closed form.  Throws PoleAtZero near a zero of Q.
cplx nonlinearity(const EntireMap& map, cplx z);

/// w'_j with a certified tail bound.  Throws TailBoundFailure.
AsymptoticValue asymptotic_value(const EntireMap& map, int j);
std::vector<AsymptoticValue> asymptotic_values(const EntireMap& map);

/// S(z) = integral over s in [0, inf) of Q(z + rho s) exp(P(z + rho s) - P(z)) rho ds,
/// so that F(z) = w' - exp(P(z)) S(z) for z in the convergence sector of rho.
/// Stays well scaled where exp(P(z)) underflows.
cplx normalized_tail(const EntireMap& map, cplx z, cplx rho);

}  // namespace logsurf
