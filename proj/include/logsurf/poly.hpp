#pragma once

#include <span>
#include <vector>

#include "logsurf/common.hpp"

namespace logsurf {

/// Dense complex polynomial, coefficients in ascending degree order.
///
/// Trailing zero coefficients are trimmed on construction, so the leading
/// coefficient is nonzero unless the polynomial is identically zero (stored as
/// a single zero coefficient).
class Polynomial {
 public:
  Polynomial() : coeffs_{cplx{0.0, 0.0}} {}
  explicit Polynomial(std::vector<cplx> coeffs);
  Polynomial(std::initializer_list<cplx> coeffs) : Polynomial(std::vector<cplx>(coeffs)) {}

  static Polynomial monomial(int degree, cplx coeff = 1.0);

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.size() == 1 && coeffs_[0] == cplx{}; }
  cplx leading() const noexcept { return coeffs_.back(); }
  cplx operator[](int k) const { return coeffs_.at(static_cast<std::size_t>(k)); }
  std::span<const cplx> coeffs() const noexcept { return coeffs_; }

  double max_abs_coeff() const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  std::vector<cplx> coeffs_;
};

/// Horner evaluation.
cplx eval_poly(const Polynomial& p, cplx z);

/// Value and first derivative in one Horner pass.
struct PolyValue {
  cplx value;
  cplx derivative;
};
PolyValue eval_poly_with_derivative(const Polynomial& p, cplx z);

Polynomial derivative(const Polynomial& p);

struct Root {
  cplx location;
  int multiplicity = 1;
};

/// Roots with multiplicities; multiplicities sum to the degree.
struct RootSet {
  std::vector<Root> roots;

  int total_multiplicity() const;
  /// Distance from z to the nearest root, +inf when empty.
  double distance_to_nearest(cplx z) const;
};

/// Aberth-Ehrlich simultaneous iteration started on the Fujiwara circle.
/// Approximations that collapse onto a multiple root are merged when they lie
/// within tol^(1/k) (relative to max(1,|root|)) of each other, k being the
/// cluster size.  Throws Error(NonConvergence) if the iteration stalls.
RootSet find_roots(const Polynomial& p, double tol = 1e-12);

/// The d values of (-a_d)^(-1/d), ordered by argument in [0, 2pi).
std::vector<cplx> asymptotic_directions(const Polynomial& p);

}  // namespace logsurf
