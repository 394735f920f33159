#include "logsurf/poly.hpp"

#include <algorithm>
#include <limits>

namespace logsurf {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::ToleranceNotMet: return "ToleranceNotMet";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::PoleAtZero: return "PoleAtZero";
    case ErrorKind::TailBoundFailure: return "TailBoundFailure";
    case ErrorKind::AtSingularity: return "AtSingularity";
    case ErrorKind::StepCollapse: return "StepCollapse";
    case ErrorKind::TransversalityLoss: return "TransversalityLoss";
    case ErrorKind::NewtonDivergence: return "NewtonDivergence";
    case ErrorKind::RayCountMismatch: return "RayCountMismatch";
    case ErrorKind::SeedFailure: return "SeedFailure";
    case ErrorKind::UnresolvedComponent: return "UnresolvedComponent";
    case ErrorKind::InconsistentGluing: return "InconsistentGluing";
    case ErrorKind::EndpointDivergence: return "EndpointDivergence";
    case ErrorKind::PoleAtPrevertex: return "PoleAtPrevertex";
    case ErrorKind::PrevertexCollision: return "PrevertexCollision";
    case ErrorKind::SolverDivergence: return "SolverDivergence";
  }
  return "Unknown";
}

Polynomial::Polynomial(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
  for (const cplx& c : coeffs_) {
    if (!is_finite(c)) throw Error(ErrorKind::InvalidArgument, "non-finite polynomial coefficient");
  }
  while (coeffs_.size() > 1 && coeffs_.back() == cplx{}) coeffs_.pop_back();
  if (coeffs_.empty()) coeffs_.push_back(cplx{});
}

Polynomial Polynomial::monomial(int degree, cplx coeff) {
  std::vector<cplx> c(static_cast<std::size_t>(degree) + 1, cplx{});
  c.back() = coeff;
  return Polynomial(std::move(c));
}

double Polynomial::max_abs_coeff() const {
  double m = 0.0;
  for (const cplx& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<cplx> c(std::max(a.coeffs_.size(), b.coeffs_.size()), cplx{});
  for (std::size_t k = 0; k < a.coeffs_.size(); ++k) c[k] += a.coeffs_[k];
  for (std::size_t k = 0; k < b.coeffs_.size(); ++k) c[k] += b.coeffs_[k];
  return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  std::vector<cplx> c(std::max(a.coeffs_.size(), b.coeffs_.size()), cplx{});
  for (std::size_t k = 0; k < a.coeffs_.size(); ++k) c[k] += a.coeffs_[k];
  for (std::size_t k = 0; k < b.coeffs_.size(); ++k) c[k] -= b.coeffs_[k];
  return Polynomial(std::move(c));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return Polynomial();
  std::vector<cplx> c(a.coeffs_.size() + b.coeffs_.size() - 1, cplx{});
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return Polynomial(std::move(c));
}

cplx eval_poly(const Polynomial& p, cplx z) {
  const auto c = p.coeffs();
  cplx acc = c.back();
  for (std::size_t k = c.size() - 1; k-- > 0;) acc = acc * z + c[k];
  return acc;
}

PolyValue eval_poly_with_derivative(const Polynomial& p, cplx z) {
  const auto c = p.coeffs();
  cplx value = c.back();
  cplx deriv{};
  for (std::size_t k = c.size() - 1; k-- > 0;) {
    deriv = deriv * z + value;
    value = value * z + c[k];
  }
  return {value, deriv};
}

Polynomial derivative(const Polynomial& p) {
  if (p.degree() == 0) return Polynomial();
  std::vector<cplx> c(static_cast<std::size_t>(p.degree()));
  for (int k = 1; k <= p.degree(); ++k) c[static_cast<std::size_t>(k - 1)] = p[k] * static_cast<double>(k);
  return Polynomial(std::move(c));
}

int RootSet::total_multiplicity() const {
  int n = 0;
  for (const Root& r : roots) n += r.multiplicity;
  return n;
}

double RootSet::distance_to_nearest(cplx z) const {
  double best = std::numeric_limits<double>::infinity();
  for (const Root& r : roots) best = std::min(best, std::abs(z - r.location));
  return best;
}

namespace {

// Sum of |a_k| |z|^k; the rounding-error scale of a Horner evaluation at z.
double eval_scale(const Polynomial& p, double r) {
  const auto c = p.coeffs();
  double acc = std::abs(c.back());
  for (std::size_t k = c.size() - 1; k-- > 0;) acc = acc * r + std::abs(c[k]);
  return acc;
}

double fujiwara_bound(const Polynomial& p) {
  const int d = p.degree();
  const double lead = std::abs(p.leading());
  double bound = 0.0;
  for (int k = 1; k <= d; ++k) {
    double ratio = std::abs(p[d - k]) / lead;
    if (k == d) ratio *= 0.5;
    bound = std::max(bound, std::pow(ratio, 1.0 / k));
  }
  return 2.0 * bound;
}

}  // namespace

RootSet find_roots(const Polynomial& p, double tol) {
  const int d = p.degree();
  if (d < 1) throw Error(ErrorKind::InvalidArgument, "find_roots needs degree >= 1");
  if (d == 1) return {{{-p[0] / p[1], 1}}};

  constexpr double eps = std::numeric_limits<double>::epsilon();
  double radius = fujiwara_bound(p);
  if (radius == 0.0) radius = 1.0;  // all lower coefficients vanish: root 0 of order d

  std::vector<cplx> z(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) z[static_cast<std::size_t>(k)] = std::polar(radius, kTwoPi * k / d + 0.4);

  std::vector<bool> done(z.size(), false);
  constexpr int kMaxIter = 2000;
  int iter = 0;
  for (; iter < kMaxIter; ++iter) {
    bool all_done = true;
    for (std::size_t k = 0; k < z.size(); ++k) {
      if (done[k]) continue;
      const auto [value, deriv] = eval_poly_with_derivative(p, z[k]);
      if (std::abs(value) <= 4.0 * eps * eval_scale(p, std::abs(z[k]))) {
        done[k] = true;
        continue;
      }
      all_done = false;
      cplx repulsion{};
      for (std::size_t j = 0; j < z.size(); ++j) {
        if (j != k) repulsion += 1.0 / (z[k] - z[j]);
      }
      const cplx ratio = deriv == cplx{} ? cplx{1e-3 * (1.0 + std::abs(z[k]))} : value / deriv;
      const cplx step = ratio / (1.0 - ratio * repulsion);
      z[k] -= is_finite(step) ? step : ratio;
    }
    if (all_done) break;
  }
  if (iter == kMaxIter) throw Error(ErrorKind::NonConvergence, "Aberth iteration did not converge");

  // Merge approximations of multiple roots.
  struct Cluster {
    cplx sum;
    int count;
    cplx center() const { return sum / static_cast<double>(count); }
  };
  std::vector<Cluster> clusters;
  for (const cplx& r : z) clusters.push_back({r, 1});
  for (bool merged = true; merged;) {
    merged = false;
    for (std::size_t i = 0; i < clusters.size() && !merged; ++i) {
      for (std::size_t j = i + 1; j < clusters.size() && !merged; ++j) {
        const int k = clusters[i].count + clusters[j].count;
        const cplx ci = clusters[i].center();
        const double radius_k = std::pow(tol, 1.0 / k) * std::max(1.0, std::abs(ci));
        if (std::abs(ci - clusters[j].center()) <= radius_k) {
          clusters[i].sum += clusters[j].sum;
          clusters[i].count = k;
          clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(j));
          merged = true;
        }
      }
    }
  }

  RootSet out;
  for (const Cluster& c : clusters) {
    // Polish on the (k-1)-th derivative, where a k-fold root is simple.
    Polynomial q = p;
    for (int i = 1; i < c.count; ++i) q = derivative(q);
    cplx r = c.center();
    for (int i = 0; i < 3; ++i) {
      const auto [value, deriv] = eval_poly_with_derivative(q, r);
      if (deriv == cplx{}) break;
      const cplx next = r - value / deriv;
      if (!is_finite(next) || std::abs(next - r) > 1e-3 * std::max(1.0, std::abs(r))) break;
      r = next;
    }
    out.roots.push_back({r, c.count});
  }
  return out;
}

std::vector<cplx> asymptotic_directions(const Polynomial& p) {
  const int d = p.degree();
  if (d < 1) return {};
  const cplx base = -1.0 / p.leading();
  const double modulus = std::pow(std::abs(base), 1.0 / d);
  const double theta = std::arg(base);
  std::vector<double> angles;
  for (int k = 0; k < d; ++k) {
    double a = std::fmod((theta + kTwoPi * k) / d, kTwoPi);
    if (a < 0.0) a += kTwoPi;
    angles.push_back(a);
  }
  std::sort(angles.begin(), angles.end());
  std::vector<cplx> out;
  for (double a : angles) out.push_back(std::polar(modulus, a));
  return out;
}

}  // namespace logsurf
