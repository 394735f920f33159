#pragma once

#include <algorithm>
#include <limits>
#include <vector>

#include "logsurf/entire_map.hpp"

namespace logsurf {

struct SCVertex {
  cplx z;        // prevertex on the unit circle
  double alpha;  // interior angle pi * alpha
};

struct SCEnd {
  cplx z;        // prevertex on the unit circle
  double beta;   // end angle pi * beta
};

/// F(z) = A * int_0^z exp(C t) prod (t - z_k)^(alpha_k - 1) prod (t - z'_j)^(-beta_j - 1) dt + B
/// on the unit disk.
struct SCMapSpec {
  std::vector<SCVertex> vertices;
  std::vector<SCEnd> ends;
  cplx A{1.0, 0.0};
  cplx B{};
  cplx C{};

  /// Throws InvalidArgument (bad angles, off-circle or coincident prevertices, A = 0).
  void validate() const;
};

/// Target polygon data: vertex images with interior angles and the angles of
/// the ends at infinity.
struct LogPolygonSpec {
  struct Vertex {
    cplx w;
    double angle;
  };
  std::vector<Vertex> vertices;
  std::vector<double> end_angles;
  int symmetry = 1;

  void validate() const;
};

/// Integrand of sc_eval without the factor A.
cplx sc_integrand(const SCMapSpec& spec, cplx t);

/// F along the radial path from 0; the last stretch is desingularized when z
/// is a finite prevertex.  Throws EndpointDivergence at an end prevertex and
/// InvalidArgument for |z| > 1.
cplx sc_eval(const SCMapSpec& spec, cplx z, double tol = 1e-13);

/// F'(z) = A * integrand.
cplx sc_derivative(const SCMapSpec& spec, cplx z);

/// F''/F' in closed form.  Throws PoleAtPrevertex at a prevertex.
cplx sc_nonlinearity(const SCMapSpec& spec, cplx z);

/// {F, z} = sum_k (1 - alpha_k^2) / (2 (z - z_k)^2) + beta_k / (z - z_k), where
/// alpha_k is the local exponent at z_k.
struct SchwarzianSpec {
  std::vector<cplx> z;
  std::vector<double> alpha;
  std::vector<cplx> beta;
};

struct SchwarzianResiduals {
  double res1 = 0.0;  // |sum beta_k|
  double res2 = 0.0;  // |sum 2 beta_k z_k + 1 - alpha_k^2|
  double res3 = 0.0;  // |sum beta_k z_k^2 + (1 - alpha_k^2) z_k|
  double max() const { return std::max({res1, res2, res3}); }
};

cplx schwarzian_eval(const SchwarzianSpec& spec, cplx z);
SchwarzianResiduals sc_schwarzian_residuals(const SchwarzianSpec& spec);

/// d finite prevertices u w^k and d end prevertices v w^k (w = e^{2 pi i/d},
/// k = 0..d-1), every angle 2 pi (2N+1).  A = 1, B = C = 0.
SCMapSpec build_DN_spec(int d, int N, cplx u, cplx v);

/// The polygon D_N approximates for P = z^d: vertices at the asymptotic values.
LogPolygonSpec build_DN_polygon(const EntireMap& map, int N);

struct SymmetricSolveOptions {
  double quad_tol = 1e-13;
  int max_iterations = 50;
  double target = 1e-10;  // stop once every condition holds to this
  double initial_phase = std::numeric_limits<double>::quiet_NaN();  // default pi / d
};

struct SymmetricSolution {
  SCMapSpec spec;
  double phase = 0.0;      // arg(v / u)
  double residual = 0.0;   // max condition violation
  int iterations = 0;
  std::vector<cplx> vertex_images;
};

/// Gauss-Newton solve of the D_N parameters (arg(v/u), |A|, arg A, real B) for
/// P = z^d, Q = 1 from: F(z_1) = w'_1, F(0) = 0, F(conj z) = conj F(z).  The
/// finite prevertices sit at the directions of the asymptotic rays.
SymmetricSolution solve_symmetric_parameters(const EntireMap& map, int N, const SymmetricSolveOptions& opt = {});

}  // namespace logsurf
