#pragma once

#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include "logsurf/common.hpp"

namespace logsurf::quad {

// 15-point Kronrod abscissae on [-1,1] (non-negative half) and weights; the
// odd entries are the 7-point Gauss nodes.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelEstimate {
  cplx value;
  double error;  // |K15 - G7|
};

/// One Gauss-Kronrod 7/15 panel of a complex-valued f over real [a, b].
template <class F>
PanelEstimate gauss_kronrod15(F&& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const cplx f0 = f(center);
  cplx kronrod = kKronrodWeights[7] * f0;
  cplx gauss = kGaussWeights[3] * f0;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[static_cast<std::size_t>(i)];
    const cplx pair = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[static_cast<std::size_t>(i)] * pair;
    if (i % 2 == 1) gauss += kGaussWeights[static_cast<std::size_t>(i / 2)] * pair;
  }
  kronrod *= half;
  gauss *= half;
  return {kronrod, std::abs(kronrod - gauss)};
}

struct AdaptiveResult {
  cplx value;
  double error = 0.0;
  int panels = 0;
  bool converged = false;
};

struct AdaptiveOptions {
  double abs_tol = 1e-12;
  double rel_tol = 0.0;
  int max_panels = 4000;
};

/// Globally adaptive integration of f over [a, b] (bisect the panel with the
/// largest error until the summed error is below
/// abs_tol + rel_tol * |integral|).  `initial` gives the starting partition
/// (at least {a, b}).
template <class F>
AdaptiveResult integrate_adaptive(F&& f, const std::vector<double>& initial, const AdaptiveOptions& opt) {
  struct Panel {
    double a, b;
    PanelEstimate est;
    bool operator<(const Panel& o) const {
      if (est.error != o.est.error) return est.error < o.est.error;
      return a > o.a;
    }
  };
  std::priority_queue<Panel> heap;
  cplx total{};
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < initial.size(); ++i) {
    Panel p{initial[i], initial[i + 1], gauss_kronrod15(f, initial[i], initial[i + 1])};
    total += p.est.value;
    total_err += p.est.error;
    heap.push(p);
  }
  AdaptiveResult out;
  while (true) {
    if (!is_finite(total) || !std::isfinite(total_err)) break;
    if (total_err <= opt.abs_tol + opt.rel_tol * std::abs(total)) {
      out.converged = true;
      break;
    }
    if (static_cast<int>(heap.size()) >= opt.max_panels) break;
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {  // panel below resolution
      heap.push(worst);
      break;
    }
    Panel left{worst.a, mid, gauss_kronrod15(f, worst.a, mid)};
    Panel right{mid, worst.b, gauss_kronrod15(f, mid, worst.b)};
    total += left.est.value + right.est.value - worst.est.value;
    total_err += left.est.error + right.est.error - worst.est.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum from the panels to shed the drift of the running updates.
  cplx sum{};
  double err = 0.0;
  out.panels = static_cast<int>(heap.size());
  while (!heap.empty()) {
    sum += heap.top().est.value;
    err += heap.top().est.error;
    heap.pop();
  }
  out.value = sum;
  out.error = err;
  return out;
}

}  // namespace logsurf::quad
