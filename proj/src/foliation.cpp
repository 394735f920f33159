#include "logsurf/foliation.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace logsurf {

double BBox::corner_radius() const {
  return std::max({std::abs(cplx{x0, y0}), std::abs(cplx{x0, y1}), std::abs(cplx{x1, y0}), std::abs(cplx{x1, y1})});
}

const char* to_string(SeparatrixKind kind) {
  switch (kind) {
    case SeparatrixKind::AsymptoticLeft: return "asymptotic_left";
    case SeparatrixKind::AsymptoticRight: return "asymptotic_right";
    case SeparatrixKind::CriticalLeft: return "critical_left";
    case SeparatrixKind::CriticalRight: return "critical_right";
  }
  return "unknown";
}

std::string DomainLabel::str() const {
  switch (kind) {
    case Kind::D0: return "D0";
    case Kind::C: return "C(" + std::to_string(j) + "," + std::to_string(l) + ")";
    case Kind::Exceptional: return "E(" + std::to_string(index) + ")";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Asymptotic seeding

namespace {

struct PhaseModel {
  const EntireMap& map;
  cplx rho;
  double theta_rho;
  double ref0;   // arg(-b_m / (d a_d))
  int slope;     // m - d + 1

  double reference(double theta) const { return ref0 + slope * theta; }

  // Im P + arg S on the branch continued from the far-field reference.
  double exact(double R, double theta, cplx* z_out = nullptr, cplx* S_out = nullptr) const {
    const cplx z = std::polar(R, theta);
    const cplx S = normalized_tail(map, z, rho);
    if (z_out) *z_out = z;
    if (S_out) *S_out = S;
    return eval_poly(map.P(), z).imag() + reference(theta) + wrap_angle(std::arg(S) - reference(theta));
  }

  // Same with S replaced by its leading term -Q / P'.
  double approx(double R, double theta) const {
    const cplx z = std::polar(R, theta);
    const cplx S = -eval_poly(map.Q(), z) / eval_poly(map.dP(), z);
    return eval_poly(map.P(), z).imag() + reference(theta) + wrap_angle(std::arg(S) - reference(theta));
  }
};

PhaseModel phase_model(const EntireMap& map, int p) {
  const int d = map.d();
  const cplx rho = map.directions()[static_cast<std::size_t>(p - 1)];
  return {map, rho, std::arg(rho), std::arg(-map.Q().leading() / (static_cast<double>(d) * map.P().leading())),
          map.m() - d + 1};
}

}  // namespace

std::vector<AsymptoticSeed> asymptotic_seeds(const EntireMap& map, int p, int K, bool left, double radius) {
  const int d = map.d();
  if (d < 1 || p < 1 || p > d) throw Error(ErrorKind::InvalidArgument, "asymptotic index out of range");
  if (K < 1) throw Error(ErrorKind::InvalidArgument, "K must be at least 1");
  const PhaseModel pm = phase_model(map, p);
  const double c_inf = pm.reference(pm.theta_rho);
  const cplx w = asymptotic_value(map, p).w;

  // Target phases nearest to the far-field centre phase, K on each side.
  const double offset = left ? 0.0 : kPi;
  const int n_plus = static_cast<int>(std::ceil((c_inf - offset) / kTwoPi - 1e-12));
  struct Target {
    int n, k;
    double phase;
  };
  std::vector<Target> targets;
  for (int i = 0; i < K; ++i) {
    int n = n_plus + i;
    if (offset + kTwoPi * n <= c_inf) ++n;  // strictly above for the + side
    targets.push_back({n, i + 1, offset + kTwoPi * n});
  }
  for (int i = 0; i < K; ++i) {
    const int n = targets.front().n - 1 - i;
    targets.push_back({n, -(i + 1), offset + kTwoPi * n});
  }

  const double half = kPi / (2.0 * d) - kPi / (8.0 * d);
  const double lo = pm.theta_rho - half, hi = pm.theta_rho + half;
  // Grid fine enough that the approximate phase moves by < pi/4 per cell.
  double rate = static_cast<double>(map.m()) + 1.0;
  for (int k = 1; k <= d; ++k) rate += k * std::abs(map.P()[k]) * std::pow(radius, k);
  const int cells = std::clamp(static_cast<int>(std::ceil((hi - lo) * rate / (kPi / 4.0))), 16, 200000);
  std::vector<double> grid(static_cast<std::size_t>(cells) + 1);
  for (int i = 0; i <= cells; ++i) grid[static_cast<std::size_t>(i)] = pm.approx(radius, lo + (hi - lo) * i / cells);

  std::vector<AsymptoticSeed> out;
  for (const Target& t : targets) {
    // Bracket on the approximate phase, nearest to the ray.
    int best = -1;
    double best_dist = 1e300;
    for (int i = 0; i < cells; ++i) {
      const double a = grid[static_cast<std::size_t>(i)] - t.phase, b = grid[static_cast<std::size_t>(i + 1)] - t.phase;
      if ((a <= 0.0) == (b <= 0.0)) continue;
      const double mid = lo + (hi - lo) * (i + 0.5) / cells;
      if (std::abs(mid - pm.theta_rho) < best_dist) {
        best_dist = std::abs(mid - pm.theta_rho);
        best = i;
      }
    }
    if (best < 0) throw Error(ErrorKind::SeedFailure, "phase target not reached on the seed circle");
    // Refine on the exact phase, widening the bracket if needed.
    double a = lo + (hi - lo) * best / cells, b = lo + (hi - lo) * (best + 1) / cells;
    double fa = pm.exact(radius, a) - t.phase, fb = pm.exact(radius, b) - t.phase;
    for (int widen = 0; widen < 4 && (fa <= 0.0) == (fb <= 0.0); ++widen) {
      const double step = (hi - lo) / cells;
      a = std::max(lo, a - step);
      b = std::min(hi, b + step);
      fa = pm.exact(radius, a) - t.phase;
      fb = pm.exact(radius, b) - t.phase;
    }
    if ((fa <= 0.0) == (fb <= 0.0)) throw Error(ErrorKind::SeedFailure, "exact phase does not bracket the target");
    for (int it = 0; it < 60 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
      const double m = 0.5 * (a + b);
      const double fm = pm.exact(radius, m) - t.phase;
      if ((fm <= 0.0) == (fa <= 0.0)) {
        a = m;
        fa = fm;
      } else {
        b = m;
      }
    }
    AsymptoticSeed s;
    s.p = p;
    s.n = t.n;
    s.k = t.k;
    s.left = left;
    s.theta = 0.5 * (a + b);
    cplx S;
    pm.exact(radius, s.theta, &s.z, &S);
    const cplx Pz = eval_poly(map.P(), s.z);
    s.tail = std::exp(Pz.real()) * std::abs(S);
    s.F = w - std::exp(Pz) * S;
    out.push_back(s);
  }
  return out;
}

Separatrix trace_asymptotic_separatrix(const EntireMap& map, const AsymptoticSeed& seed, double arclen_budget,
                                       const FlowOptions& flow) {
  const cplx w = asymptotic_value(map, seed.p).w;
  Separatrix s;
  s.kind = seed.left ? SeparatrixKind::AsymptoticLeft : SeparatrixKind::AsymptoticRight;
  s.p = seed.p;
  s.k = seed.k;
  s.level = w.imag();
  s.landing_value = w;
  const Landing landing{EndKind::Asymptotic, seed.p, {}, w};
  if (seed.left) {
    s.curve = integrate_flow(map, seed.z, -arclen_budget, 0.0, flow, seed.F);
    const auto cls = classify_trajectory(map, s.curve);
    s.minus = {cls.backward.kind, cls.backward.j, cls.backward.critical, {}};
    s.plus = landing;
  } else {
    s.curve = integrate_flow(map, seed.z, 0.0, arclen_budget, flow, seed.F);
    const auto cls = classify_trajectory(map, s.curve);
    s.minus = landing;
    s.plus = {cls.forward.kind, cls.forward.j, cls.forward.critical, {}};
  }
  return s;
}

double separatrix_seed_radius(const EntireMap& map, int K, const BBox& bbox, double seed_tail_tol) {
  double R = std::max({1.05 * bbox.corner_radius(), 2.0 * std::max(far_field_radius(map), 1.0)});
  for (int attempt = 0; attempt < 60; ++attempt, R *= 1.2) {
    bool ok = true;
    for (int p = 1; p <= map.d() && ok; ++p) {
      try {
        for (const auto& s : asymptotic_seeds(map, p, K + 1, true, R)) ok = ok && s.tail <= seed_tail_tol;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::SeedFailure && e.kind() != ErrorKind::ToleranceNotMet &&
            e.kind() != ErrorKind::TailBoundFailure)
          throw;
        ok = false;
      }
    }
    if (ok) return R;
  }
  throw Error(ErrorKind::SeedFailure, "no seed radius with certified tails");
}

// ---------------------------------------------------------------------------
// Separatrix tracing

namespace {

Landing landing_from(const EndClass& e, const EntireMap& map) {
  Landing l{e.kind, e.j, e.critical, {}};
  if (e.kind == EndKind::Asymptotic) l.value = asymptotic_value(map, e.j).w;
  if (e.kind == EndKind::Critical) l.value = eval_F(map, e.critical);
  return l;
}

}  // namespace

std::vector<Separatrix> trace_separatrices(const EntireMap& map, int K, const BBox& bbox,
                                           const SeparatrixOptions& opt) {
  if (K < 1) throw Error(ErrorKind::InvalidArgument, "K must be at least 1");
  if (!bbox.valid()) throw Error(ErrorKind::InvalidArgument, "empty bounding box");
  const double R0 = far_field_radius(map);
  if (-bbox.x0 < 3.0 * R0 || bbox.x1 < 3.0 * R0 || -bbox.y0 < 3.0 * R0 || bbox.y1 < 3.0 * R0)
    throw Error(ErrorKind::InvalidArgument, "bounding box must contain the disk |z| <= 3 R0");
  for (const Root& r : map.q_roots().roots)
    if (!bbox.contains(r.location)) throw Error(ErrorKind::InvalidArgument, "bounding box must contain the zeros of Q");

  std::vector<Separatrix> out;
  FlowOptions flow = opt.flow;
  flow.continue_untracked = true;

  if (map.d() >= 1) {
    const double R = separatrix_seed_radius(map, K, bbox, opt.seed_tail_tol);
    flow.stop_radius = 1.2 * R;
    const double budget = 4.0 * R + 2.0 * (bbox.width() + bbox.height());
    for (int p = 1; p <= map.d(); ++p) {
      for (const auto& seed : asymptotic_seeds(map, p, K, true, R)) {
        out.push_back(trace_asymptotic_separatrix(map, seed, budget, flow));
      }
    }
  }

  const double corner = bbox.corner_radius();
  flow.stop_radius = std::max(flow.stop_radius == std::numeric_limits<double>::infinity() ? 0.0 : flow.stop_radius,
                              1.5 * corner);
  const double germ_budget = 4.0 * corner + 2.0 * (bbox.width() + bbox.height());
  for (const Root& root : map.q_roots().roots) {
    const auto rays = singularity_rays(map, root.location);
    double sep = std::numeric_limits<double>::infinity();
    for (const Root& other : map.q_roots().roots)
      if (other.location != root.location) sep = std::min(sep, std::abs(other.location - root.location));
    const double eps = std::max(20.0 * exclusion_radius(root.location), std::min(1e-3, 0.05 * sep));
    const cplx F0 = eval_F(map, root.location);
    for (std::size_t i = 0; i < rays.directions.size(); ++i) {
      cplx z = root.location + eps * rays.directions[i];
      cplx F = F0 + integrate_segment(map, root.location, z);
      for (int it = 0; it < 4; ++it) {
        const cplx dz = cplx{0.0, F0.imag() - F.imag()} / eval_F_prime(map, z);
        if (!is_finite(dz) || std::abs(dz) > 0.1 * eps) break;
        F += integrate_segment(map, z, z + dz);
        z += dz;
      }
      const bool right = (F - F0).real() > 0.0;
      Separatrix s;
      s.kind = right ? SeparatrixKind::CriticalRight : SeparatrixKind::CriticalLeft;
      s.origin = root.location;
      s.ray = static_cast<int>(i);
      s.level = F0.imag();
      s.landing_value = F0;
      const Landing at_root{EndKind::Critical, 0, root.location, F0};
      if (right) {
        s.curve = integrate_flow(map, z, 0.0, germ_budget, flow, F);
        s.curve.samples.insert(s.curve.samples.begin(), FlowSample{-eps, root.location, F0});
        s.minus = at_root;
        s.plus = landing_from(classify_trajectory(map, s.curve).forward, map);
      } else {
        s.curve = integrate_flow(map, z, -germ_budget, 0.0, flow, F);
        s.curve.samples.push_back(FlowSample{eps, root.location, F0});
        s.plus = at_root;
        s.minus = landing_from(classify_trajectory(map, s.curve).backward, map);
      }
      out.push_back(std::move(s));
    }
  }

  for (std::size_t i = 0; i < out.size(); ++i) out[i].id = static_cast<int>(i);
  return out;
}

// ---------------------------------------------------------------------------
// Partition

cplx Partition::center(int cell) const {
  const int ix = cell % n, iy = cell / n;
  return {bbox.x0 + (ix + 0.5) * dx, bbox.y0 + (iy + 0.5) * dy};
}

int Partition::cell_at(cplx z) const {
  if (!bbox.contains(z)) return -1;
  const int ix = std::min(n - 1, static_cast<int>((z.real() - bbox.x0) / dx));
  const int iy = std::min(n - 1, static_cast<int>((z.imag() - bbox.y0) / dy));
  return iy * n + ix;
}

namespace {

double point_segment_distance(cplx p, cplx a, cplx b) {
  const cplx ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  const double t = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

void rasterize_tube(Partition& part, std::vector<double>& best, const Separatrix& s, double radius) {
  const auto& smp = s.curve.samples;
  const BBox grown{part.bbox.x0 - radius, part.bbox.x1 + radius, part.bbox.y0 - radius, part.bbox.y1 + radius};
  for (std::size_t i = 0; i + 1 < smp.size(); ++i) {
    const cplx a = smp[i].z, b = smp[i + 1].z;
    if (!grown.contains(a) && !grown.contains(b)) continue;
    const double xlo = std::min(a.real(), b.real()) - radius, xhi = std::max(a.real(), b.real()) + radius;
    const double ylo = std::min(a.imag(), b.imag()) - radius, yhi = std::max(a.imag(), b.imag()) + radius;
    const int ix0 = std::max(0, static_cast<int>(std::floor((xlo - part.bbox.x0) / part.dx)));
    const int ix1 = std::min(part.n - 1, static_cast<int>(std::floor((xhi - part.bbox.x0) / part.dx)));
    const int iy0 = std::max(0, static_cast<int>(std::floor((ylo - part.bbox.y0) / part.dy)));
    const int iy1 = std::min(part.n - 1, static_cast<int>(std::floor((yhi - part.bbox.y0) / part.dy)));
    for (int iy = iy0; iy <= iy1; ++iy) {
      for (int ix = ix0; ix <= ix1; ++ix) {
        const int cell = iy * part.n + ix;
        const double dist = point_segment_distance(part.center(cell), a, b);
        if (dist <= radius && dist < best[static_cast<std::size_t>(cell)]) {
          best[static_cast<std::size_t>(cell)] = dist;
          part.tube_owner[static_cast<std::size_t>(cell)] = s.id;
        }
      }
    }
  }
}

}  // namespace

Partition partition_window(const EntireMap& map, const std::vector<Separatrix>& seps, const BBox& bbox, int K,
                           const PartitionOptions& opt) {
  if (!bbox.valid()) throw Error(ErrorKind::InvalidArgument, "empty bounding box");
  if (opt.grid_n < 2) throw Error(ErrorKind::InvalidArgument, "grid_n too small");
  Partition part;
  part.bbox = bbox;
  part.n = opt.grid_n;
  part.K = K;
  part.dx = bbox.width() / part.n;
  part.dy = bbox.height() / part.n;
  const std::size_t total = static_cast<std::size_t>(part.n) * static_cast<std::size_t>(part.n);
  part.tube_owner.assign(total, -1);
  part.cell_component.assign(total, -1);

  if (opt.tube_diagonals > 0.0) {
    std::vector<double> best(total, std::numeric_limits<double>::infinity());
    const double radius = opt.tube_diagonals * part.diagonal();
    for (const auto& s : seps)
      if (s.is_cut()) rasterize_tube(part, best, s, radius);
  }

  // 4-connected flood fill in scan order, so component ids follow first-cell order.
  std::vector<int> stack;
  for (std::size_t c = 0; c < total; ++c) {
    if (part.tube_owner[c] >= 0 || part.cell_component[c] >= 0) continue;
    Component comp;
    comp.id = static_cast<int>(part.components.size());
    comp.first_cell = static_cast<int>(c);
    stack.assign(1, static_cast<int>(c));
    part.cell_component[c] = comp.id;
    while (!stack.empty()) {
      const int cell = stack.back();
      stack.pop_back();
      comp.cells.push_back(cell);
      const int ix = cell % part.n, iy = cell / part.n;
      const int nbr[4][2] = {{ix - 1, iy}, {ix + 1, iy}, {ix, iy - 1}, {ix, iy + 1}};
      for (const auto& nb : nbr) {
        if (nb[0] < 0 || nb[0] >= part.n || nb[1] < 0 || nb[1] >= part.n) continue;
        const std::size_t q = static_cast<std::size_t>(nb[1] * part.n + nb[0]);
        if (part.tube_owner[q] >= 0 || part.cell_component[q] >= 0) continue;
        part.cell_component[q] = comp.id;
        stack.push_back(static_cast<int>(q));
      }
    }
    std::sort(comp.cells.begin(), comp.cells.end());
    part.components.push_back(std::move(comp));
  }

  // Slivers left where converging tubes pinch off are not domains.
  std::vector<Component> kept;
  for (auto& comp : part.components) {
    if (static_cast<int>(comp.cells.size()) < opt.min_cells) {
      for (int cell : comp.cells) part.cell_component[static_cast<std::size_t>(cell)] = -1;
      continue;
    }
    comp.id = static_cast<int>(kept.size());
    for (int cell : comp.cells) part.cell_component[static_cast<std::size_t>(cell)] = comp.id;
    kept.push_back(std::move(comp));
  }
  part.components.swap(kept);

  // Bounding separatrices: tube owners 4-adjacent to component cells along a
  // contact comparable to the component's longest one.
  std::vector<std::map<int, int>> contact(part.components.size());
  for (std::size_t c = 0; c < total; ++c) {
    const int owner = part.tube_owner[c];
    if (owner < 0) continue;
    const int ix = static_cast<int>(c) % part.n, iy = static_cast<int>(c) / part.n;
    const int nbr[4][2] = {{ix - 1, iy}, {ix + 1, iy}, {ix, iy - 1}, {ix, iy + 1}};
    for (const auto& nb : nbr) {
      if (nb[0] < 0 || nb[0] >= part.n || nb[1] < 0 || nb[1] >= part.n) continue;
      const int comp = part.cell_component[static_cast<std::size_t>(nb[1] * part.n + nb[0])];
      if (comp >= 0) ++contact[static_cast<std::size_t>(comp)][owner];
    }
  }
  for (std::size_t i = 0; i < part.components.size(); ++i) {
    int longest = 0;
    for (const auto& [owner, count] : contact[i]) longest = std::max(longest, count);
    const double floor = std::max(3.0, opt.min_contact * longest);
    for (const auto& [owner, count] : contact[i])
      if (count >= floor) part.components[i].bounding.push_back(owner);
  }

  // Base component: the one holding 0, else the one nearest to 0.
  int base = -1;
  if (bbox.contains(0.0)) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < total; ++c) {
      if (part.cell_component[c] < 0) continue;
      const double dist = std::abs(part.center(static_cast<int>(c)));
      if (dist < best) {
        best = dist;
        base = part.cell_component[c];
      }
    }
  }

  std::map<int, const Separatrix*> by_id;
  for (const auto& s : seps) by_id[s.id] = &s;
  int exceptional = 0;
  for (auto& comp : part.components) {
    if (comp.id == base) {
      comp.label.kind = DomainLabel::Kind::D0;
      continue;
    }
    std::map<std::pair<int, int>, std::vector<int>> groups;  // (p, side) -> |k|
    bool finite_cut = false;
    for (int id : comp.bounding) {
      const Separatrix& s = *by_id.at(id);
      if (s.kind == SeparatrixKind::AsymptoticLeft) groups[{s.p, s.k > 0 ? 1 : -1}].push_back(std::abs(s.k));
      if (s.kind == SeparatrixKind::CriticalLeft) finite_cut = true;
    }
    if (groups.size() == 1 && !finite_cut) {
      const auto& [key, ks] = *groups.begin();
      comp.label.kind = DomainLabel::Kind::C;
      comp.label.j = key.second > 0 ? 2 * key.first - 1 : 2 * key.first;
      comp.label.l = *std::min_element(ks.begin(), ks.end());
      comp.label.truncated = comp.label.l == K && *std::max_element(ks.begin(), ks.end()) == K;
    } else {
      comp.label.kind = DomainLabel::Kind::Exceptional;
      comp.label.index = exceptional++;
    }
  }

  if (opt.check_trajectories) {
    FlowOptions flow;
    flow.continue_untracked = true;
    flow.stop_radius = 1.5 * bbox.corner_radius();
    const double budget = bbox.width() + bbox.height();
    for (const auto& comp : part.components) {
      std::set<int> stacks;
      std::vector<cplx> roots;
      for (int id : comp.bounding) {
        const Separatrix& s = *by_id.at(id);
        if (s.kind == SeparatrixKind::AsymptoticLeft) stacks.insert(s.p);
        if (s.kind == SeparatrixKind::CriticalLeft) roots.push_back(s.origin);
      }
      bool bad = false;
      for (int cell : {comp.cells.front(), comp.cells[comp.cells.size() / 2]}) {
        FlowCurve c;
        try {
          c = integrate_flow(map, part.center(cell), -budget, budget, flow);
        } catch (const Error&) {
          continue;
        }
        const auto cls = classify_trajectory(map, c);
        for (const auto& [end, sample] : {std::pair{cls.backward, c.front()}, std::pair{cls.forward, c.back()}}) {
          if (end.kind == EndKind::Critical) {
            const bool known = std::any_of(roots.begin(), roots.end(),
                                           [&](cplx r) { return std::abs(r - end.critical) < 1e-9; });
            bad = bad || !known;
          }
          if (end.kind == EndKind::Asymptotic && is_finite(sample.F) &&
              std::abs(sample.F - asymptotic_value(map, end.j).w) < 1e-6) {
            bad = bad || stacks.count(end.j) == 0;
          }
        }
      }
      if (bad) part.unresolved.push_back(comp.id);
    }
    if (opt.strict && !part.unresolved.empty())
      throw Error(ErrorKind::UnresolvedComponent,
                  "component " + std::to_string(part.unresolved.front()) +
                      " has trajectories landing outside its bounding cuts");
  }
  return part;
}

UnivalenceResult check_univalence(const EntireMap& map, const Partition& part, int component, int samples) {
  const auto& cells = part.components.at(static_cast<std::size_t>(component)).cells;
  struct Sample {
    cplx z, F;
    double scale;
  };
  std::vector<Sample> pts;
  const std::size_t count = std::min<std::size_t>(cells.size(), static_cast<std::size_t>(samples));
  for (std::size_t i = 0; i < count; ++i) {
    const int cell = cells[i * cells.size() / count];
    const cplx z = part.center(cell);
    try {
      pts.push_back({z, eval_F(map, z), std::abs(eval_F_prime(map, z))});
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Overflow && e.kind() != ErrorKind::ToleranceNotMet) throw;
    }
  }
  UnivalenceResult res;
  res.samples = static_cast<int>(pts.size());
  const double diag = part.diagonal();
  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (std::size_t b = a + 1; b < pts.size(); ++b) {
      if (std::abs(pts[a].z - pts[b].z) <= 4.0 * diag) continue;
      if (std::abs(pts[a].F - pts[b].F) < 0.25 * diag * (pts[a].scale + pts[b].scale)) {
        res.pass = false;
        res.witness_a = pts[a].z;
        res.witness_b = pts[b].z;
        res.image_a = pts[a].F;
        res.image_b = pts[b].F;
        return res;
      }
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Skeleton

int SurfaceSkeleton::infinite_count() const {
  return static_cast<int>(std::count_if(nodes.begin(), nodes.end(), [](const SkeletonNode& n) { return n.infinite; }));
}

int SurfaceSkeleton::finite_order_excess() const {
  int sum = 0;
  for (const auto& n : nodes)
    if (!n.infinite && n.p == 0) sum += n.order - 1;
  return sum;
}

SurfaceSkeleton build_skeleton(const EntireMap& map, const Partition& part, const std::vector<Separatrix>& seps) {
  SurfaceSkeleton sk;
  sk.bbox = part.bbox;
  sk.K = part.K;
  sk.grid_n = part.n;
  for (const auto& comp : part.components) {
    SkeletonSheet sh;
    sh.id = comp.id;
    sh.label = comp.label;
    sh.first_cell = comp.first_cell;
    sh.cells = static_cast<int>(comp.cells.size());
    for (int id : comp.bounding) sh.slits.push_back(id);
    sk.sheets.push_back(std::move(sh));
  }

  // Sheets on either side of each cut, by majority vote of offset samples.
  std::map<int, SkeletonCut> cut_of;
  for (const auto& s : seps) {
    if (!s.is_cut()) continue;
    std::map<int, int> votes_l, votes_r;
    const auto& smp = s.curve.samples;
    for (double reach : {3.5, 4.5, 6.0}) {
      const double off = reach * part.diagonal();
      for (std::size_t i = 1; i + 1 < smp.size(); ++i) {
        if (!part.bbox.contains(smp[i].z)) continue;
        const cplx tan = smp[i + 1].z - smp[i - 1].z;
        if (std::abs(tan) == 0.0) continue;
        const cplx normal = cplx{0.0, 1.0} * tan / std::abs(tan);
        const int cl = part.cell_at(smp[i].z + off * normal);
        const int cr = part.cell_at(smp[i].z - off * normal);
        if (cl >= 0 && part.cell_component[static_cast<std::size_t>(cl)] >= 0)
          ++votes_l[part.cell_component[static_cast<std::size_t>(cl)]];
        if (cr >= 0 && part.cell_component[static_cast<std::size_t>(cr)] >= 0)
          ++votes_r[part.cell_component[static_cast<std::size_t>(cr)]];
      }
    }
    auto winner = [](const std::map<int, int>& v) {
      int best = -1, count = 0;
      for (const auto& [id, c] : v)
        if (c > count) best = id, count = c;
      return best;
    };
    SkeletonCut cut;
    cut.id = s.id;
    cut.separatrix = s.id;
    cut.landing_value = s.landing_value;
    cut.sheet_a = winner(votes_l);
    cut.sheet_b = winner(votes_r);
    if (cut.sheet_a >= 0 && cut.sheet_a == cut.sheet_b)
      throw Error(ErrorKind::InconsistentGluing, "cut " + std::to_string(s.id) + " has the same sheet on both sides");
    cut_of[s.id] = cut;
    sk.cuts.push_back(cut);
  }

  auto glued = [&](int id) {
    const auto& c = cut_of.at(id);
    return c.sheet_a >= 0 && c.sheet_b >= 0;
  };

  for (int p = 1; p <= map.d(); ++p) {
    SkeletonNode node;
    node.p = p;
    node.w = asymptotic_value(map, p).w;
    node.truncated = true;
    std::vector<const Separatrix*> stack;
    for (const auto& s : seps)
      if (s.kind == SeparatrixKind::AsymptoticLeft && s.p == p) stack.push_back(&s);
    std::sort(stack.begin(), stack.end(), [](const Separatrix* a, const Separatrix* b) { return a->k < b->k; });
    for (const auto* s : stack) node.cuts.push_back(s->id);

    bool ok = static_cast<int>(stack.size()) == 2 * part.K && !stack.empty();
    if (ok) {
      // Outermost cuts reach the window.
      for (const auto* s : {stack.front(), stack.back()}) {
        const bool inside = std::any_of(s->curve.samples.begin(), s->curve.samples.end(),
                                        [&](const FlowSample& f) { return part.bbox.contains(f.z); });
        ok = ok && inside;
      }
      for (const auto* s : stack) ok = ok && glued(s->id);
      // The stack keeps growing: one more level on each side exists at the same radius.
      if (ok) {
        try {
          ok = asymptotic_seeds(map, p, part.K + 1, true, std::abs(stack.front()->curve.seed)).size() ==
               static_cast<std::size_t>(2 * (part.K + 1));
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::SeedFailure) throw;
          ok = false;
        }
      }
    }
    node.confirmed = ok;
    node.infinite = ok;
    sk.nodes.push_back(std::move(node));
  }

  for (const Root& root : map.q_roots().roots) {
    SkeletonNode node;
    node.critical = root.location;
    std::vector<const Separatrix*> germs;
    int rays = 0;
    for (const auto& s : seps) {
      if ((s.kind != SeparatrixKind::CriticalLeft && s.kind != SeparatrixKind::CriticalRight) ||
          std::abs(s.origin - root.location) > 1e-12)
        continue;
      ++rays;
      node.w = s.landing_value;
      if (s.is_cut()) germs.push_back(&s);
    }
    std::sort(germs.begin(), germs.end(), [](const Separatrix* a, const Separatrix* b) { return a->ray < b->ray; });
    for (const auto* s : germs) node.cuts.push_back(s->id);
    node.order = rays / 2;
    node.confirmed = rays == 2 * (root.multiplicity + 1);
    sk.nodes.push_back(std::move(node));
  }

  std::stable_sort(sk.nodes.begin(), sk.nodes.end(), [](const SkeletonNode& a, const SkeletonNode& b) {
    const double aa = a.w == cplx{} ? 0.0 : arg_positive(a.w);
    const double ab = b.w == cplx{} ? 0.0 : arg_positive(b.w);
    if (aa != ab) return aa < ab;
    return std::abs(a.w) < std::abs(b.w);
  });
  return sk;
}

FoliationResult analyze_window(const EntireMap& map, int K, const BBox& bbox, const PartitionOptions& popt,
                               const SeparatrixOptions& sopt) {
  FoliationResult r;
  r.separatrices = trace_separatrices(map, K, bbox, sopt);
  r.partition = partition_window(map, r.separatrices, bbox, K, popt);
  r.skeleton = build_skeleton(map, r.partition, r.separatrices);
  return r;
}

}  // namespace logsurf
