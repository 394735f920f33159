#pragma once

#include <string>
#include <vector>

#include "logsurf/flow.hpp"

namespace logsurf {

struct BBox {
  double x0 = -4.0, x1 = 4.0, y0 = -4.0, y1 = 4.0;

  bool contains(cplx z) const { return z.real() >= x0 && z.real() <= x1 && z.imag() >= y0 && z.imag() <= y1; }
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double corner_radius() const;
  bool valid() const { return x1 > x0 && y1 > y0; }
};

enum class SeparatrixKind { AsymptoticLeft, AsymptoticRight, CriticalLeft, CriticalRight };
const char* to_string(SeparatrixKind kind);

/// Where one end of a separatrix goes.  `value` is the landing value when the
/// end lands (asymptotic or critical).
struct Landing {
  EndKind kind = EndKind::Inconclusive;
  int p = 0;
  cplx critical{};
  cplx value{};
};

/// An integral curve whose image is a horizontal half-line ending at an
/// asymptotic or critical value.  Left kinds have image to the left of that
/// value (they are the cuts); right kinds to the right.
struct Separatrix {
  int id = 0;
  SeparatrixKind kind = SeparatrixKind::AsymptoticLeft;
  int p = 0;          // asymptotic index (asymptotic kinds)
  int k = 0;          // signed stack index, +-1..+-K (asymptotic kinds)
  cplx origin{};      // zero of Q (critical kinds)
  int ray = 0;        // ray index at the zero (critical kinds)
  double level = 0.0; // Im of the landing value
  cplx landing_value{};
  FlowCurve curve;
  Landing minus, plus;

  bool is_cut() const { return kind == SeparatrixKind::AsymptoticLeft || kind == SeparatrixKind::CriticalLeft; }
};

struct SeparatrixOptions {
  double seed_tail_tol = 1e-8;   // |F - w'| required at asymptotic seeds
  FlowOptions flow;
};

/// A seed on the circle |z| = radius for an asymptotic separatrix of ray p.
struct AsymptoticSeed {
  int p = 0;
  int n = 0;            // phase index: target 2 pi n (left) or (2n+1) pi (right)
  int k = 0;            // signed stack index
  bool left = true;
  double theta = 0.0;
  cplx z{};
  cplx F{};             // w'_p - exp(P) S at the seed
  double tail = 0.0;    // |F - w'_p|
};

/// The K seeds on each side of ray p at the given radius.  Throws SeedFailure
/// when fewer than K solutions exist on a side.
std::vector<AsymptoticSeed> asymptotic_seeds(const EntireMap& map, int p, int K, bool left, double radius);

/// Traces one asymptotic separatrix from a far seed towards the window.
Separatrix trace_asymptotic_separatrix(const EntireMap& map, const AsymptoticSeed& seed, double arclen_budget,
                                       const FlowOptions& flow);

/// Cuts for every asymptotic value (K per side of each ray) and all
/// 2(r+1) germs at every zero of Q.  Precondition: bbox holds the zeros of Q
/// and the disk |z| <= 3 R0.
std::vector<Separatrix> trace_separatrices(const EntireMap& map, int K, const BBox& bbox,
                                           const SeparatrixOptions& opt = {});

/// Seed radius used by trace_separatrices for the given window.
double separatrix_seed_radius(const EntireMap& map, int K, const BBox& bbox, double seed_tail_tol = 1e-8);

struct DomainLabel {
  enum class Kind { D0, C, Exceptional };
  Kind kind = Kind::Exceptional;
  int j = 0;       // C: 1..2d
  int l = 0;       // C: stack level
  int index = 0;   // Exceptional: running index
  bool truncated = false;

  std::string str() const;
};

struct Component {
  int id = 0;
  DomainLabel label;
  int first_cell = 0;
  std::vector<int> cells;
  std::vector<int> bounding;  // separatrix ids whose tubes touch the component
};

struct PartitionOptions {
  int grid_n = 400;
  double tube_diagonals = 2.0;   // tube radius in cell diagonals; 0 disables tubes
  bool check_trajectories = true;
  bool strict = true;            // throw UnresolvedComponent instead of only recording it
  int min_cells = 16;            // smaller flood-fill pieces are dropped
  double min_contact = 0.2;      // bounding cut contact, relative to the longest one
};

struct Partition {
  BBox bbox;
  int n = 0;
  double dx = 0.0, dy = 0.0;
  int K = 0;
  std::vector<int> cell_component;  // -1 inside a tube or a dropped sliver
  std::vector<int> tube_owner;      // separatrix id owning a tube cell, -1 elsewhere
  std::vector<Component> components;
  std::vector<int> unresolved;      // component ids flagged by the trajectory check

  cplx center(int cell) const;
  int cell_at(cplx z) const;        // -1 outside the box
  double diagonal() const { return std::hypot(dx, dy); }
};

Partition partition_window(const EntireMap& map, const std::vector<Separatrix>& seps, const BBox& bbox, int K,
                           const PartitionOptions& opt = {});

struct UnivalenceResult {
  bool pass = true;
  int samples = 0;
  cplx witness_a{}, witness_b{};
  cplx image_a{}, image_b{};
};

/// Looks for two well-separated sample points with nearly equal images.
UnivalenceResult check_univalence(const EntireMap& map, const Partition& part, int component, int samples = 2000);

struct SkeletonSheet {
  int id = 0;
  DomainLabel label;
  int first_cell = 0;
  int cells = 0;
  std::vector<int> slits;  // cut ids
};

struct SkeletonCut {
  int id = 0;
  int separatrix = 0;
  cplx landing_value{};
  int sheet_a = -1, sheet_b = -1;
};

struct SkeletonNode {
  cplx w{};
  bool infinite = false;
  int order = 0;           // finite order; 0 when infinite
  bool truncated = false;
  bool confirmed = false;  // infinite: stack checks passed
  int p = 0;               // asymptotic index, 0 for finite nodes
  cplx critical{};         // zero of Q for finite nodes
  std::vector<int> cuts;   // incident cut ids in cyclic order
};

struct SurfaceSkeleton {
  std::vector<SkeletonSheet> sheets;
  std::vector<SkeletonCut> cuts;
  std::vector<SkeletonNode> nodes;  // ascending arg of w in [0, 2 pi)
  BBox bbox;
  int K = 0;
  int grid_n = 0;

  int infinite_count() const;
  int finite_order_excess() const;  // sum of (order - 1) over finite nodes
};

SurfaceSkeleton build_skeleton(const EntireMap& map, const Partition& part, const std::vector<Separatrix>& seps);

/// Everything in one call: separatrices, partition, skeleton.
struct FoliationResult {
  std::vector<Separatrix> separatrices;
  Partition partition;
  SurfaceSkeleton skeleton;
};
FoliationResult analyze_window(const EntireMap& map, int K, const BBox& bbox, const PartitionOptions& popt = {},
                               const SeparatrixOptions& sopt = {});

}  // namespace logsurf
