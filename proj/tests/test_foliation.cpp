#include <set>

#include "doctest.h"
#include "logsurf/foliation.hpp"

using namespace logsurf;

namespace {

const Polynomial kOne{1.0};

int count_cuts(const std::vector<Separatrix>& seps) {
  return static_cast<int>(std::count_if(seps.begin(), seps.end(), [](const Separatrix& s) { return s.is_cut(); }));
}

}  // namespace

TEST_CASE("asymptotic seeds of exp") {
  const EntireMap e(Polynomial{0.0, 1.0}, kOne);
  const auto seeds = asymptotic_seeds(e, 1, 2, true, 40.0);
  REQUIRE(seeds.size() == 4);
  std::set<long> levels;
  for (const auto& s : seeds) {
    CHECK(s.tail <= 1e-8);
    CHECK(std::abs(s.F - cplx{-1.0, 0.0}) <= 1e-8);
    // F = e^z - 1 is real and below -1 exactly on Im z = (2n+1) pi.
    const double q = s.z.imag() / kPi;
    CHECK(std::abs(q - std::round(q)) < 1e-9);
    CHECK(std::lround(q) % 2 != 0);
    levels.insert(std::lround(q));
    CHECK((s.k > 0) == (q > 0));
  }
  CHECK(levels == std::set<long>{-3, -1, 1, 3});
}

TEST_CASE("separatrices of exp are the lines Im z = +-pi, +-3pi") {
  const EntireMap e(Polynomial{0.0, 1.0}, kOne);
  const BBox box{-4.0, 4.0, -11.0, 11.0};
  const auto seps = trace_separatrices(e, 2, box);
  REQUIRE(seps.size() == 4);
  std::set<long> levels;
  for (const auto& s : seps) {
    CHECK(s.kind == SeparatrixKind::AsymptoticLeft);
    CHECK(s.plus.kind == EndKind::Asymptotic);
    CHECK(s.minus.kind == EndKind::Diverges);
    const double y = s.curve.samples.front().z.imag();
    for (const auto& f : s.curve.samples) {
      if (!box.contains(f.z)) continue;
      CHECK(std::abs(f.z.imag() - y) < 1e-7);
    }
    levels.insert(std::lround(y / kPi));
    double xlo = 1e300, xhi = -1e300;
    for (const auto& f : s.curve.samples) {
      if (!box.contains(f.z)) continue;
      xlo = std::min(xlo, f.z.real());
      xhi = std::max(xhi, f.z.real());
    }
    CHECK(xlo < -3.5);
    CHECK(xhi > 3.5);
  }
  CHECK(levels == std::set<long>{-3, -1, 1, 3});
}

TEST_CASE("strip partition of exp") {
  const EntireMap e(Polynomial{0.0, 1.0}, kOne);
  const BBox box{-4.0, 4.0, -11.0, 11.0};
  PartitionOptions po;
  po.grid_n = 200;
  const auto r = analyze_window(e, 2, box, po);
  REQUIRE(r.partition.components.size() == 5);
  for (const auto& comp : r.partition.components) {
    double ylo = 1e300, yhi = -1e300;
    for (int c : comp.cells) {
      ylo = std::min(ylo, r.partition.center(c).imag());
      yhi = std::max(yhi, r.partition.center(c).imag());
    }
    // Each component sits inside one strip (2k-1) pi < Im z < (2k+1) pi.
    const long k = std::lround(0.5 * (ylo + yhi) / kTwoPi);
    CHECK(ylo > (2 * k - 1) * kPi);
    CHECK(yhi < (2 * k + 1) * kPi);
  }
  const int base = r.partition.cell_component[static_cast<std::size_t>(r.partition.cell_at(0.0))];
  REQUIRE(base >= 0);
  CHECK(r.partition.components[static_cast<std::size_t>(base)].label.kind == DomainLabel::Kind::D0);
  for (const auto& comp : r.partition.components) {
    if (!comp.label.truncated) CHECK(check_univalence(e, r.partition, comp.id).pass);
  }
  CHECK(r.skeleton.infinite_count() == 1);
  CHECK(r.skeleton.finite_order_excess() == 0);
  REQUIRE(r.skeleton.nodes.size() == 1);
  CHECK(std::abs(r.skeleton.nodes[0].w - cplx{-1.0, 0.0}) < 1e-9);
}

TEST_CASE("Gauss map window") {
  const EntireMap g(Polynomial::monomial(2), kOne);
  const BBox box;
  const auto r = analyze_window(g, 2, box);
  const auto& part = r.partition;
  const int base = part.cell_component[static_cast<std::size_t>(part.cell_at(0.0))];
  REQUIRE(base >= 0);
  CHECK(part.components[static_cast<std::size_t>(base)].label.kind == DomainLabel::Kind::D0);
  CHECK(count_cuts(r.separatrices) == 8);
  CHECK(r.skeleton.infinite_count() == 2);
  std::vector<cplx> ws;
  for (const auto& n : r.skeleton.nodes) ws.push_back(n.w);
  REQUIRE(ws.size() == 2);
  CHECK(std::abs(ws[0] - cplx{0.0, 0.8862269254527580}) < 1e-8);
  CHECK(std::abs(ws[1] - cplx{0.0, -0.8862269254527580}) < 1e-8);
  for (const auto& comp : part.components) {
    if (comp.label.kind == DomainLabel::Kind::C && comp.label.truncated) {
      // The remainder beyond the last traced cut still overlaps deeper sheets.
      CHECK_FALSE(check_univalence(g, part, comp.id).pass);
      continue;
    }
    const auto u = check_univalence(g, part, comp.id);
    CHECK_MESSAGE(u.pass, comp.label.str());
  }
}

TEST_CASE("component count grows by 2d from K to K+1") {
  for (int d : {1, 2}) {
    const EntireMap g(Polynomial::monomial(d), kOne);
    const BBox box = d == 1 ? BBox{-4.0, 4.0, -17.0, 17.0} : BBox{};
    PartitionOptions po;
    po.grid_n = 300;
    const auto a = analyze_window(g, 2, box, po);
    const auto b = analyze_window(g, 3, box, po);
    CHECK(b.partition.components.size() == a.partition.components.size() + 2 * static_cast<std::size_t>(d));
  }
}

TEST_CASE("disabling tubes breaks univalence") {
  const EntireMap g(Polynomial::monomial(2), kOne);
  const BBox box;
  const auto seps = trace_separatrices(g, 2, box);
  PartitionOptions po;
  po.tube_diagonals = 0.0;
  po.check_trajectories = false;
  const auto part = partition_window(g, seps, box, 2, po);
  REQUIRE(part.components.size() == 1);
  const auto u = check_univalence(g, part, 0);
  CHECK_FALSE(u.pass);
  CHECK(std::abs(u.witness_a - u.witness_b) > 4.0 * part.diagonal());
  CHECK(std::abs(u.image_a - u.image_b) < 1e-1);
}

TEST_CASE("polynomial map z^2") {
  const EntireMap sq(Polynomial(), Polynomial{0.0, 2.0});
  const auto r = analyze_window(sq, 2, BBox{});
  CHECK(r.skeleton.infinite_count() == 0);
  REQUIRE(r.skeleton.nodes.size() == 1);
  CHECK(r.skeleton.nodes[0].order == 2);
  CHECK(std::abs(r.skeleton.nodes[0].w) < 1e-12);
  CHECK(r.partition.components.size() == 2);
  for (const auto& comp : r.partition.components) CHECK(check_univalence(sq, r.partition, comp.id).pass);
}

TEST_CASE("critical separatrices of z e^z") {
  const EntireMap m(Polynomial{0.0, 1.0}, Polynomial{0.0, 1.0});
  const double h = 3.2 * far_field_radius(m);
  const auto r = analyze_window(m, 2, BBox{-h, h, -h, h});
  CHECK(r.skeleton.infinite_count() == 1);
  CHECK(r.skeleton.finite_order_excess() == 1);
  for (const auto& s : r.separatrices) {
    if (s.kind != SeparatrixKind::CriticalLeft && s.kind != SeparatrixKind::CriticalRight) continue;
    for (const auto& f : s.curve.samples)
      if (is_finite(f.F)) CHECK(std::abs(f.F.imag()) < 1e-6);
  }
  // F = (z - 1) e^z + 1 has one critical value 0 and one asymptotic value 1.
  REQUIRE(r.skeleton.nodes.size() == 2);
  CHECK(std::abs(r.skeleton.nodes[0].w) < 1e-12);
  CHECK(r.skeleton.nodes[0].order == 2);
  CHECK(std::abs(r.skeleton.nodes[1].w - 1.0) < 1e-9);
}
