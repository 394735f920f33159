#pragma once

#include <optional>
#include <string>
#include <vector>

#include "logsurf/json_io.hpp"
#include "logsurf/svg.hpp"

namespace logsurf {

struct SolveRequest {
  int d = 2;
  int N = 1;
  SymmetricSolveOptions options;
};

/// Everything a CLI run needs.  See README.md for the JSON schema.
struct RunConfig {
  Polynomial P = Polynomial::monomial(2);
  Polynomial Q{1.0};
  double quad_tol = 1e-12;

  std::optional<BBox> bbox;  // unset: auto_window(map, K)
  int K = 2;
  int grid_n = 400;

  FlowOptions flow;
  std::vector<cplx> seeds{cplx{0.5, 0.5}};
  double t_min = -10.0;
  double t_max = 10.0;

  std::string output;  // empty: stdout
  RenderOptions render;

  std::optional<SCMapSpec> sc_spec;
  std::optional<SolveRequest> sc_solve;

  std::vector<std::string> checks;  // verify: empty means all

  EntireMap map() const { return EntireMap(P, Q, quad_tol); }
  BBox window() const;

  /// Throws Error(InvalidArgument): bbox empty, K < 1, grid_n < 50, bad tolerances.
  void validate() const;
};

/// Square window holding the disk |z| <= 3.15 R0 and the zeros of Q, at least
/// [-4, 4]^2.  For d = 1 the height is raised so K strips fit on each side.
BBox auto_window(const EntireMap& map, int K);

/// Missing keys keep their defaults.  Throws Error(Parse).
RunConfig config_from_json(const Json& j);
Json to_json(const RunConfig& cfg);

}  // namespace logsurf
