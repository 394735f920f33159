#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "logsurf/foliation.hpp"
#include "logsurf/schwarz_christoffel.hpp"

namespace logsurf {

/// Keys keep insertion order so exported files follow the documented schema.
using Json = nlohmann::ordered_json;

/// Complex numbers as [re, im]; NaN components become null.
Json to_json(cplx z);
/// Throws Error(Parse) unless j is a pair of numbers.
cplx complex_from_json(const Json& j);

/// Ascending degree, e.g. z^2 - 1 -> [[-1,0],[0,0],[1,0]].
Json to_json(const Polynomial& p);
Polynomial polynomial_from_json(const Json& j);

/// { "P": [...], "Q": [...], "quad_tol": t }
Json map_to_json(const EntireMap& map);
EntireMap map_from_json(const Json& j);

/// [{ "j", "rho", "w", "tail_bound" }, ...]
Json to_json(const std::vector<AsymptoticValue>& values);

/// Polylines { "t": [...], "z": [[re,im],...], "meta": {...} }.
Json to_json(const FlowCurve& curve);
Json to_json(const TransversalCurve& curve);
Json to_json(const Separatrix& sep);

Json to_json(const BBox& box);
BBox bbox_from_json(const Json& j);

/// { "sheets", "cuts", "nodes": [{ "w", "order": n | "inf", "truncated" }], "window" }
Json to_json(const SurfaceSkeleton& skeleton);

/// { "vertices": [{ "z", "alpha" }], "ends": [{ "z", "beta" }], "A", "B", "C" }
Json to_json(const SCMapSpec& spec);
SCMapSpec sc_spec_from_json(const Json& j);

/// Two-space indented text with a trailing newline.  Doubles are written in
/// shortest round-trip form, so equal inputs give byte-identical output.
std::string dump(const Json& j);

/// Parses text, mapping syntax errors to Error(Parse).
Json parse_json(const std::string& text);

}  // namespace logsurf
