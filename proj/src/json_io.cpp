#include "logsurf/json_io.hpp"

#include <algorithm>

namespace logsurf {

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorKind::Parse, what); }

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

double number(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_error(std::string("missing field '") + key + "'");
  const Json& v = j.at(key);
  if (!v.is_number()) parse_error(std::string("field '") + key + "' is not a number");
  return v.get<double>();
}

cplx complex_field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_error(std::string("missing field '") + key + "'");
  return complex_from_json(j.at(key));
}

cplx complex_field(const Json& j, const char* key, cplx fallback) {
  return j.contains(key) ? complex_field(j, key) : fallback;
}

const char* to_string(EndKind kind) {
  switch (kind) {
    case EndKind::Diverges: return "diverges";
    case EndKind::Asymptotic: return "asymptotic";
    case EndKind::Critical: return "critical";
    case EndKind::Inconclusive: return "inconclusive";
  }
  return "?";
}

Json landing_json(const Landing& l) {
  Json j;
  j["kind"] = to_string(l.kind);
  if (l.kind == EndKind::Asymptotic) j["p"] = l.p;
  if (l.kind == EndKind::Critical) j["critical"] = to_json(l.critical);
  if (l.kind == EndKind::Asymptotic || l.kind == EndKind::Critical) j["value"] = to_json(l.value);
  return j;
}

Json label_json(const DomainLabel& label) {
  Json j;
  j["name"] = label.str();
  j["truncated"] = label.truncated;
  return j;
}

}  // namespace

Json to_json(cplx z) { return Json::array({number_or_null(z.real()), number_or_null(z.imag())}); }

cplx complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    parse_error("expected a complex number [re, im], got " + j.dump());
  return {j[0].get<double>(), j[1].get<double>()};
}

Json to_json(const Polynomial& p) {
  Json j = Json::array();
  for (cplx c : p.coeffs()) j.push_back(to_json(c));
  return j;
}

Polynomial polynomial_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) parse_error("expected a nonempty coefficient array");
  std::vector<cplx> c;
  for (const auto& e : j) c.push_back(complex_from_json(e));
  return Polynomial(std::move(c));
}

Json map_to_json(const EntireMap& map) {
  Json j;
  j["P"] = to_json(map.P());
  j["Q"] = to_json(map.Q());
  j["quad_tol"] = map.quad_tol();
  return j;
}

EntireMap map_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("P") || !j.contains("Q")) parse_error("map spec needs 'P' and 'Q'");
  const double tol = j.contains("quad_tol") ? number(j, "quad_tol") : 1e-12;
  if (!(tol > 0.0)) parse_error("quad_tol must be positive");
  const Polynomial Q = polynomial_from_json(j.at("Q"));
  if (Q.is_zero()) parse_error("Q must not vanish identically");
  return EntireMap(polynomial_from_json(j.at("P")), Q, tol);
}

Json to_json(const std::vector<AsymptoticValue>& values) {
  Json j = Json::array();
  for (const auto& v : values) {
    Json e;
    e["j"] = v.j;
    e["rho"] = to_json(v.rho);
    e["w"] = to_json(v.w);
    e["tail_bound"] = v.tail_bound;
    j.push_back(std::move(e));
  }
  return j;
}

Json to_json(const FlowCurve& curve) {
  Json t = Json::array(), z = Json::array(), F = Json::array();
  for (const auto& s : curve.samples) {
    t.push_back(s.t);
    z.push_back(to_json(s.z));
    if (curve.has_image) F.push_back(to_json(s.F));
  }
  Json meta;
  meta["seed"] = to_json(curve.seed);
  meta["im_level"] = curve.im_level;
  meta["stop_backward"] = to_string(curve.stop_backward);
  meta["stop_forward"] = to_string(curve.stop_forward);
  if (curve.has_image) meta["F"] = std::move(F);
  Json j;
  j["t"] = std::move(t);
  j["z"] = std::move(z);
  j["meta"] = std::move(meta);
  return j;
}

Json to_json(const TransversalCurve& curve) {
  Json t = Json::array(), z = Json::array();
  double arc = 0.0;
  for (std::size_t i = 0; i < curve.samples.size(); ++i) {
    if (i > 0) arc += std::abs(curve.samples[i] - curve.samples[i - 1]);
    t.push_back(arc);
    z.push_back(to_json(curve.samples[i]));
  }
  Json meta;
  meta["j"] = curve.j;
  meta["k"] = curve.k;
  meta["alpha"] = curve.alpha;
  meta["level"] = curve.level;
  meta["frame"] = curve.frame == CurveFrame::ZPlane ? "z" : "xi";
  meta["min_transversality"] = curve.min_transversality;
  Json j;
  j["t"] = std::move(t);
  j["z"] = std::move(z);
  j["meta"] = std::move(meta);
  return j;
}

Json to_json(const Separatrix& sep) {
  Json j = to_json(sep.curve);
  Json& meta = j["meta"];
  meta["id"] = sep.id;
  meta["kind"] = to_string(sep.kind);
  if (sep.kind == SeparatrixKind::AsymptoticLeft || sep.kind == SeparatrixKind::AsymptoticRight) {
    meta["p"] = sep.p;
    meta["k"] = sep.k;
  } else {
    meta["origin"] = to_json(sep.origin);
    meta["ray"] = sep.ray;
  }
  meta["level"] = sep.level;
  meta["landing_value"] = to_json(sep.landing_value);
  meta["minus"] = landing_json(sep.minus);
  meta["plus"] = landing_json(sep.plus);
  return j;
}

Json to_json(const BBox& box) {
  Json j;
  j["x0"] = box.x0;
  j["x1"] = box.x1;
  j["y0"] = box.y0;
  j["y1"] = box.y1;
  return j;
}

BBox bbox_from_json(const Json& j) {
  if (j.is_array()) {
    if (j.size() != 4) parse_error("bbox array needs [x0, x1, y0, y1]");
    for (const auto& v : j)
      if (!v.is_number()) parse_error("bbox entries must be numbers");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
  }
  return {number(j, "x0"), number(j, "x1"), number(j, "y0"), number(j, "y1")};
}

Json to_json(const SurfaceSkeleton& sk) {
  std::vector<const SkeletonSheet*> sheets;
  for (const auto& s : sk.sheets) sheets.push_back(&s);
  std::stable_sort(sheets.begin(), sheets.end(),
                   [](const SkeletonSheet* a, const SkeletonSheet* b) { return a->first_cell < b->first_cell; });
  Json js = Json::array();
  for (const auto* s : sheets) {
    Json e;
    e["id"] = s->id;
    e["label"] = label_json(s->label);
    e["first_cell"] = s->first_cell;
    e["cells"] = s->cells;
    e["slits"] = s->slits;
    js.push_back(std::move(e));
  }
  Json jc = Json::array();
  for (const auto& c : sk.cuts) {
    Json e;
    e["id"] = c.id;
    e["separatrix"] = c.separatrix;
    e["landing_value"] = to_json(c.landing_value);
    e["sheets"] = Json::array({c.sheet_a, c.sheet_b});
    jc.push_back(std::move(e));
  }
  Json jn = Json::array();
  for (const auto& n : sk.nodes) {
    Json e;
    e["w"] = to_json(n.w);
    if (n.infinite)
      e["order"] = "inf";
    else
      e["order"] = n.order;
    e["truncated"] = n.truncated;
    e["confirmed"] = n.confirmed;
    if (n.p > 0)
      e["p"] = n.p;
    else
      e["critical"] = to_json(n.critical);
    e["cuts"] = n.cuts;
    jn.push_back(std::move(e));
  }
  Json window;
  window["bbox"] = to_json(sk.bbox);
  window["K"] = sk.K;
  window["grid_n"] = sk.grid_n;

  Json j;
  j["sheets"] = std::move(js);
  j["cuts"] = std::move(jc);
  j["nodes"] = std::move(jn);
  j["window"] = std::move(window);
  return j;
}

Json to_json(const SCMapSpec& spec) {
  Json jv = Json::array(), je = Json::array();
  for (const auto& v : spec.vertices) {
    Json e;
    e["z"] = to_json(v.z);
    e["alpha"] = v.alpha;
    jv.push_back(std::move(e));
  }
  for (const auto& v : spec.ends) {
    Json e;
    e["z"] = to_json(v.z);
    e["beta"] = v.beta;
    je.push_back(std::move(e));
  }
  Json j;
  j["vertices"] = std::move(jv);
  j["ends"] = std::move(je);
  j["A"] = to_json(spec.A);
  j["B"] = to_json(spec.B);
  j["C"] = to_json(spec.C);
  return j;
}

SCMapSpec sc_spec_from_json(const Json& j) {
  if (!j.is_object()) parse_error("SC spec must be an object");
  SCMapSpec s;
  if (j.contains("vertices")) {
    if (!j.at("vertices").is_array()) parse_error("'vertices' must be an array");
    for (const auto& v : j.at("vertices")) s.vertices.push_back({complex_field(v, "z"), number(v, "alpha")});
  }
  if (j.contains("ends")) {
    if (!j.at("ends").is_array()) parse_error("'ends' must be an array");
    for (const auto& v : j.at("ends")) s.ends.push_back({complex_field(v, "z"), number(v, "beta")});
  }
  s.A = complex_field(j, "A", s.A);
  s.B = complex_field(j, "B", s.B);
  s.C = complex_field(j, "C", s.C);
  try {
    s.validate();
  } catch (const Error& e) {
    parse_error(e.what());
  }
  return s;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    parse_error(e.what());
  }
}

}  // namespace logsurf
