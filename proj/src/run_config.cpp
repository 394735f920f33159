#include "logsurf/run_config.hpp"

#include <algorithm>

namespace logsurf {

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorKind::Parse, what); }

template <class T>
void read(const Json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    parse_error(std::string("field '") + key + "' has the wrong type");
  }
}

const Json& section(const Json& j, const char* key) {
  static const Json empty = Json::object();
  if (!j.contains(key)) return empty;
  if (!j.at(key).is_object()) parse_error(std::string("'") + key + "' must be an object");
  return j.at(key);
}

}  // namespace

BBox auto_window(const EntireMap& map, int K) {
  double h = std::max(4.0, 3.15 * far_field_radius(map));
  for (const auto& r : map.q_roots().roots) h = std::max(h, 1.5 * std::abs(r.location) + 1.0);
  if (map.d() == 1) h = std::max(h, ((2 * K - 1) * kPi + 1.6) / std::abs(map.P().leading()));
  return {-h, h, -h, h};
}

BBox RunConfig::window() const { return bbox ? *bbox : auto_window(map(), K); }

void RunConfig::validate() const {
  if (bbox && !bbox->valid()) throw Error(ErrorKind::InvalidArgument, "bbox must be nonempty");
  if (K < 1) throw Error(ErrorKind::InvalidArgument, "K must be at least 1");
  if (grid_n < 50) throw Error(ErrorKind::InvalidArgument, "grid_n must be at least 50");
  if (!(quad_tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "quad_tol must be positive");
  if (Q.is_zero()) throw Error(ErrorKind::InvalidArgument, "Q must not vanish identically");
  if (!(flow.tol > 0.0) || !(flow.h_max > 0.0)) throw Error(ErrorKind::InvalidArgument, "flow tolerances must be positive");
  if (!(t_min <= 0.0 && t_max >= 0.0)) throw Error(ErrorKind::InvalidArgument, "flow interval must contain 0");
  if (render.stride < 1 || render.width_px < 1 || render.streamlines < 0)
    throw Error(ErrorKind::InvalidArgument, "bad render options");
  if (sc_solve && (sc_solve->d < 1 || sc_solve->N < 0 || sc_solve->options.max_iterations < 0 ||
                   !(sc_solve->options.quad_tol > 0.0) || !(sc_solve->options.target > 0.0)))
    throw Error(ErrorKind::InvalidArgument, "solve request needs d >= 1, N >= 0 and positive tolerances");
}

RunConfig config_from_json(const Json& j) {
  if (!j.is_object()) parse_error("config must be a JSON object");
  RunConfig c;
  if (j.contains("map")) {
    const Json& m = section(j, "map");
    if (m.contains("P")) c.P = polynomial_from_json(m.at("P"));
    if (m.contains("Q")) c.Q = polynomial_from_json(m.at("Q"));
    read(m, "quad_tol", c.quad_tol);
  }
  const Json& w = section(j, "window");
  if (w.contains("bbox")) c.bbox = bbox_from_json(w.at("bbox"));
  read(w, "K", c.K);
  read(w, "grid_n", c.grid_n);

  const Json& f = section(j, "flow");
  read(f, "tol", c.flow.tol);
  read(f, "h_max", c.flow.h_max);
  read(f, "t_min", c.t_min);
  read(f, "t_max", c.t_max);
  if (f.contains("seeds")) {
    if (!f.at("seeds").is_array()) parse_error("'seeds' must be an array");
    c.seeds.clear();
    for (const auto& s : f.at("seeds")) c.seeds.push_back(complex_from_json(s));
  }

  read(j, "output", c.output);

  const Json& r = section(j, "render");
  read(r, "width", c.render.width_px);
  read(r, "stride", c.render.stride);
  read(r, "streamlines", c.render.streamlines);
  const Json& colors = section(r, "colors");
  read(colors, "D0", c.render.color_d0);
  read(colors, "C", c.render.color_c);
  read(colors, "Exceptional", c.render.color_exceptional);
  read(colors, "truncated", c.render.color_truncated);
  read(colors, "separatrix", c.render.color_separatrix);
  read(colors, "streamline", c.render.color_streamline);

  const Json& sc = section(j, "sc");
  if (sc.contains("spec")) c.sc_spec = sc_spec_from_json(sc.at("spec"));
  if (sc.contains("solve")) {
    SolveRequest s;
    const Json& sj = section(sc, "solve");
    read(sj, "d", s.d);
    read(sj, "N", s.N);
    read(sj, "quad_tol", s.options.quad_tol);
    read(sj, "max_iterations", s.options.max_iterations);
    read(sj, "target", s.options.target);
    if (sj.contains("initial_phase")) read(sj, "initial_phase", s.options.initial_phase);
    c.sc_solve = s;
  }
  read(j, "checks", c.checks);
  return c;
}

Json to_json(const RunConfig& c) {
  Json j;
  Json m;
  m["P"] = to_json(c.P);
  m["Q"] = to_json(c.Q);
  m["quad_tol"] = c.quad_tol;
  j["map"] = std::move(m);

  Json w;
  if (c.bbox) w["bbox"] = Json::array({c.bbox->x0, c.bbox->x1, c.bbox->y0, c.bbox->y1});
  w["K"] = c.K;
  w["grid_n"] = c.grid_n;
  j["window"] = std::move(w);

  Json f;
  f["tol"] = c.flow.tol;
  f["h_max"] = c.flow.h_max;
  f["t_min"] = c.t_min;
  f["t_max"] = c.t_max;
  Json seeds = Json::array();
  for (cplx s : c.seeds) seeds.push_back(to_json(s));
  f["seeds"] = std::move(seeds);
  j["flow"] = std::move(f);

  j["output"] = c.output;

  Json r;
  r["width"] = c.render.width_px;
  r["stride"] = c.render.stride;
  r["streamlines"] = c.render.streamlines;
  r["colors"] = Json{{"D0", c.render.color_d0},
                     {"C", c.render.color_c},
                     {"Exceptional", c.render.color_exceptional},
                     {"truncated", c.render.color_truncated},
                     {"separatrix", c.render.color_separatrix},
                     {"streamline", c.render.color_streamline}};
  j["render"] = std::move(r);

  if (c.sc_spec || c.sc_solve) {
    Json sc;
    if (c.sc_spec) sc["spec"] = to_json(*c.sc_spec);
    if (c.sc_solve) {
      const auto& o = c.sc_solve->options;
      Json s{{"d", c.sc_solve->d}, {"N", c.sc_solve->N}, {"quad_tol", o.quad_tol},
             {"max_iterations", o.max_iterations}, {"target", o.target}};
      if (std::isfinite(o.initial_phase)) s["initial_phase"] = o.initial_phase;
      sc["solve"] = std::move(s);
    }
    j["sc"] = std::move(sc);
  }
  if (!c.checks.empty()) j["checks"] = c.checks;
  return j;
}

}  // namespace logsurf
