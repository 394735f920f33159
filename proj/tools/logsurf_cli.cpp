#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "logsurf/run_config.hpp"
#include "logsurf/verify.hpp"

using namespace logsurf;

namespace {

enum Exit { kOk = 0, kVerifyFail = 1, kQuadrature = 2, kPartition = 3, kSolver = 4, kUsage = 64 };

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::Parse:
      return kUsage;
    case ErrorKind::SeedFailure:
    case ErrorKind::RayCountMismatch:
    case ErrorKind::UnresolvedComponent:
    case ErrorKind::InconsistentGluing:
      return kPartition;
    case ErrorKind::SolverDivergence:
    case ErrorKind::NewtonDivergence:
    case ErrorKind::PrevertexCollision:
      return kSolver;
    default:
      return kQuadrature;
  }
}

struct Flags {
  std::string config;
  std::string P, Q, bbox, output, spec;
  std::optional<double> quad_tol;
  std::optional<int> K, grid_n, stride, streamlines, width, solve_d, solve_N, max_iterations;
  std::optional<double> initial_phase;
  std::vector<std::string> checks;
  std::string report;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
  out << text;
}

BBox parse_bbox_flag(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      v.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Error(ErrorKind::Parse, "bad --bbox entry '" + item + "'");
    }
  }
  if (v.size() != 4) throw Error(ErrorKind::Parse, "--bbox needs x0,x1,y0,y1");
  return {v[0], v[1], v[2], v[3]};
}

RunConfig load_config(const Flags& f) {
  RunConfig c = f.config.empty() ? RunConfig{} : config_from_json(parse_json(read_file(f.config)));
  if (!f.P.empty()) c.P = polynomial_from_json(parse_json(f.P));
  if (!f.Q.empty()) c.Q = polynomial_from_json(parse_json(f.Q));
  if (f.quad_tol) c.quad_tol = *f.quad_tol;
  if (!f.bbox.empty()) c.bbox = parse_bbox_flag(f.bbox);
  if (f.K) c.K = *f.K;
  if (f.grid_n) c.grid_n = *f.grid_n;
  if (!f.output.empty()) c.output = f.output;
  if (f.stride) c.render.stride = *f.stride;
  if (f.streamlines) c.render.streamlines = *f.streamlines;
  if (f.width) c.render.width_px = *f.width;
  if (!f.spec.empty()) c.sc_spec = sc_spec_from_json(parse_json(read_file(f.spec)));
  if (f.solve_d || f.solve_N || f.max_iterations || f.initial_phase) {
    SolveRequest s = c.sc_solve.value_or(SolveRequest{});
    if (f.solve_d) s.d = *f.solve_d;
    if (f.solve_N) s.N = *f.solve_N;
    if (f.max_iterations) s.options.max_iterations = *f.max_iterations;
    if (f.initial_phase) s.options.initial_phase = *f.initial_phase;
    c.sc_solve = s;
  }
  return c;
}

PartitionOptions partition_options(const RunConfig& c) {
  PartitionOptions po;
  po.grid_n = c.grid_n;
  return po;
}

SeparatrixOptions separatrix_options(const RunConfig& c) {
  SeparatrixOptions so;
  so.flow.tol = c.flow.tol;
  so.flow.h_max = c.flow.h_max;
  return so;
}

int cmd_asymptotics(const RunConfig& c) {
  c.validate();
  write_output(c.output, dump(to_json(asymptotic_values(c.map()))));
  return kOk;
}

int cmd_flow(const RunConfig& c) {
  c.validate();
  const EntireMap m = c.map();
  Json out = Json::array();
  for (cplx s : c.seeds) out.push_back(to_json(integrate_flow(m, s, c.t_min, c.t_max, c.flow)));
  write_output(c.output, dump(out));
  return kOk;
}

int cmd_separatrices(const RunConfig& c) {
  c.validate();
  const EntireMap m = c.map();
  Json out = Json::array();
  for (const auto& s : trace_separatrices(m, c.K, c.window(), separatrix_options(c))) out.push_back(to_json(s));
  write_output(c.output, dump(out));
  return kOk;
}

int cmd_skeleton(const RunConfig& c) {
  c.validate();
  const EntireMap m = c.map();
  const auto r = analyze_window(m, c.K, c.window(), partition_options(c), separatrix_options(c));
  write_output(c.output, dump(to_json(r.skeleton)));
  return kOk;
}

int cmd_render(const RunConfig& c) {
  // A window without area renders as an empty picture.
  if (c.bbox && (c.bbox->width() == 0.0 || c.bbox->height() == 0.0)) {
    write_output(c.output, render_empty_svg(c.render));
    return kOk;
  }
  c.validate();
  const EntireMap m = c.map();
  const auto r = analyze_window(m, c.K, c.window(), partition_options(c), separatrix_options(c));
  write_output(c.output, render_svg(m, r, c.render));
  return kOk;
}

// Turning of the boundary tangent along each arc between consecutive
// prevertices; zero on every arc means the sides are straight.
Json straightness(const SCMapSpec& s) {
  std::vector<double> cuts;
  for (const auto& v : s.vertices) cuts.push_back(arg_positive(v.z));
  for (const auto& e : s.ends) cuts.push_back(arg_positive(e.z));
  std::sort(cuts.begin(), cuts.end());
  if (cuts.empty()) cuts.push_back(0.0);
  Json arcs = Json::array();
  bool all = true;
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    const double a = cuts[i];
    const double b = i + 1 < cuts.size() ? cuts[i + 1] : cuts[0] + kTwoPi;
    const double pad = 1e-3 * (b - a);
    double ref = 0.0, turn = 0.0;
    const int n = 64;
    for (int k = 0; k <= n; ++k) {
      const cplx e = std::polar(1.0, a + pad + (b - a - 2.0 * pad) * k / n);
      const double dir = std::arg(sc_derivative(s, e) * cplx{0.0, 1.0} * e);
      if (k == 0) ref = dir;
      turn = std::max(turn, std::abs(wrap_angle(dir - ref)));
    }
    const bool ok = turn <= 1e-6;
    all = all && ok;
    Json arc;
    arc["from"] = a;
    arc["to"] = b;
    arc["max_turn"] = turn;
    arc["straight"] = ok;
    arcs.push_back(std::move(arc));
  }
  Json j;
  j["arcs"] = std::move(arcs);
  j["pass"] = all;
  return j;
}

int cmd_sc(const RunConfig& c) {
  c.validate();
  Json out;
  if (c.sc_solve) {
    const EntireMap m(Polynomial::monomial(c.sc_solve->d), Polynomial{1.0}, c.quad_tol);
    const auto sol = solve_symmetric_parameters(m, c.sc_solve->N, c.sc_solve->options);
    out["d"] = c.sc_solve->d;
    out["N"] = c.sc_solve->N;
    out["spec"] = to_json(sol.spec);
    out["phase"] = sol.phase;
    out["residual"] = sol.residual;
    out["iterations"] = sol.iterations;
    Json imgs = Json::array();
    for (cplx w : sol.vertex_images) imgs.push_back(to_json(w));
    out["vertex_images"] = std::move(imgs);
  } else if (c.sc_spec) {
    const SCMapSpec& s = *c.sc_spec;
    out["spec"] = to_json(s);
    Json samples = Json::array();
    const int n = 32;
    for (int k = 0; k < n; ++k) {
      const cplx z = std::polar(0.99, kTwoPi * (k + 0.5) / n);
      Json e;
      e["z"] = to_json(z);
      e["w"] = to_json(sc_eval(s, z));
      samples.push_back(std::move(e));
    }
    out["samples"] = std::move(samples);
    out["straight_sides"] = straightness(s);
  } else {
    throw Error(ErrorKind::InvalidArgument, "sc needs a spec (--spec or config sc.spec) or a solve request");
  }
  write_output(c.output, dump(out));
  return kOk;
}

int cmd_verify(const RunConfig& c, const Flags& f) {
  std::vector<std::string> ids = f.checks.empty() ? c.checks : f.checks;
  ids.erase(std::remove(ids.begin(), ids.end(), "all"), ids.end());
  for (const auto& id : ids)
    if (!is_check_id(id)) throw Error(ErrorKind::InvalidArgument, "unknown check id '" + id + "'");
  if (!(c.quad_tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "quad_tol must be positive");
  VerifyOptions vo;
  vo.quad_tol = c.quad_tol;
  VerificationReport rep;
  for (const auto& id : ids.empty() ? check_ids() : ids) {
    rep.checks.push_back(run_check(id, vo));
    std::cout << format_line(rep.checks.back()) << std::endl;
  }
  std::cout << (rep.all_pass() ? "all checks passed" : "some checks FAILED") << std::endl;
  if (!f.report.empty()) write_output(f.report, dump(to_json(rep)));
  return rep.all_pass() ? kOk : kVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"logsurf: entire maps Q e^P, their foliations, log-Riemann skeletons and SC maps"};
  app.require_subcommand(1);
  Flags f;

  auto common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", f.config, "config JSON file");
    sub->add_option("--P", f.P, "P as JSON [[re,im],...], ascending degree");
    sub->add_option("--Q", f.Q, "Q as JSON [[re,im],...], ascending degree");
    sub->add_option("--quad-tol", f.quad_tol, "quadrature tolerance");
    sub->add_option("-o,--output", f.output, "output file (default stdout)");
  };
  auto window = [&](CLI::App* sub) {
    sub->add_option("--bbox", f.bbox, "window x0,x1,y0,y1");
    sub->add_option("--K", f.K, "stack depth per side");
    sub->add_option("--grid-n", f.grid_n, "partition grid size");
  };

  auto* asym = app.add_subcommand("asymptotics", "asymptotic values w'_j with tail bounds");
  common(asym);
  auto* flow = app.add_subcommand("flow", "integral curves of the unit field from the config seeds");
  common(flow);
  auto* seps = app.add_subcommand("separatrices", "asymptotic and critical separatrices for the window");
  common(seps);
  window(seps);
  auto* skel = app.add_subcommand("skeleton", "surface skeleton JSON");
  common(skel);
  window(skel);
  auto* render = app.add_subcommand("render", "SVG of domains, streamlines, separatrices and nodes");
  common(render);
  window(render);
  render->add_option("--stride", f.stride, "grid cells per fill block edge");
  render->add_option("--streamlines", f.streamlines, "streamline seeds per window edge");
  render->add_option("--width", f.width, "picture width in px");
  auto* sc = app.add_subcommand("sc", "evaluate an SC spec or solve the symmetric D_N parameters");
  common(sc);
  sc->add_option("--spec", f.spec, "SC spec JSON file");
  sc->add_option("--solve-d", f.solve_d, "solve for P = z^d");
  sc->add_option("--N", f.solve_N, "D_N index for the solve");
  sc->add_option("--max-iterations", f.max_iterations, "Gauss-Newton iteration cap");
  sc->add_option("--initial-phase", f.initial_phase, "starting arg(v/u), default pi/d");
  auto* verify = app.add_subcommand("verify", "run the acceptance checks (default all)");
  verify->add_option("-c,--config", f.config, "config JSON file");
  verify->add_option("--quad-tol", f.quad_tol, "quadrature tolerance for every check");
  verify->add_option("--report", f.report, "write the report as JSON");
  verify->add_option("checks", f.checks, "check ids c1..c12 or all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    const RunConfig c = load_config(f);
    if (*asym) return cmd_asymptotics(c);
    if (*flow) return cmd_flow(c);
    if (*seps) return cmd_separatrices(c);
    if (*skel) return cmd_skeleton(c);
    if (*render) return cmd_render(c);
    if (*sc) return cmd_sc(c);
    if (*verify) return cmd_verify(c, f);
  } catch (const Error& e) {
    std::cerr << "logsurf: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "logsurf: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
