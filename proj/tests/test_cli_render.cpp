#include <regex>

#include "doctest.h"
#include "logsurf/run_config.hpp"
#include "logsurf/verify.hpp"

using namespace logsurf;

namespace {

int count(const std::string& text, const std::string& needle) {
  int n = 0;
  for (auto p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++n;
  return n;
}

// Body of the <g id="..."> layer.
std::string layer(const std::string& svg, const std::string& id) {
  const auto open = svg.find("<g id=\"" + id + "\"");
  REQUIRE(open != std::string::npos);
  const auto close = svg.find("</g>", open);
  return svg.substr(open, close == std::string::npos ? std::string::npos : close - open);
}

}  // namespace

TEST_CASE("polynomial and map JSON") {
  const Polynomial p{-1.0, 0.0, 1.0};
  CHECK(to_json(p).dump() == "[[-1.0,0.0],[0.0,0.0],[1.0,0.0]]");
  CHECK(polynomial_from_json(to_json(p)) == p);

  const EntireMap m(Polynomial{0.0, cplx{0.5, -2.0}}, Polynomial{3.0, 1.0}, 1e-10);
  const EntireMap back = map_from_json(map_to_json(m));
  CHECK(back.P() == m.P());
  CHECK(back.Q() == m.Q());
  CHECK(back.quad_tol() == 1e-10);

  CHECK(to_json(cplx{std::nan(""), 1.0}).dump() == "[null,1.0]");
  CHECK_THROWS_AS(complex_from_json(Json::array({1.0})), Error);
  CHECK_THROWS_AS(map_from_json(parse_json(R"({"P": [[1, 0]]})")), Error);
  CHECK_THROWS_AS(map_from_json(parse_json(R"({"P": [[1, 0]], "Q": [[0, 0]]})")), Error);
  try {
    parse_json("{ not json");
    FAIL("parse error expected");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
  }
}

TEST_CASE("asymptotic value export") {
  const auto j = to_json(asymptotic_values(EntireMap(Polynomial::monomial(2), Polynomial{1.0})));
  REQUIRE(j.size() == 2);
  const double a = std::tgamma(1.5);
  CHECK(std::abs(complex_from_json(j[0]["w"]) - cplx{0.0, a}) < 1e-10);
  CHECK(std::abs(complex_from_json(j[1]["w"]) - cplx{0.0, -a}) < 1e-10);
  CHECK(j[0]["j"] == 1);
  CHECK(j[0].contains("tail_bound"));
  CHECK(to_json(asymptotic_values(EntireMap(Polynomial(), Polynomial{1.0}))).empty());
}

TEST_CASE("SC spec JSON") {
  SCMapSpec s;
  s.vertices = {{-1.0, 0.5}, {cplx{0.0, 1.0}, 1.5}};
  s.ends = {{1.0, 0.25}};
  s.A = {2.0, -1.0};
  s.C = {0.0, 0.3};
  const auto j = to_json(s);
  CHECK(j.dump().rfind(R"({"vertices":[{"z":[-1.0,0.0],"alpha":0.5})", 0) == 0);
  const SCMapSpec b = sc_spec_from_json(j);
  REQUIRE(b.vertices.size() == 2);
  CHECK(b.vertices[1].z == cplx{0.0, 1.0});
  CHECK(b.ends[0].beta == 0.25);
  CHECK(b.A == s.A);
  CHECK(b.C == s.C);
  CHECK_THROWS_AS(sc_spec_from_json(parse_json(R"({"vertices": [{"alpha": 2}]})")), Error);
  CHECK_THROWS_AS(sc_spec_from_json(parse_json(R"({"vertices": [{"z": [2, 0], "alpha": 2}]})")), Error);
}

TEST_CASE("flow polyline export") {
  const EntireMap g(Polynomial::monomial(2), Polynomial{1.0});
  const auto c = integrate_flow(g, {0.5, 0.2}, -1.0, 1.0);
  const auto j = to_json(c);
  CHECK(j["t"].size() == c.samples.size());
  CHECK(j["z"].size() == c.samples.size());
  CHECK(j["meta"]["stop_forward"] == "budget");
  CHECK(dump(j) == dump(to_json(integrate_flow(g, {0.5, 0.2}, -1.0, 1.0))));
}

TEST_CASE("run config") {
  RunConfig c;
  CHECK_NOTHROW(c.validate());
  c.K = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c.K = 2;
  c.grid_n = 49;
  CHECK_THROWS_AS(c.validate(), Error);
  c.grid_n = 50;
  c.bbox = BBox{1.0, 1.0, -1.0, 1.0};
  CHECK_THROWS_AS(c.validate(), Error);

  const auto j = parse_json(R"({"map": {"P": [[0,0],[1,0]], "quad_tol": 1e-11},
                                "window": {"bbox": [-4, 4, -11, 11], "K": 3},
                                "render": {"colors": {"D0": "#000000"}}})");
  const RunConfig d = config_from_json(j);
  CHECK(d.P.degree() == 1);
  CHECK(d.quad_tol == 1e-11);
  CHECK(d.K == 3);
  CHECK(d.grid_n == 400);
  CHECK(d.window().y1 == 11.0);
  CHECK(d.render.color_d0 == "#000000");
  CHECK(dump(to_json(config_from_json(to_json(d)))) == dump(to_json(d)));
  CHECK_THROWS_AS(config_from_json(parse_json(R"({"window": {"K": "two"}})")), Error);

  // The automatic window holds 3 R0 and, for d = 1, K strips on each side.
  const EntireMap e(Polynomial{0.0, 1.0}, Polynomial{1.0});
  CHECK(auto_window(e, 2).y1 > 3.0 * kPi);
  const EntireMap q(Polynomial{0.0, 1.0}, Polynomial{0.0, 1.0});
  CHECK(auto_window(q, 2).x1 >= 3.0 * far_field_radius(q));
}

TEST_CASE("skeleton export is deterministic") {
  const EntireMap g(Polynomial::monomial(2), Polynomial{1.0});
  const auto a = dump(to_json(analyze_window(g, 2, BBox{}).skeleton));
  const auto b = dump(to_json(analyze_window(g, 2, BBox{}).skeleton));
  CHECK(a == b);
  const auto j = parse_json(a);
  int inf = 0;
  for (const auto& n : j["nodes"]) inf += n["order"] == "inf";
  CHECK(inf == 2);
  CHECK(j["window"]["K"] == 2);

  const EntireMap sq(Polynomial(), Polynomial{0.0, 2.0});
  const auto js = to_json(analyze_window(sq, 2, BBox{}).skeleton);
  REQUIRE(js["nodes"].size() == 1);
  CHECK(js["nodes"][0]["order"] == 2);
  int last = -1;
  for (const auto& s : js["sheets"]) {
    CHECK(s["first_cell"].get<int>() > last);
    last = s["first_cell"].get<int>();
  }
}

TEST_CASE("SVG layers") {
  const EntireMap g(Polynomial::monomial(2), Polynomial{1.0});
  const auto r = analyze_window(g, 2, BBox{});
  RenderOptions opt;
  opt.streamlines = 4;
  const std::string svg = render_svg(g, r, opt);
  CHECK(svg.rfind("<svg xmlns=\"http://www.w3.org/2000/svg\"", 0) == 0);
  CHECK(svg.substr(svg.size() - 7) == "</svg>\n");
  CHECK(count(layer(svg, "separatrices"), "<path") == static_cast<int>(r.separatrices.size()));
  CHECK(count(layer(svg, "nodes"), "<rect") == 2);
  CHECK(count(layer(svg, "domains"), "data-domain=\"D0\"") > 0);
  CHECK(svg == render_svg(g, r, opt));

  const std::string empty = render_empty_svg();
  CHECK(empty.find("width=\"0.00\"") != std::string::npos);
  CHECK(count(empty, "<g id=") == 4);
  CHECK(empty.substr(empty.size() - 7) == "</svg>\n");
}

TEST_CASE("exp renders as horizontal bands") {
  const EntireMap e(Polynomial{0.0, 1.0}, Polynomial{1.0});
  const BBox box{-4.0, 4.0, -11.0, 11.0};
  PartitionOptions po;
  po.grid_n = 200;
  const auto r = analyze_window(e, 2, box, po);
  RenderOptions opt;
  opt.streamlines = 0;
  const std::string seps = layer(render_svg(e, r, opt), "separatrices");
  const std::regex point("[ML]([0-9.]+),([0-9.]+)");
  int paths = 0;
  for (std::size_t p = seps.find(" d=\""); p != std::string::npos; p = seps.find(" d=\"", p + 1)) {
    const std::string d = seps.substr(p + 4, seps.find('"', p + 4) - p - 4);
    double ymin = 1e300, ymax = -1e300;
    for (auto it = std::sregex_iterator(d.begin(), d.end(), point); it != std::sregex_iterator(); ++it) {
      const double y = std::stod((*it)[2]);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
    // Im z = (2k+1) pi maps to y = (11 - (2k+1) pi) * 800 / 8.
    const double k = std::round(((11.0 - ymin / 100.0) / kPi - 1.0) / 2.0);
    CHECK(ymax - ymin <= 0.01);
    CHECK(std::abs(ymin - (11.0 - (2.0 * k + 1.0) * kPi) * 100.0) <= 0.01);
    ++paths;
  }
  CHECK(paths == 4);
}

TEST_CASE("verification report plumbing") {
  CHECK(check_ids().size() == 12);
  CHECK(is_check_id("c12"));
  CHECK_FALSE(is_check_id("c13"));
  CHECK_THROWS_AS(run_checks({"c0"}), Error);

  const auto rep = run_checks({"c2", "c3"});
  REQUIRE(rep.checks.size() == 2);
  CHECK(rep.all_pass());
  CHECK(format_line(rep.checks[0]).rfind("c2   PASS", 0) == 0);
  const auto j = to_json(rep);
  CHECK(j["pass"] == true);
  CHECK(j["checks"][1]["tolerance"] == 1e-10);

  VerifyOptions loose;
  loose.quad_tol = 1e-2;
  const auto bad = run_check("c1", loose);
  CHECK_FALSE(bad.pass);
  CHECK(bad.measured > bad.tolerance);
}
