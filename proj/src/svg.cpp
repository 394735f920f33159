#include "logsurf/svg.hpp"

#include <algorithm>
#include <sstream>

#include "strf.hpp"

namespace logsurf {

namespace {

struct Canvas {
  BBox box;
  double scale = 1.0;

  double px(cplx z) const { return (z.real() - box.x0) * scale; }
  double py(cplx z) const { return (box.y1 - z.imag()) * scale; }
  std::string point(cplx z) const { return strf("%.2f,%.2f", px(z), py(z)); }
};

const std::string& fill_color(const DomainLabel& label, const RenderOptions& opt) {
  if (label.truncated) return opt.color_truncated;
  switch (label.kind) {
    case DomainLabel::Kind::D0: return opt.color_d0;
    case DomainLabel::Kind::C: return opt.color_c;
    case DomainLabel::Kind::Exceptional: return opt.color_exceptional;
  }
  return opt.color_exceptional;
}

// Polyline path data for the part of a curve inside `clip`, restarted with M
// at every re-entry.
std::string path_data(const std::vector<cplx>& pts, const BBox& clip, const Canvas& cv) {
  std::string d;
  bool pen = false;
  for (cplx z : pts) {
    if (!clip.contains(z)) {
      pen = false;
      continue;
    }
    d += (pen ? " L" : (d.empty() ? "M" : " M")) + cv.point(z);
    pen = true;
  }
  return d;
}

void header(std::ostringstream& out, double w, double h) {
  out << strf("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.2f\" height=\"%.2f\" viewBox=\"0 0 %.2f %.2f\">\n",
               w, h, w, h);
}

void domain_layer(std::ostringstream& out, const Partition& part, const Canvas& cv, const RenderOptions& opt) {
  out << "<g id=\"domains\" stroke=\"none\">\n";
  const int s = std::max(1, opt.stride);
  const int blocks = (part.n + s - 1) / s;
  auto block_component = [&](int bi, int bj) {
    const int i = std::min(part.n - 1, bi * s + s / 2);
    const int j = std::min(part.n - 1, bj * s + s / 2);
    return part.cell_component[static_cast<std::size_t>(j * part.n + i)];
  };
  const double bw = s * part.dx * cv.scale, bh = s * part.dy * cv.scale;
  for (int bj = 0; bj < blocks; ++bj) {
    int bi = 0;
    while (bi < blocks) {
      const int c = block_component(bi, bj);
      int end = bi + 1;
      while (end < blocks && block_component(end, bj) == c) ++end;
      if (c >= 0) {
        const auto& comp = part.components[static_cast<std::size_t>(c)];
        const double opacity = 0.45 + 0.2 * (comp.id % 3);
        // Block row bj starts at y0 + bj s dy, which is the bottom edge in z.
        const double x = bi * bw;
        const double y = (part.bbox.y1 - (part.bbox.y0 + (bj + 1) * s * part.dy)) * cv.scale;
        out << strf("<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"%s\" "
                    "fill-opacity=\"%.2f\" data-domain=\"%s\"/>\n",
                    x, std::max(0.0, y), (end - bi) * bw, bh, fill_color(comp.label, opt).c_str(), opacity,
                    comp.label.str().c_str());
      }
      bi = end;
    }
  }
  out << "</g>\n";
}

void streamline_layer(std::ostringstream& out, const EntireMap& map, const BBox& box, const Canvas& cv,
                      const RenderOptions& opt) {
  out << strf("<g id=\"streamlines\" fill=\"none\" stroke=\"%s\" stroke-width=\"0.6\">\n",
               opt.color_streamline.c_str());
  const int n = opt.streamlines;
  FlowOptions fo;
  fo.track_image = false;
  fo.tol = 1e-6;
  fo.h_max = 0.02 * std::max(box.width(), box.height());
  fo.stop_radius = 1.05 * box.corner_radius();
  fo.max_steps = 20000;
  const double budget = 0.5 * (box.width() + box.height());
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const cplx z0{box.x0 + (i + 0.5) * box.width() / n, box.y0 + (j + 0.5) * box.height() / n};
      FlowCurve c;
      try {
        c = integrate_flow(map, z0, -budget, budget, fo);
      } catch (const Error&) {
        continue;
      }
      std::vector<cplx> pts;
      for (const auto& s : c.samples) pts.push_back(s.z);
      const std::string d = path_data(pts, box, cv);
      if (!d.empty()) out << "<path d=\"" << d << "\"/>\n";
    }
  }
  out << "</g>\n";
}

void separatrix_layer(std::ostringstream& out, const std::vector<Separatrix>& seps, const BBox& box,
                      const Canvas& cv, const RenderOptions& opt) {
  out << strf("<g id=\"separatrices\" fill=\"none\" stroke=\"%s\" stroke-width=\"1.4\">\n",
               opt.color_separatrix.c_str());
  for (const auto& s : seps) {
    std::vector<cplx> pts;
    for (const auto& f : s.curve.samples) pts.push_back(f.z);
    out << strf("<path data-id=\"%d\" data-kind=\"%s\"%s d=\"%s\"/>\n", s.id, to_string(s.kind),
                s.is_cut() ? "" : " stroke-dasharray=\"4 3\"", path_data(pts, box, cv).c_str());
  }
  out << "</g>\n";
}

// Where the ray from the window centre in direction rho leaves the window.
cplx exit_point(const BBox& box, cplx rho) {
  const cplx c{0.5 * (box.x0 + box.x1), 0.5 * (box.y0 + box.y1)};
  double t = 1e300;
  if (rho.real() > 0) t = std::min(t, (box.x1 - c.real()) / rho.real());
  if (rho.real() < 0) t = std::min(t, (box.x0 - c.real()) / rho.real());
  if (rho.imag() > 0) t = std::min(t, (box.y1 - c.imag()) / rho.imag());
  if (rho.imag() < 0) t = std::min(t, (box.y0 - c.imag()) / rho.imag());
  return c + 0.97 * t * rho;
}

void node_layer(std::ostringstream& out, const EntireMap& map, const SurfaceSkeleton& sk, const Canvas& cv) {
  out << "<g id=\"nodes\" stroke=\"#000000\" stroke-width=\"1\">\n";
  for (const auto& n : sk.nodes) {
    const std::string title = strf("<title>w = %.10g%+.10gi, order %s</title>", n.w.real(), n.w.imag(),
                                   n.infinite ? "inf" : std::to_string(n.order).c_str());
    if (n.infinite) {
      const cplx z = exit_point(sk.bbox, map.directions()[static_cast<std::size_t>(n.p - 1)]);
      out << strf("<rect x=\"%.2f\" y=\"%.2f\" width=\"8\" height=\"8\" fill=\"#000000\">%s</rect>\n",
                  cv.px(z) - 4.0, cv.py(z) - 4.0, title.c_str());
    } else {
      out << strf("<circle cx=\"%.2f\" cy=\"%.2f\" r=\"4\" fill=\"#ffffff\">%s</circle>\n",
                  cv.px(n.critical), cv.py(n.critical), title.c_str());
    }
  }
  out << "</g>\n";
}

}  // namespace

std::string render_empty_svg(const RenderOptions&) {
  std::ostringstream out;
  header(out, 0.0, 0.0);
  for (const char* id : {"domains", "streamlines", "separatrices", "nodes"}) out << "<g id=\"" << id << "\"/>\n";
  out << "</svg>\n";
  return out.str();
}

std::string render_svg(const EntireMap& map, const FoliationResult& result, const RenderOptions& opt) {
  const BBox& box = result.partition.bbox;
  if (!box.valid()) return render_empty_svg(opt);
  Canvas cv{box, opt.width_px / box.width()};
  std::ostringstream out;
  header(out, opt.width_px, box.height() * cv.scale);
  domain_layer(out, result.partition, cv, opt);
  streamline_layer(out, map, box, cv, opt);
  separatrix_layer(out, result.separatrices, box, cv, opt);
  node_layer(out, map, result.skeleton, cv);
  out << "</svg>\n";
  return out.str();
}

}  // namespace logsurf
