#pragma once

#include <string>

#include "logsurf/foliation.hpp"

namespace logsurf {

struct RenderOptions {
  int width_px = 800;
  int stride = 4;               // grid cells per edge of one fill block
  int streamlines = 12;         // streamline seeds per window edge; 0 disables the layer
  std::string color_d0 = "#f2c14e";
  std::string color_c = "#7fb3d5";
  std::string color_exceptional = "#e07a5f";
  std::string color_truncated = "#c8c8c8";
  std::string color_separatrix = "#c0392b";
  std::string color_streamline = "#555555";
};

/// Layers, bottom to top: domain fills, flow streamlines, separatrices (one
/// path per separatrix, in id order), node markers.  Equal inputs give
/// byte-identical text.  A window with no area gives an SVG with empty layers.
std::string render_svg(const EntireMap& map, const FoliationResult& result, const RenderOptions& opt = {});

std::string render_empty_svg(const RenderOptions& opt = {});

}  // namespace logsurf
