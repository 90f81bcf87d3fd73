#pragma once

#include <vector>

#include "core/grid.hpp"

namespace vaporstore {

/// Region labels per pixel: 0 is background, regions are 1..region_count.
struct LabelMap {
  int nx = 0;
  int ny = 0;
  std::vector<int> values;
  int region_count = 0;

  LabelMap() = default;
  LabelMap(int nx_, int ny_) : nx(nx_), ny(ny_), values(static_cast<std::size_t>(nx_) * ny_, 0) {}
  int& at(int ix, int iy) { return values[static_cast<std::size_t>(iy) * nx + ix]; }
  int at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * nx + ix]; }
};

enum class TargetKind { lines, glyph };

struct LinesGeometry {
  int n_lines = 3;
  double thickness = 340e-6;  // m
  double spacing = 340e-6;    // gap between neighbouring lines, m
  double length = 2e-3;       // extent along y, m
};

struct GlyphGeometry {
  char glyph = '2';           // decimal digit
  double stroke_width = 340e-6;
  double height = 1.7e-3;
};

struct TargetSpec {
  TargetKind kind = TargetKind::lines;
  LinesGeometry lines;
  GlyphGeometry glyph;
  std::vector<double> region_phases;  // radians per region; empty means all zero
};

/// Rasterised input mask: binary amplitude with timestamp 0, plus region labels.
struct Target {
  ComplexField field;
  LabelMap labels;
};

Target make_lines_target(const LinesGeometry&, const GridSpec&);
Target make_glyph_target(const GlyphGeometry&, const GridSpec&);
Target make_target(const TargetSpec&, const GridSpec&);

/// Multiplies each labelled pixel by exp(i * phases[label-1]); background is untouched.
ComplexField apply_region_phases(const ComplexField&, const LabelMap&,
                                 const std::vector<double>& phases);

struct PixelBox {
  int min_x = 0, max_x = -1, min_y = 0, max_y = -1;
  bool empty() const { return max_x < min_x || max_y < min_y; }
};
PixelBox label_bbox(const LabelMap&);

}  // namespace vaporstore
