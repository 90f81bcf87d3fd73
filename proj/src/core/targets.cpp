#include "core/targets.hpp"

#include <cmath>
#include <string>

namespace vaporstore {

namespace {

struct Rect {
  double cx, cy, wx, wy;  // center and full widths, meters
};

// Pixel centers on the closed rectangle boundary count as inside.
void rasterize(const std::vector<Rect>& rects, const GridSpec& grid, Target& out) {
  for (std::size_t r = 0; r < rects.size(); ++r) {
    const Rect& rect = rects[r];
    int hits = 0;
    for (int iy = 0; iy < grid.ny; ++iy) {
      double y = grid.y(iy);
      if (std::abs(y - rect.cy) > 0.5 * rect.wy) continue;
      for (int ix = 0; ix < grid.nx; ++ix) {
        double x = grid.x(ix);
        if (std::abs(x - rect.cx) > 0.5 * rect.wx) continue;
        out.field.at(ix, iy) = 1.0;
        out.labels.at(ix, iy) = static_cast<int>(r) + 1;
        ++hits;
      }
    }
    if (hits == 0)
      fail(ErrorCode::config, "target region " + std::to_string(r + 1) + " rasterizes to zero pixels");
  }
  out.labels.region_count = static_cast<int>(rects.size());
}

Target from_rects(const std::vector<Rect>& rects, const GridSpec& grid) {
  grid.validate();
  for (const Rect& r : rects) {
    if (std::abs(r.cx) + 0.5 * r.wx > 0.5 * grid.extent_x() ||
        std::abs(r.cy) + 0.5 * r.wy > 0.5 * grid.extent_y())
      fail(ErrorCode::config, "target geometry does not fit inside the grid");
  }
  Target out{make_field(grid), LabelMap(grid.nx, grid.ny)};
  rasterize(rects, grid, out);
  return out;
}

// Segment inclusion per digit, letters a..g in display order:
//   a top, b top-right, c bottom-right, d bottom, e bottom-left, f top-left, g middle.
const char* segments_for(char glyph) {
  switch (glyph) {
    case '0': return "abcdef";
    case '1': return "bc";
    case '2': return "abdeg";
    case '3': return "abcdg";
    case '4': return "bcfg";
    case '5': return "acdfg";
    case '6': return "acdefg";
    case '7': return "abc";
    case '8': return "abcdefg";
    case '9': return "abcdfg";
    default: return nullptr;
  }
}

}  // namespace

Target make_lines_target(const LinesGeometry& g, const GridSpec& grid) {
  if (g.n_lines < 1) fail(ErrorCode::config, "line target needs at least one line");
  if (!(g.thickness > 0.0) || !(g.length > 0.0))
    fail(ErrorCode::config, "line thickness and length must be positive");
  if (g.n_lines > 1 && !(g.spacing > 0.0))
    fail(ErrorCode::config, "line spacing must be positive");

  std::vector<Rect> rects;
  double step = g.thickness + g.spacing;
  for (int i = 0; i < g.n_lines; ++i) {
    // Centered symmetrically so mirror-image lines land on mirror-image pixels.
    double cx = (i - 0.5 * (g.n_lines - 1)) * step;
    rects.push_back({cx, 0.0, g.thickness, g.length});
  }
  return from_rects(rects, grid);
}

Target make_glyph_target(const GlyphGeometry& g, const GridSpec& grid) {
  const char* segs = segments_for(g.glyph);
  if (!segs) fail(ErrorCode::config, std::string("no glyph defined for '") + g.glyph + "'");
  double t = g.stroke_width;
  double h = g.height;
  if (!(t > 0.0)) fail(ErrorCode::config, "glyph stroke width must be positive");
  if (!(h > 3.0 * t)) fail(ErrorCode::config, "glyph height must exceed three stroke widths");

  double w = 0.6 * h;  // glyph width
  double col = 0.5 * (w - t);           // vertical stroke center offset from the axis
  double row = 0.5 * (h - t);           // horizontal stroke center offset
  double vlen = 0.5 * (h - 3.0 * t);    // vertical stroke length
  double vrow = 0.25 * (h - t);         // vertical stroke center height

  std::vector<Rect> rects;
  for (const char* s = segs; *s; ++s) {
    switch (*s) {
      case 'a': rects.push_back({0.0, row, w, t}); break;
      case 'b': rects.push_back({col, vrow, t, vlen}); break;
      case 'c': rects.push_back({col, -vrow, t, vlen}); break;
      case 'd': rects.push_back({0.0, -row, w, t}); break;
      case 'e': rects.push_back({-col, -vrow, t, vlen}); break;
      case 'f': rects.push_back({-col, vrow, t, vlen}); break;
      case 'g': rects.push_back({0.0, 0.0, w, t}); break;
    }
  }
  return from_rects(rects, grid);
}

Target make_target(const TargetSpec& spec, const GridSpec& grid) {
  return spec.kind == TargetKind::lines ? make_lines_target(spec.lines, grid)
                                        : make_glyph_target(spec.glyph, grid);
}

ComplexField apply_region_phases(const ComplexField& field, const LabelMap& labels,
                                 const std::vector<double>& phases) {
  if (labels.nx != field.grid.nx || labels.ny != field.grid.ny)
    fail(ErrorCode::shape, "label map does not match the field grid");
  if (static_cast<int>(phases.size()) != labels.region_count)
    fail(ErrorCode::shape, "expected " + std::to_string(labels.region_count) + " phases, got " +
                               std::to_string(phases.size()));

  std::vector<cplx> factors(phases.size());
  for (std::size_t i = 0; i < phases.size(); ++i) {
    if (!std::isfinite(phases[i])) fail(ErrorCode::domain, "region phases must be finite");
    factors[i] = cplx(std::cos(phases[i]), std::sin(phases[i]));
  }

  ComplexField out = field;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    int label = labels.values[i];
    if (label > 0) out.values[i] *= factors[label - 1];
  }
  return out;
}

PixelBox label_bbox(const LabelMap& labels) {
  PixelBox box{labels.nx, -1, labels.ny, -1};
  for (int iy = 0; iy < labels.ny; ++iy)
    for (int ix = 0; ix < labels.nx; ++ix)
      if (labels.at(ix, iy) > 0) {
        box.min_x = std::min(box.min_x, ix);
        box.max_x = std::max(box.max_x, ix);
        box.min_y = std::min(box.min_y, iy);
        box.max_y = std::max(box.max_y, iy);
      }
  return box;
}

}  // namespace vaporstore
