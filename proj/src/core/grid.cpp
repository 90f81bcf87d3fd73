#include "core/grid.hpp"

#include <cmath>
#include <string>

namespace vaporstore {

void GridSpec::validate() const {
  if (nx < 8 || ny < 8)
    fail(ErrorCode::config, "grid must be at least 8x8, got " + std::to_string(nx) + "x" + std::to_string(ny));
  if (!(pitch > 0.0) || !std::isfinite(pitch))
    fail(ErrorCode::config, "grid pitch must be positive");
}

ComplexField make_field(const GridSpec& grid, double timestamp) {
  grid.validate();
  return ComplexField{grid, std::vector<cplx>(grid.npixels()), timestamp};
}

ComplexField field_from_intensity(const Image& img, const GridSpec& grid, const Image* phase,
                                  double timestamp) {
  grid.validate();
  if (img.nx != grid.nx || img.ny != grid.ny)
    fail(ErrorCode::shape, "intensity image is " + std::to_string(img.nx) + "x" + std::to_string(img.ny) +
                               " but grid is " + std::to_string(grid.nx) + "x" + std::to_string(grid.ny));
  if (phase && (phase->nx != grid.nx || phase->ny != grid.ny))
    fail(ErrorCode::shape, "phase image does not match the grid");

  ComplexField out = make_field(grid, timestamp);
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    double v = img.values[i];
    if (!(v >= 0.0) || !std::isfinite(v)) fail(ErrorCode::domain, "intensity values must be finite and >= 0");
    double amp = std::sqrt(v);
    if (phase) {
      double p = phase->values[i];
      out.values[i] = cplx(amp * std::cos(p), amp * std::sin(p));
    } else {
      out.values[i] = cplx(amp, 0.0);
    }
  }
  return out;
}

Image intensity(const ComplexField& field) {
  Image out(field.grid.nx, field.grid.ny);
  for (std::size_t i = 0; i < field.values.size(); ++i) out.values[i] = std::norm(field.values[i]);
  return out;
}

cplx dc_component(const ComplexField& field) {
  cplx sum = 0.0;
  for (const cplx& v : field.values) sum += v;
  return sum * (field.grid.pitch * field.grid.pitch);
}

bool all_finite(const ComplexField& field) {
  for (const cplx& v : field.values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

}  // namespace vaporstore
