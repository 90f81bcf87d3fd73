#pragma once

#include <complex>
#include <vector>

#include "core/error.hpp"

namespace vaporstore {

using cplx = std::complex<double>;

/// Uniform grid of square pixels with the physical origin at the grid center.
/// Pixel centers sit at x(ix) = (ix - (nx-1)/2) * pitch, so an even grid has
/// no pixel exactly on the axis and mirror pairs map to exact sign flips.
struct GridSpec {
  int nx = 0;
  int ny = 0;
  double pitch = 0.0;  // meters per pixel

  double x(int ix) const { return (ix - 0.5 * (nx - 1)) * pitch; }
  double y(int iy) const { return (iy - 0.5 * (ny - 1)) * pitch; }
  double extent_x() const { return nx * pitch; }
  double extent_y() const { return ny * pitch; }
  std::size_t npixels() const { return static_cast<std::size_t>(nx) * ny; }
  bool operator==(const GridSpec&) const = default;
  void validate() const;
};

struct Image {
  int nx = 0;
  int ny = 0;
  std::vector<double> values;  // row-major, index iy * nx + ix

  Image() = default;
  Image(int nx_, int ny_, double fill = 0.0)
      : nx(nx_), ny(ny_), values(static_cast<std::size_t>(nx_) * ny_, fill) {}
  double& at(int ix, int iy) { return values[static_cast<std::size_t>(iy) * nx + ix]; }
  double at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * nx + ix]; }
};

/// Stored field snapshot. timestamp is the storage time the snapshot refers to.
struct ComplexField {
  GridSpec grid;
  std::vector<cplx> values;  // row-major
  double timestamp = 0.0;

  cplx& at(int ix, int iy) { return values[static_cast<std::size_t>(iy) * grid.nx + ix]; }
  cplx at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * grid.nx + ix]; }
};

ComplexField make_field(const GridSpec& grid, double timestamp = 0.0);

/// Amplitude = sqrt(intensity), optional per-pixel phase in radians.
ComplexField field_from_intensity(const Image& intensity, const GridSpec& grid,
                                  const Image* phase = nullptr, double timestamp = 0.0);

Image intensity(const ComplexField& field);

/// Zero-frequency Fourier component: pitch^2 * sum of the field.
cplx dc_component(const ComplexField& field);

bool all_finite(const ComplexField& field);

}  // namespace vaporstore
