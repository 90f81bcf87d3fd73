#pragma once

#include <complex>

namespace vaporstore::fft {

/// In-place 2D DFT on row-major data (index iy * nx + ix).
/// Forward is unnormalized; inverse divides by nx * ny so the pair round-trips.
void forward2d(std::complex<double>* data, int nx, int ny);
void inverse2d(std::complex<double>* data, int nx, int ny);

}  // namespace vaporstore::fft
