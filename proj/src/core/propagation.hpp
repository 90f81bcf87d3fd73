#pragma once

#include <vector>

#include "core/grid.hpp"
#include "core/targets.hpp"

namespace vaporstore {

struct MediumParams {
  double diffusion = 1e-3;    // m^2/s
  double decay_rate = 14000;  // 1/s, intensity decay rate of the stored excitation
  void validate() const;
};

/// Per-axis RMS spread added by diffusion over tau: sqrt(2 D tau).
double blur_sigma(const MediumParams&, double tau);

/// Discrete diffusion kernel on a periodic grid, kept in both of its exact
/// representations. The Fourier multiplier is the alias sum of exp(-D tau k^2)
/// over reciprocal-lattice images and the real-space weights are the periodized
/// sampled Gaussian; by Poisson summation they describe the same circular
/// convolution, which is what makes the two propagation routes comparable at
/// round-off level.
struct DiffusionKernel {
  double tau = 0.0;
  double diffusion = 0.0;
  std::vector<double> multiplier_x, multiplier_y;  // per DFT bin, exactly 1 at k = 0
  std::vector<double> kernel_x, kernel_y;          // per-axis density (1/m), sum * pitch = 1
};

DiffusionKernel make_diffusion_kernel(const GridSpec&, const MediumParams&, double tau);

/// Stored-field evolution over tau: diffusion blur plus amplitude decay
/// exp(-decay_rate * tau / 2). FFT route; timestamp advances by tau.
ComplexField propagate_storage(const ComplexField&, const MediumParams&, double tau);

/// Same operator evaluated as an explicit circular convolution sum. Slow by
/// design; the independent reference for the FFT route.
ComplexField propagate_storage_direct(const ComplexField&, const MediumParams&, double tau);

/// Direct sum restricted to an output window, for oracle checks on grids where
/// the full quadratic-cost sum would be unreasonable.
ComplexField propagate_storage_direct_window(const ComplexField&, const MediumParams&, double tau,
                                             int x0, int y0, int width, int height);

/// Grid extent must exceed the target bounding box plus 8 sigma of headroom on
/// each axis; wrap-around from the periodic propagator is rejected, not hidden.
void require_padding(const GridSpec&, const PixelBox& target_bbox, double sigma_max);

}  // namespace vaporstore
