#pragma once

#include <utility>
#include <vector>

#include "core/propagation.hpp"
#include "core/targets.hpp"

namespace vaporstore {

/// Transverse intensity profile: per-column mean over a centered band of rows.
struct LineProfile {
  std::vector<double> x;       // column center positions, m
  std::vector<double> values;  // band-averaged intensity per column
};

LineProfile line_profile(const Image& img, const GridSpec&, double band_fraction = 0.5);

/// Michelson visibility between two adjacent regions: peaks are the mean of the
/// two per-region profile maxima, the trough is the profile minimum in the gap
/// between them. Clamped to [0, 1].
double visibility(const LineProfile&, int region_a, int region_b, const LabelMap&);

struct CurvePoint {
  double tau = 0.0;
  double visibility = 0.0;
};

struct VisibilityCurve {
  std::vector<CurvePoint> points;   // taus strictly increasing
  std::vector<double> phases;       // metadata: region phases the curve was taken with
  MediumParams medium;              // metadata: medium the curve was taken in
  void validate() const;
};

VisibilityCurve sweep_visibility(const Target&, const std::vector<double>& phases,
                                 const MediumParams&, const std::vector<double>& taus,
                                 std::pair<int, int> region_pair = {1, 2});
VisibilityCurve sweep_visibility(const TargetSpec&, const GridSpec&, const MediumParams&,
                                 const std::vector<double>& taus,
                                 std::pair<int, int> region_pair = {1, 2});

struct FitSpec {
  bool fit_diffusion = false;
  bool fit_phase_error = false;   // phase offset added to region 1
  double diffusion_lo = 0.0, diffusion_hi = 0.0;    // m^2/s
  double phase_error_lo = 0.0, phase_error_hi = 0.0;  // rad
};

struct FitResult {
  double diffusion = 0.0;
  double phase_error = 0.0;
  double residual_norm = 0.0;  // L2 norm of the visibility residuals at the optimum
  int iterations = 0;
  bool converged = false;
};

/// Least-squares fit of the forward model to a measured visibility curve.
/// Whatever is not free is taken from `fixed`. The decay rate drops out of the
/// visibility entirely, so it is never a fit parameter.
FitResult fit_parameters(const VisibilityCurve& measured, const TargetSpec&, const GridSpec&,
                         const MediumParams& fixed, const FitSpec&);

}  // namespace vaporstore
