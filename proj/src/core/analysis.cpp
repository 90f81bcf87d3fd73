#include "core/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "core/fft.hpp"
#include "core/nelder_mead.hpp"

namespace vaporstore {

namespace {

struct ColumnSpan {
  int lo = 0, hi = -1;
  bool empty() const { return hi < lo; }
};

ColumnSpan region_columns(const LabelMap& labels, int region) {
  ColumnSpan span{labels.nx, -1};
  for (int iy = 0; iy < labels.ny; ++iy)
    for (int ix = 0; ix < labels.nx; ++ix)
      if (labels.at(ix, iy) == region) {
        span.lo = std::min(span.lo, ix);
        span.hi = std::max(span.hi, ix);
      }
  return span;
}

void check_taus(const std::vector<double>& taus) {
  if (taus.empty()) fail(ErrorCode::domain, "need at least one storage duration");
  for (std::size_t i = 0; i < taus.size(); ++i) {
    if (!std::isfinite(taus[i]) || taus[i] < 0.0)
      fail(ErrorCode::domain, "storage durations must be finite and >= 0");
    if (i > 0 && taus[i] <= taus[i - 1])
      fail(ErrorCode::domain, "storage durations must be strictly increasing");
  }
}

}  // namespace

LineProfile line_profile(const Image& img, const GridSpec& grid, double band_fraction) {
  grid.validate();
  if (img.nx != grid.nx || img.ny != grid.ny)
    fail(ErrorCode::shape, "image does not match the grid");
  if (!(band_fraction > 0.0) || band_fraction > 1.0)
    fail(ErrorCode::domain, "band fraction must be in (0, 1]");

  int n_band = std::max(1, static_cast<int>(std::lround(band_fraction * img.ny)));
  n_band = std::min(n_band, img.ny);
  int start = (img.ny - n_band) / 2;

  LineProfile profile;
  profile.x.resize(img.nx);
  profile.values.assign(img.nx, 0.0);
  for (int iy = start; iy < start + n_band; ++iy)
    for (int ix = 0; ix < img.nx; ++ix) profile.values[ix] += img.at(ix, iy);
  for (int ix = 0; ix < img.nx; ++ix) {
    profile.values[ix] /= n_band;
    profile.x[ix] = grid.x(ix);
  }
  return profile;
}

double visibility(const LineProfile& profile, int region_a, int region_b, const LabelMap& labels) {
  if (static_cast<int>(profile.values.size()) != labels.nx)
    fail(ErrorCode::shape, "profile length does not match the label map");
  if (region_a == region_b || region_a < 1 || region_b < 1 || region_a > labels.region_count ||
      region_b > labels.region_count)
    fail(ErrorCode::domain, "region pair must name two distinct existing regions");

  ColumnSpan a = region_columns(labels, region_a);
  ColumnSpan b = region_columns(labels, region_b);
  if (a.empty() || b.empty()) fail(ErrorCode::domain, "region has no pixels");
  if (b.lo < a.lo) std::swap(a, b);
  if (a.hi >= b.lo) fail(ErrorCode::domain, "regions overlap in column extent");
  if (b.lo - a.hi < 2) fail(ErrorCode::domain, "regions touch: no gap to measure");
  for (int r = 1; r <= labels.region_count; ++r) {
    if (r == region_a || r == region_b) continue;
    ColumnSpan other = region_columns(labels, r);
    if (!other.empty() && other.hi > a.hi && other.lo < b.lo)
      fail(ErrorCode::domain, "regions are not adjacent: region " + std::to_string(r) + " sits between them");
  }

  auto span_max = [&](const ColumnSpan& s) {
    double m = 0.0;
    for (int ix = s.lo; ix <= s.hi; ++ix) m = std::max(m, profile.values[ix]);
    return m;
  };
  double peak = 0.5 * (span_max(a) + span_max(b));
  double trough = profile.values[a.hi + 1];
  for (int ix = a.hi + 1; ix < b.lo; ++ix) trough = std::min(trough, profile.values[ix]);

  double denom = peak + trough;
  if (!(denom > 0.0)) fail(ErrorCode::degenerate, "profile is dark across both regions and the gap");
  return std::clamp((peak - trough) / denom, 0.0, 1.0);
}

void VisibilityCurve::validate() const {
  if (points.empty()) fail(ErrorCode::domain, "visibility curve has no points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    const CurvePoint& p = points[i];
    if (!std::isfinite(p.tau) || p.tau < 0.0) fail(ErrorCode::domain, "curve taus must be finite and >= 0");
    if (!std::isfinite(p.visibility) || p.visibility < 0.0 || p.visibility > 1.0)
      fail(ErrorCode::domain, "curve visibilities must lie in [0, 1]");
    if (i > 0 && p.tau <= points[i - 1].tau)
      fail(ErrorCode::domain, "curve taus must be strictly increasing");
  }
}

VisibilityCurve sweep_visibility(const Target& target, const std::vector<double>& phases,
                                 const MediumParams& medium, const std::vector<double>& taus,
                                 std::pair<int, int> region_pair) {
  medium.validate();
  check_taus(taus);
  require_padding(target.field.grid, label_bbox(target.labels), blur_sigma(medium, taus.back()));

  ComplexField phased = apply_region_phases(target.field, target.labels, phases);
  int nx = phased.grid.nx;
  int ny = phased.grid.ny;

  // One forward transform, then one inverse per tau.
  std::vector<cplx> spectrum = phased.values;
  fft::forward2d(spectrum.data(), nx, ny);

  VisibilityCurve curve;
  curve.phases = phases;
  curve.medium = medium;
  std::vector<cplx> work(spectrum.size());
  for (double tau : taus) {
    ComplexField snapshot{phased.grid, {}, phased.timestamp + tau};
    if (tau == 0.0) {
      snapshot.values = phased.values;
    } else {
      DiffusionKernel kernel = make_diffusion_kernel(phased.grid, medium, tau);
      double decay = std::exp(-0.5 * medium.decay_rate * tau);
      work = spectrum;
      for (int iy = 0; iy < ny; ++iy) {
        double my = decay * kernel.multiplier_y[iy];
        cplx* row = work.data() + static_cast<std::size_t>(iy) * nx;
        for (int ix = 0; ix < nx; ++ix) row[ix] *= my * kernel.multiplier_x[ix];
      }
      fft::inverse2d(work.data(), nx, ny);
      snapshot.values = work;
    }
    LineProfile profile = line_profile(intensity(snapshot), phased.grid, 0.5);
    curve.points.push_back({tau, visibility(profile, region_pair.first, region_pair.second, target.labels)});
  }
  return curve;
}

VisibilityCurve sweep_visibility(const TargetSpec& spec, const GridSpec& grid, const MediumParams& medium,
                                 const std::vector<double>& taus, std::pair<int, int> region_pair) {
  Target target = make_target(spec, grid);
  std::vector<double> phases = spec.region_phases;
  if (phases.empty()) phases.assign(target.labels.region_count, 0.0);
  return sweep_visibility(target, phases, medium, taus, region_pair);
}

FitResult fit_parameters(const VisibilityCurve& measured, const TargetSpec& spec, const GridSpec& grid,
                         const MediumParams& fixed, const FitSpec& what) {
  measured.validate();
  if (measured.points.size() < 3)
    fail(ErrorCode::domain, "fit needs at least three curve points");
  if (!what.fit_diffusion && !what.fit_phase_error)
    fail(ErrorCode::domain, "fit has no free parameters");
  fixed.validate();

  Target target = make_target(spec, grid);
  std::vector<double> base = spec.region_phases;
  if (base.empty()) base.assign(target.labels.region_count, 0.0);
  if (static_cast<int>(base.size()) != target.labels.region_count)
    fail(ErrorCode::shape, "region phase count does not match the target");

  std::vector<double> taus;
  taus.reserve(measured.points.size());
  for (const CurvePoint& p : measured.points) taus.push_back(p.tau);

  std::vector<double> lo, hi;
  if (what.fit_diffusion) {
    lo.push_back(what.diffusion_lo);
    hi.push_back(what.diffusion_hi);
  }
  if (what.fit_phase_error) {
    lo.push_back(what.phase_error_lo);
    hi.push_back(what.phase_error_hi);
  }

  auto objective = [&](const std::vector<double>& x) {
    std::size_t i = 0;
    MediumParams medium = fixed;
    if (what.fit_diffusion) medium.diffusion = x[i++];
    std::vector<double> phases = base;
    if (what.fit_phase_error) phases[0] += x[i++];
    VisibilityCurve model = sweep_visibility(target, phases, medium, taus);
    double sse = 0.0;
    for (std::size_t k = 0; k < model.points.size(); ++k) {
      double r = model.points[k].visibility - measured.points[k].visibility;
      sse += r * r;
    }
    return sse;
  };

  MinimizeResult m = nelder_mead(objective, lo, hi);

  FitResult result;
  std::size_t i = 0;
  result.diffusion = what.fit_diffusion ? m.x[i++] : fixed.diffusion;
  result.phase_error = what.fit_phase_error ? m.x[i++] : 0.0;
  result.residual_norm = std::sqrt(m.fx);
  result.iterations = m.iterations;
  result.converged = m.converged;
  return result;
}

}  // namespace vaporstore
