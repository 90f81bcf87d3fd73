#include "vaporstore/vaporstore.h"

#include <cstring>
#include <string>
#include <vector>

#include "core/analysis.hpp"
#include "core/config.hpp"
#include "core/phase_design.hpp"
#include "core/propagation.hpp"
#include "core/runner.hpp"
#include "core/sequence.hpp"
#include "core/targets.hpp"
#include "core/text.hpp"
#include "core/version.hpp"

using namespace vaporstore;

struct vs_field {
  ComplexField field;
};

struct vs_target {
  TargetSpec spec;   // geometry the target was built from
  GridSpec grid;
  Target target;
};

struct vs_config {
  RunConfig config;
};

namespace {

thread_local std::string g_last_error;

vs_status status_of(const Error& e) {
  switch (e.code()) {
    case ErrorCode::domain: return VS_ERR_DOMAIN;
    case ErrorCode::shape: return VS_ERR_SHAPE;
    case ErrorCode::config: return VS_ERR_CONFIG;
    case ErrorCode::format: return VS_ERR_FORMAT;
    case ErrorCode::io: return VS_ERR_IO;
    case ErrorCode::no_converge: return VS_ERR_NO_CONVERGE;
    case ErrorCode::degenerate: return VS_ERR_DEGENERATE;
  }
  return VS_ERR_INTERNAL;
}

template <typename Fn>
vs_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return VS_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return VS_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return VS_ERR_INTERNAL;
  }
}

vs_status invalid(const char* what) {
  g_last_error = what;
  return VS_ERR_INVALID_ARG;
}

std::vector<double> phases_or_default(const Target& target, const double* phases, size_t n) {
  if (!phases) return std::vector<double>(target.labels.region_count, 0.0);
  return std::vector<double>(phases, phases + n);
}

}  // namespace

extern "C" {

const char* vs_version(void) { return kVersion; }

const char* vs_last_error(void) { return g_last_error.c_str(); }

vs_status vs_field_from_intensity(const double* intensity_in, int nx, int ny, double pitch_m,
                                  const double* phase, vs_field** out) {
  if (!intensity_in || !out) return invalid("vs_field_from_intensity: null argument");
  if (nx < 1 || ny < 1) return invalid("vs_field_from_intensity: non-positive dimensions");
  return guarded([&] {
    GridSpec grid{nx, ny, pitch_m};
    Image img(nx, ny);
    std::copy(intensity_in, intensity_in + grid.npixels(), img.values.begin());
    if (phase) {
      Image ph(nx, ny);
      std::copy(phase, phase + grid.npixels(), ph.values.begin());
      *out = new vs_field{field_from_intensity(img, grid, &ph)};
    } else {
      *out = new vs_field{field_from_intensity(img, grid)};
    }
  });
}

void vs_field_destroy(vs_field* f) { delete f; }

vs_status vs_field_dims(const vs_field* f, int* nx, int* ny, double* pitch_m) {
  if (!f) return invalid("vs_field_dims: null field");
  if (nx) *nx = f->field.grid.nx;
  if (ny) *ny = f->field.grid.ny;
  if (pitch_m) *pitch_m = f->field.grid.pitch;
  return VS_OK;
}

vs_status vs_field_timestamp(const vs_field* f, double* seconds) {
  if (!f || !seconds) return invalid("vs_field_timestamp: null argument");
  *seconds = f->field.timestamp;
  return VS_OK;
}

vs_status vs_field_intensity(const vs_field* f, double* out) {
  if (!f || !out) return invalid("vs_field_intensity: null argument");
  return guarded([&] {
    Image img = intensity(f->field);
    std::copy(img.values.begin(), img.values.end(), out);
  });
}

vs_status vs_field_values(const vs_field* f, double* re, double* im) {
  if (!f || !re || !im) return invalid("vs_field_values: null argument");
  for (std::size_t i = 0; i < f->field.values.size(); ++i) {
    re[i] = f->field.values[i].real();
    im[i] = f->field.values[i].imag();
  }
  return VS_OK;
}

vs_status vs_field_dc(const vs_field* f, double* re, double* im) {
  if (!f || !re || !im) return invalid("vs_field_dc: null argument");
  return guarded([&] {
    cplx dc = dc_component(f->field);
    *re = dc.real();
    *im = dc.imag();
  });
}

vs_status vs_target_lines(int n_lines, double thickness_m, double spacing_m, double length_m,
                          int nx, int ny, double pitch_m, vs_target** out) {
  if (!out) return invalid("vs_target_lines: null output");
  return guarded([&] {
    TargetSpec spec;
    spec.kind = TargetKind::lines;
    spec.lines = LinesGeometry{n_lines, thickness_m, spacing_m, length_m};
    GridSpec grid{nx, ny, pitch_m};
    *out = new vs_target{spec, grid, make_target(spec, grid)};
  });
}

vs_status vs_target_glyph(char glyph, double stroke_m, double height_m, int nx, int ny,
                          double pitch_m, vs_target** out) {
  if (!out) return invalid("vs_target_glyph: null output");
  return guarded([&] {
    TargetSpec spec;
    spec.kind = TargetKind::glyph;
    spec.glyph = GlyphGeometry{glyph, stroke_m, height_m};
    GridSpec grid{nx, ny, pitch_m};
    *out = new vs_target{spec, grid, make_target(spec, grid)};
  });
}

void vs_target_destroy(vs_target* t) { delete t; }

vs_status vs_target_region_count(const vs_target* t, int* count) {
  if (!t || !count) return invalid("vs_target_region_count: null argument");
  *count = t->target.labels.region_count;
  return VS_OK;
}

vs_status vs_target_labels(const vs_target* t, int* out) {
  if (!t || !out) return invalid("vs_target_labels: null argument");
  std::copy(t->target.labels.values.begin(), t->target.labels.values.end(), out);
  return VS_OK;
}

vs_status vs_target_field(const vs_target* t, const double* phases, size_t n_phases, vs_field** out) {
  if (!t || !out) return invalid("vs_target_field: null argument");
  return guarded([&] {
    std::vector<double> ph = phases_or_default(t->target, phases, n_phases);
    *out = new vs_field{apply_region_phases(t->target.field, t->target.labels, ph)};
  });
}

double vs_blur_sigma(double diffusion_m2_per_s, double tau_s) {
  double out = 0.0;
  vs_status st = guarded([&] { out = blur_sigma(MediumParams{diffusion_m2_per_s, 0.0}, tau_s); });
  return st == VS_OK ? out : -1.0;
}

vs_status vs_propagate(const vs_field* f, double diffusion, double decay, double tau_s, vs_field** out) {
  if (!f || !out) return invalid("vs_propagate: null argument");
  return guarded([&] {
    *out = new vs_field{propagate_storage(f->field, MediumParams{diffusion, decay}, tau_s)};
  });
}

vs_status vs_propagate_direct(const vs_field* f, double diffusion, double decay, double tau_s,
                              vs_field** out) {
  if (!f || !out) return invalid("vs_propagate_direct: null argument");
  return guarded([&] {
    *out = new vs_field{propagate_storage_direct(f->field, MediumParams{diffusion, decay}, tau_s)};
  });
}

vs_status vs_group_delay(double group_velocity_m_per_s, double cell_length_m, double* delay_s) {
  if (!delay_s) return invalid("vs_group_delay: null output");
  return guarded([&] {
    SequenceParams p;
    p.group_velocity = group_velocity_m_per_s;
    p.cell_length = cell_length_m;
    *delay_s = group_delay(p);
  });
}

vs_status vs_stored_fraction(double sigma_probe_s, double t_peak_s, double group_velocity_m_per_s,
                             double cell_length_m, double t_off_s, double* fraction) {
  if (!fraction) return invalid("vs_stored_fraction: null output");
  return guarded([&] {
    SequenceParams p;
    p.sigma_probe = sigma_probe_s;
    p.t_peak = t_peak_s;
    p.group_velocity = group_velocity_m_per_s;
    p.cell_length = cell_length_m;
    p.t_off = t_off_s;
    p.t_on = t_off_s;
    *fraction = stored_fraction(p);
  });
}

vs_status vs_visibility_sweep(const vs_target* t, const double* phases, size_t n_phases,
                              double diffusion, double decay, const double* taus_s, size_t n_taus,
                              double* visibility_out) {
  if (!t || !taus_s || !visibility_out) return invalid("vs_visibility_sweep: null argument");
  if (n_taus == 0) return invalid("vs_visibility_sweep: empty tau list");
  return guarded([&] {
    std::vector<double> ph = phases_or_default(t->target, phases, n_phases);
    std::vector<double> taus(taus_s, taus_s + n_taus);
    VisibilityCurve curve = sweep_visibility(t->target, ph, MediumParams{diffusion, decay}, taus);
    for (std::size_t i = 0; i < curve.points.size(); ++i) visibility_out[i] = curve.points[i].visibility;
  });
}

vs_status vs_fit(const vs_target* t, const double* phases, size_t n_phases, const double* taus_s,
                 const double* visibility, size_t n_points, double diffusion, double decay,
                 const vs_fit_options* options, vs_fit_result* result) {
  if (!t || !taus_s || !visibility || !options || !result) return invalid("vs_fit: null argument");
  return guarded([&] {
    VisibilityCurve curve;
    for (std::size_t i = 0; i < n_points; ++i)
      curve.points.push_back({taus_s[i], visibility[i]});

    TargetSpec spec = t->spec;
    spec.region_phases = phases_or_default(t->target, phases, n_phases);

    FitSpec what;
    what.fit_diffusion = options->fit_diffusion != 0;
    what.fit_phase_error = options->fit_phase_error != 0;
    what.diffusion_lo = options->diffusion_lo;
    what.diffusion_hi = options->diffusion_hi;
    what.phase_error_lo = options->phase_error_lo;
    what.phase_error_hi = options->phase_error_hi;

    FitResult fit = fit_parameters(curve, spec, t->grid, MediumParams{diffusion, decay}, what);
    result->diffusion = fit.diffusion;
    result->phase_error = fit.phase_error;
    result->residual_norm = fit.residual_norm;
    result->iterations = fit.iterations;
    result->converged = fit.converged ? 1 : 0;
  });
}

vs_status vs_design_phases(const vs_target* t, double diffusion, double decay, double tau_s,
                           double* phases_out, double* objective_out, int* conflicts_out) {
  if (!t || !phases_out) return invalid("vs_design_phases: null argument");
  return guarded([&] {
    MediumParams medium{diffusion, decay};
    double radius = 3.0 * blur_sigma(medium, tau_s);
    AdjacencyGraph graph = build_adjacency(t->target.labels, t->grid, radius);
    PhaseAssignment refined = refine_phases(t->target, medium, tau_s, assign_phases_two_color(graph));
    for (std::size_t i = 0; i < refined.phases.size(); ++i) phases_out[i] = refined.phases[i];
    if (objective_out) *objective_out = refined.objective;
    if (conflicts_out) *conflicts_out = refined.conflicts;
  });
}

vs_status vs_config_default(vs_config** out) {
  if (!out) return invalid("vs_config_default: null output");
  return guarded([&] { *out = new vs_config{RunConfig{}}; });
}

vs_status vs_config_parse(const char* text, vs_config** out) {
  if (!text || !out) return invalid("vs_config_parse: null argument");
  return guarded([&] { *out = new vs_config{parse_config(text)}; });
}

vs_status vs_config_set(vs_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) return invalid("vs_config_set: null argument");
  return guarded([&] {
    // Round-trips through the text form so one code path owns key handling
    // and validation.
    std::string text = serialize_config(cfg->config);
    std::string prefix = std::string(key) + " = ";
    std::string rebuilt;
    bool replaced = false;
    for (const std::string& line : split(text, '\n')) {
      if (line.empty()) continue;
      if (line.rfind(prefix, 0) == 0) {
        rebuilt += prefix + value + "\n";
        replaced = true;
      } else {
        rebuilt += line + "\n";
      }
    }
    if (!replaced) rebuilt += prefix + value + "\n";  // unknown keys fail in parse below
    cfg->config = parse_config(rebuilt);
  });
}

vs_status vs_config_serialize(const vs_config* cfg, char** text) {
  if (!cfg || !text) return invalid("vs_config_serialize: null argument");
  return guarded([&] {
    std::string s = serialize_config(cfg->config);
    char* buf = new char[s.size() + 1];
    std::memcpy(buf, s.c_str(), s.size() + 1);
    *text = buf;
  });
}

void vs_string_free(char* text) { delete[] text; }

void vs_config_destroy(vs_config* cfg) { delete cfg; }

vs_status vs_run(const vs_config* cfg, const char* verb) {
  if (!cfg || !verb) return invalid("vs_run: null argument");
  return guarded([&] { run_command(verb, cfg->config); });
}

}  // extern "C"
