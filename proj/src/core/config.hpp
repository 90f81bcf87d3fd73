#pragma once

#include <string>
#include <vector>

#include "core/analysis.hpp"
#include "core/sequence.hpp"
#include "core/targets.hpp"

namespace vaporstore {

struct FitConfig {
  std::string csv_path;
  bool fit_diffusion = true;
  bool fit_phase_error = false;
  double diffusion_lo = 2e-4;   // m^2/s
  double diffusion_hi = 3e-3;
  double phase_error_lo = 0.0;  // rad
  double phase_error_hi = 0.5;
};

/// One run's worth of settings. Everything is SI internally; the key=value
/// text format carries the unit in the key name and conversion happens only
/// at the parse/serialize boundary.
struct RunConfig {
  GridSpec grid{512, 512, 10e-6};
  MediumParams medium{1e-3, 14000.0};
  TargetSpec target;
  bool design = false;
  std::vector<double> taus{2e-6, 10e-6, 20e-6, 30e-6};
  SequenceParams sequence;
  double trace_dt = 5e-8;
  std::string out_dir = "out";
  FitConfig fit;
};

/// Flat key=value text, '#' comments, case-sensitive keys. Unknown or
/// duplicate keys are rejected by name. Unset keys keep their defaults.
RunConfig parse_config(const std::string& text);
std::string serialize_config(const RunConfig&);
void validate_config(const RunConfig&);

}  // namespace vaporstore
