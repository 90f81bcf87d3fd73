#include "core/config.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <set>

#include "core/text.hpp"

namespace vaporstore {

namespace {

constexpr double kMicro = 1e-6;
constexpr double kCm2 = 1e-4;   // cm^2/s to m^2/s
constexpr double kCm = 1e-2;

double parse_double(const std::string& key, const std::string& value) {
  const char* begin = value.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(v))
    fail(ErrorCode::config, "key '" + key + "' has a malformed number: '" + value + "'");
  return v;
}

int parse_int(const std::string& key, const std::string& value) {
  const char* begin = value.c_str();
  char* end = nullptr;
  long v = std::strtol(begin, &end, 10);
  if (end == begin || *end != '\0')
    fail(ErrorCode::config, "key '" + key + "' has a malformed integer: '" + value + "'");
  return static_cast<int>(v);
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  fail(ErrorCode::config, "key '" + key + "' expects true or false, got '" + value + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  if (trim(value).empty()) return out;
  for (const std::string& item : split(value, ',')) out.push_back(parse_double(key, trim(item)));
  return out;
}

std::string join_list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += format_double(values[i]);
  }
  return out;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::map<std::string, std::string> kv;
  std::set<std::string> seen;

  for (const std::string& raw : split(text, '\n')) {
    std::string line = raw;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail(ErrorCode::config, "config line has no '=': '" + line + "'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(ErrorCode::config, "config line has an empty key");
    if (!seen.insert(key).second) fail(ErrorCode::config, "duplicate config key '" + key + "'");
    kv[key] = value;
  }

  auto take = [&](const char* key) -> const std::string* {
    auto it = kv.find(key);
    if (it == kv.end()) return nullptr;
    return &it->second;
  };
  std::set<std::string> handled;
  auto get = [&](const char* key) -> const std::string* {
    handled.insert(key);
    return take(key);
  };

  if (const auto* v = get("grid_nx")) cfg.grid.nx = parse_int("grid_nx", *v);
  if (const auto* v = get("grid_ny")) cfg.grid.ny = parse_int("grid_ny", *v);
  if (const auto* v = get("pitch_um")) cfg.grid.pitch = parse_double("pitch_um", *v) * kMicro;
  if (const auto* v = get("D_cm2_per_s")) cfg.medium.diffusion = parse_double("D_cm2_per_s", *v) * kCm2;
  if (const auto* v = get("Gamma_per_s")) cfg.medium.decay_rate = parse_double("Gamma_per_s", *v);

  if (const auto* v = get("target_kind")) {
    if (*v == "lines")
      cfg.target.kind = TargetKind::lines;
    else if (*v == "glyph")
      cfg.target.kind = TargetKind::glyph;
    else
      fail(ErrorCode::config, "target_kind must be 'lines' or 'glyph', got '" + *v + "'");
  }
  if (const auto* v = get("n_lines")) cfg.target.lines.n_lines = parse_int("n_lines", *v);
  if (const auto* v = get("thickness_um")) cfg.target.lines.thickness = parse_double("thickness_um", *v) * kMicro;
  if (const auto* v = get("spacing_um")) cfg.target.lines.spacing = parse_double("spacing_um", *v) * kMicro;
  if (const auto* v = get("length_um")) cfg.target.lines.length = parse_double("length_um", *v) * kMicro;
  if (const auto* v = get("glyph_char")) {
    if (v->size() != 1) fail(ErrorCode::config, "glyph_char must be a single character");
    cfg.target.glyph.glyph = (*v)[0];
  }
  if (const auto* v = get("stroke_um")) cfg.target.glyph.stroke_width = parse_double("stroke_um", *v) * kMicro;
  if (const auto* v = get("glyph_height_um")) cfg.target.glyph.height = parse_double("glyph_height_um", *v) * kMicro;
  if (const auto* v = get("phases_rad")) cfg.target.region_phases = parse_list("phases_rad", *v);
  if (const auto* v = get("design")) cfg.design = parse_bool("design", *v);

  if (const auto* v = get("taus_us")) {
    cfg.taus = parse_list("taus_us", *v);
    for (double& t : cfg.taus) t *= kMicro;
  }

  if (const auto* v = get("sigma_us")) cfg.sequence.sigma_probe = parse_double("sigma_us", *v) * kMicro;
  if (const auto* v = get("tpeak_us")) cfg.sequence.t_peak = parse_double("tpeak_us", *v) * kMicro;
  if (const auto* v = get("vg_m_per_s")) cfg.sequence.group_velocity = parse_double("vg_m_per_s", *v);
  if (const auto* v = get("L_cm")) cfg.sequence.cell_length = parse_double("L_cm", *v) * kCm;
  if (const auto* v = get("toff_us")) cfg.sequence.t_off = parse_double("toff_us", *v) * kMicro;
  if (const auto* v = get("ton_us")) cfg.sequence.t_on = parse_double("ton_us", *v) * kMicro;
  if (const auto* v = get("trace_dt_us")) cfg.trace_dt = parse_double("trace_dt_us", *v) * kMicro;

  if (const auto* v = get("out_dir")) cfg.out_dir = *v;

  if (const auto* v = get("fit_csv")) cfg.fit.csv_path = *v;
  if (const auto* v = get("fit_free")) {
    cfg.fit.fit_diffusion = false;
    cfg.fit.fit_phase_error = false;
    for (const std::string& item : split(*v, ',')) {
      std::string name = trim(item);
      if (name.empty())
        continue;
      if (name == "D")
        cfg.fit.fit_diffusion = true;
      else if (name == "epsilon")
        cfg.fit.fit_phase_error = true;
      else
        fail(ErrorCode::config, "fit_free accepts 'D' and 'epsilon', got '" + name + "'");
    }
  }
  if (const auto* v = get("fit_D_min_cm2_per_s")) cfg.fit.diffusion_lo = parse_double("fit_D_min_cm2_per_s", *v) * kCm2;
  if (const auto* v = get("fit_D_max_cm2_per_s")) cfg.fit.diffusion_hi = parse_double("fit_D_max_cm2_per_s", *v) * kCm2;
  if (const auto* v = get("fit_eps_min_rad")) cfg.fit.phase_error_lo = parse_double("fit_eps_min_rad", *v);
  if (const auto* v = get("fit_eps_max_rad")) cfg.fit.phase_error_hi = parse_double("fit_eps_max_rad", *v);

  for (const auto& [key, value] : kv)
    if (!handled.count(key)) fail(ErrorCode::config, "unknown config key '" + key + "'");

  validate_config(cfg);
  return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
  std::string out;
  auto line = [&](const std::string& key, const std::string& value) { out += key + " = " + value + "\n"; };

  line("grid_nx", std::to_string(cfg.grid.nx));
  line("grid_ny", std::to_string(cfg.grid.ny));
  line("pitch_um", format_double(cfg.grid.pitch / kMicro));
  line("D_cm2_per_s", format_double(cfg.medium.diffusion / kCm2));
  line("Gamma_per_s", format_double(cfg.medium.decay_rate));
  line("target_kind", cfg.target.kind == TargetKind::lines ? "lines" : "glyph");
  line("n_lines", std::to_string(cfg.target.lines.n_lines));
  line("thickness_um", format_double(cfg.target.lines.thickness / kMicro));
  line("spacing_um", format_double(cfg.target.lines.spacing / kMicro));
  line("length_um", format_double(cfg.target.lines.length / kMicro));
  std::string glyph(1, cfg.target.glyph.glyph);
  line("glyph_char", glyph);
  line("stroke_um", format_double(cfg.target.glyph.stroke_width / kMicro));
  line("glyph_height_um", format_double(cfg.target.glyph.height / kMicro));
  line("phases_rad", join_list(cfg.target.region_phases));
  line("design", cfg.design ? "true" : "false");
  std::vector<double> taus_us = cfg.taus;
  for (double& t : taus_us) t /= kMicro;
  line("taus_us", join_list(taus_us));
  line("sigma_us", format_double(cfg.sequence.sigma_probe / kMicro));
  line("tpeak_us", format_double(cfg.sequence.t_peak / kMicro));
  line("vg_m_per_s", format_double(cfg.sequence.group_velocity));
  line("L_cm", format_double(cfg.sequence.cell_length / kCm));
  line("toff_us", format_double(cfg.sequence.t_off / kMicro));
  line("ton_us", format_double(cfg.sequence.t_on / kMicro));
  line("trace_dt_us", format_double(cfg.trace_dt / kMicro));
  line("out_dir", cfg.out_dir);
  line("fit_csv", cfg.fit.csv_path);
  std::string free_list;
  if (cfg.fit.fit_diffusion) free_list = "D";
  if (cfg.fit.fit_phase_error) free_list += free_list.empty() ? "epsilon" : ",epsilon";
  line("fit_free", free_list);
  line("fit_D_min_cm2_per_s", format_double(cfg.fit.diffusion_lo / kCm2));
  line("fit_D_max_cm2_per_s", format_double(cfg.fit.diffusion_hi / kCm2));
  line("fit_eps_min_rad", format_double(cfg.fit.phase_error_lo));
  line("fit_eps_max_rad", format_double(cfg.fit.phase_error_hi));
  return out;
}

void validate_config(const RunConfig& cfg) {
  cfg.grid.validate();
  try {
    cfg.medium.validate();
    cfg.sequence.validate();
  } catch (const Error& e) {
    fail(ErrorCode::config, e.what());
  }
  if (cfg.taus.empty()) fail(ErrorCode::config, "taus_us must not be empty");
  for (std::size_t i = 0; i < cfg.taus.size(); ++i) {
    if (!(cfg.taus[i] >= 0.0) || !std::isfinite(cfg.taus[i]))
      fail(ErrorCode::config, "taus_us entries must be finite and >= 0");
    if (i > 0 && cfg.taus[i] <= cfg.taus[i - 1])
      fail(ErrorCode::config, "taus_us must be strictly increasing");
  }
  if (!(cfg.trace_dt > 0.0)) fail(ErrorCode::config, "trace_dt_us must be positive");
  if (cfg.out_dir.empty()) fail(ErrorCode::config, "out_dir must not be empty");
  for (double p : cfg.target.region_phases)
    if (!std::isfinite(p)) fail(ErrorCode::config, "phases_rad entries must be finite");
  if (!(cfg.fit.diffusion_lo < cfg.fit.diffusion_hi))
    fail(ErrorCode::config, "fit diffusion bounds must satisfy min < max");
  if (!(cfg.fit.phase_error_lo < cfg.fit.phase_error_hi))
    fail(ErrorCode::config, "fit epsilon bounds must satisfy min < max");
}

}  // namespace vaporstore
