#include "core/runner.hpp"

#include <chrono>
#include <filesystem>
#include <utility>

#include "core/checksum.hpp"
#include "core/image_io.hpp"
#include "core/phase_design.hpp"
#include "core/text.hpp"
#include "core/version.hpp"

namespace vaporstore {

namespace {

class RunContext {
 public:
  RunContext(const RunConfig& cfg, std::string verb) : cfg_(cfg), verb_(std::move(verb)) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) fail(ErrorCode::io, "cannot create output directory '" + cfg.out_dir + "': " + ec.message());
    started_ = std::chrono::steady_clock::now();
  }

  std::string path(const std::string& name) const { return cfg_.out_dir + "/" + name; }

  void put_text(const std::string& name, const std::string& content) {
    write_file_atomic(path(name), content);
    record(name, content);
  }

  void put_image(const std::string& name, const Image& img) {
    write_image(img, path(name));
    record(name, read_file(path(name)));
    record(name + ".scale", read_file(path(name) + ".scale"));
  }

  void put_curve(const std::string& name, const VisibilityCurve& curve) {
    write_curve_csv(curve, path(name));
    record(name, read_file(path(name)));
  }

  void put_trace(const std::string& name, const TimeTrace& trace) {
    write_trace_csv(trace, path(name));
    record(name, read_file(path(name)));
  }

  void put_phases(const std::string& name, const std::vector<double>& phases) {
    write_phases_csv(phases, path(name));
    record(name, read_file(path(name)));
  }

  void finish() {
    auto elapsed = std::chrono::steady_clock::now() - started_;
    long long ms = std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
    std::string m;
    m += "# run manifest\n";
    m += "version = " + std::string(kVersion) + "\n";
    m += "verb = " + verb_ + "\n";
    m += "wall_ms = " + std::to_string(ms) + "\n";
    m += "outputs = " + std::to_string(outputs_.size()) + "\n";
    m += "\n[config]\n";
    m += serialize_config(cfg_);
    m += "\n[outputs]\n";
    for (const auto& [name, hash] : outputs_) m += name + " fnv1a64 " + hash + "\n";
    write_file_atomic(path("manifest.txt"), m);
  }

 private:
  void record(const std::string& name, const std::string& content) {
    outputs_.emplace_back(name, fnv1a64_hex(content.data(), content.size()));
  }

  const RunConfig& cfg_;
  std::string verb_;
  std::chrono::steady_clock::time_point started_;
  std::vector<std::pair<std::string, std::string>> outputs_;
};

PhaseAssignment design_for(const Target& target, const RunConfig& cfg) {
  double tau_design = cfg.taus.back();
  double radius = 3.0 * blur_sigma(cfg.medium, tau_design);
  AdjacencyGraph graph = build_adjacency(target.labels, cfg.grid, radius);
  PhaseAssignment start = assign_phases_two_color(graph);
  return refine_phases(target, cfg.medium, tau_design, start);
}

std::vector<double> resolve_phases(const Target& target, const RunConfig& cfg) {
  if (cfg.design) return design_for(target, cfg).phases;
  if (!cfg.target.region_phases.empty()) {
    if (static_cast<int>(cfg.target.region_phases.size()) != target.labels.region_count)
      fail(ErrorCode::config, "phases_rad has " + std::to_string(cfg.target.region_phases.size()) +
                                  " entries but the target has " +
                                  std::to_string(target.labels.region_count) + " regions");
    return cfg.target.region_phases;
  }
  return std::vector<double>(target.labels.region_count, 0.0);
}

std::string tau_tag(double tau) { return format_double(tau * 1e6, 9); }

void run_simulate(const RunConfig& cfg, RunContext& ctx) {
  Target target = make_target(cfg.target, cfg.grid);
  std::vector<double> phases = resolve_phases(target, cfg);
  require_padding(cfg.grid, label_bbox(target.labels), blur_sigma(cfg.medium, cfg.taus.back()));
  ComplexField start = apply_region_phases(target.field, target.labels, phases);

  ctx.put_image("target.pgm", intensity(start));
  for (double tau : cfg.taus) {
    ComplexField snapshot = propagate_storage(start, cfg.medium, tau);
    ctx.put_image("retrieved_tau_" + tau_tag(tau) + "us.pgm", intensity(snapshot));
  }
  if (cfg.design) ctx.put_phases("phase_assignment.csv", phases);
}

void run_sweep(const RunConfig& cfg, RunContext& ctx) {
  Target target = make_target(cfg.target, cfg.grid);
  std::vector<std::pair<std::string, std::vector<double>>> patterns;
  if (cfg.design) {
    patterns.emplace_back("designed", design_for(target, cfg).phases);
  } else if (!cfg.target.region_phases.empty()) {
    patterns.emplace_back("custom", resolve_phases(target, cfg));
  } else {
    patterns.emplace_back("constant", std::vector<double>(target.labels.region_count, 0.0));
    double radius = 3.0 * blur_sigma(cfg.medium, cfg.taus.back());
    AdjacencyGraph graph = build_adjacency(target.labels, cfg.grid, radius);
    patterns.emplace_back("shifted", assign_phases_two_color(graph).phases);
  }
  for (const auto& [name, phases] : patterns) {
    VisibilityCurve curve = sweep_visibility(target, phases, cfg.medium, cfg.taus);
    ctx.put_curve("visibility_" + name + ".csv", curve);
  }
}

void run_fit(const RunConfig& cfg, RunContext& ctx) {
  if (cfg.fit.csv_path.empty()) fail(ErrorCode::config, "fit requires fit_csv to point at a curve file");
  VisibilityCurve measured = read_curve_csv(cfg.fit.csv_path);

  FitSpec spec;
  spec.fit_diffusion = cfg.fit.fit_diffusion;
  spec.fit_phase_error = cfg.fit.fit_phase_error;
  spec.diffusion_lo = cfg.fit.diffusion_lo;
  spec.diffusion_hi = cfg.fit.diffusion_hi;
  spec.phase_error_lo = cfg.fit.phase_error_lo;
  spec.phase_error_hi = cfg.fit.phase_error_hi;

  FitResult result = fit_parameters(measured, cfg.target, cfg.grid, cfg.medium, spec);

  std::string out;
  out += "converged = " + std::string(result.converged ? "true" : "false") + "\n";
  out += "iterations = " + std::to_string(result.iterations) + "\n";
  out += "residual_norm = " + format_double(result.residual_norm, 9) + "\n";
  out += "D_cm2_per_s = " + format_double(result.diffusion * 1e4, 9) + "\n";
  out += "epsilon_rad = " + format_double(result.phase_error, 9) + "\n";
  ctx.put_text("fit_result.txt", out);
}

void run_design(const RunConfig& cfg, RunContext& ctx) {
  Target target = make_target(cfg.target, cfg.grid);
  require_padding(cfg.grid, label_bbox(target.labels), blur_sigma(cfg.medium, cfg.taus.back()));
  PhaseAssignment assignment = design_for(target, cfg);

  ctx.put_phases("phase_assignment.csv", assignment.phases);
  std::string out;
  out += "tau_design_us = " + tau_tag(cfg.taus.back()) + "\n";
  out += "objective = " + format_double(assignment.objective, 9) + "\n";
  out += "bipartite = " + std::string(assignment.bipartite ? "true" : "false") + "\n";
  out += "conflicts = " + std::to_string(assignment.conflicts) + "\n";
  out += "cycles = " + std::to_string(assignment.objective_history.empty()
                                          ? 0
                                          : assignment.objective_history.size() - 1) + "\n";
  ctx.put_text("design_result.txt", out);
}

void run_traces(const RunConfig& cfg, RunContext& ctx) {
  TimeTrace trace = simulate_traces(cfg.sequence, cfg.medium, cfg.trace_dt);
  ctx.put_trace("traces.csv", trace);
}

}  // namespace

void run_command(const std::string& verb, const RunConfig& cfg) {
  validate_config(cfg);
  RunContext ctx(cfg, verb);
  if (verb == "simulate")
    run_simulate(cfg, ctx);
  else if (verb == "sweep")
    run_sweep(cfg, ctx);
  else if (verb == "fit")
    run_fit(cfg, ctx);
  else if (verb == "design")
    run_design(cfg, ctx);
  else if (verb == "traces")
    run_traces(cfg, ctx);
  else
    fail(ErrorCode::config, "unknown verb '" + verb + "' (expected simulate, sweep, fit, design or traces)");
  ctx.finish();
}

}  // namespace vaporstore
