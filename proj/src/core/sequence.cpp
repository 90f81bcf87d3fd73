#include "core/sequence.hpp"

#include <cmath>

namespace vaporstore {

void SequenceParams::validate() const {
  if (!(sigma_probe > 0.0) || !std::isfinite(sigma_probe))
    fail(ErrorCode::domain, "probe pulse width must be positive");
  if (!(group_velocity > 0.0) || !std::isfinite(group_velocity))
    fail(ErrorCode::domain, "group velocity must be positive");
  if (!(cell_length >= 0.0) || !std::isfinite(cell_length))
    fail(ErrorCode::domain, "cell length must be >= 0");
  if (!std::isfinite(t_peak) || !std::isfinite(t_off) || !std::isfinite(t_on))
    fail(ErrorCode::domain, "sequence times must be finite");
  if (t_on < t_off) fail(ErrorCode::domain, "control switch-on must not precede switch-off");
}

const char* segment_name(TraceSegment s) {
  switch (s) {
    case TraceSegment::leaked: return "leaked";
    case TraceSegment::stored: return "stored";
    case TraceSegment::restored: return "restored";
  }
  return "?";
}

double group_delay(const SequenceParams& p) {
  p.validate();
  return p.cell_length / p.group_velocity;
}

double stored_fraction(const SequenceParams& p) {
  p.validate();
  double z = (p.t_off - p.t_peak - group_delay(p)) / (p.sigma_probe * std::sqrt(2.0));
  return 0.5 * std::erfc(z);
}

TimeTrace simulate_traces(const SequenceParams& p, const MediumParams& medium, double sample_dt) {
  p.validate();
  medium.validate();
  if (!(sample_dt > 0.0) || !std::isfinite(sample_dt))
    fail(ErrorCode::domain, "trace sample step must be positive");

  double delay = group_delay(p);
  double storage = p.t_on - p.t_off;
  double span = 6.0 * p.sigma_probe;
  double t_start = std::max(0.0, p.t_peak - span);
  double t_end = p.t_peak + delay + storage + span;

  auto pulse = [&](double t) {
    double u = (t - p.t_peak) / p.sigma_probe;
    return std::exp(-0.5 * u * u);
  };
  double restored_scale = std::exp(-medium.decay_rate * storage);

  TimeTrace trace;
  std::size_t n = static_cast<std::size_t>(std::floor((t_end - t_start) / sample_dt)) + 1;
  trace.time.reserve(n);
  trace.input.reserve(n);
  trace.output.reserve(n);
  trace.segment.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double t = t_start + i * sample_dt;
    trace.time.push_back(t);
    trace.input.push_back(pulse(t));
    if (t < p.t_off) {
      trace.output.push_back(pulse(t - delay));
      trace.segment.push_back(TraceSegment::leaked);
    } else if (t < p.t_on) {
      trace.output.push_back(0.0);
      trace.segment.push_back(TraceSegment::stored);
    } else {
      trace.output.push_back(restored_scale * pulse(t - delay - storage));
      trace.segment.push_back(TraceSegment::restored);
    }
  }
  return trace;
}

}  // namespace vaporstore
