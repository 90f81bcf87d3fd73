#pragma once

#include <vector>

#include "core/propagation.hpp"

namespace vaporstore {

struct SequenceParams {
  double sigma_probe = 5e-6;      // probe pulse RMS width, s
  double t_peak = 15e-6;          // input pulse peak time, s
  double group_velocity = 8000;   // m/s
  double cell_length = 0.05;      // m
  double t_off = 21.25e-6;        // control switch-off, s
  double t_on = 46.25e-6;         // control switch-on, s
  void validate() const;
};

enum class TraceSegment { leaked, stored, restored };
const char* segment_name(TraceSegment);

/// Detector traces sampled on a uniform time base. input is the probe power at
/// the cell entrance, output the power at the exit, segment labels the output.
struct TimeTrace {
  std::vector<double> time;
  std::vector<double> input;
  std::vector<double> output;
  std::vector<TraceSegment> segment;
};

/// Slow-light group delay through the cell: length / group velocity.
double group_delay(const SequenceParams&);

/// Fraction of the delayed pulse energy still inside the cell at t_off.
double stored_fraction(const SequenceParams&);

TimeTrace simulate_traces(const SequenceParams&, const MediumParams&, double sample_dt);

}  // namespace vaporstore
