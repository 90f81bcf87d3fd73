#pragma once

#include <string>

#include "core/analysis.hpp"
#include "core/grid.hpp"
#include "core/sequence.hpp"

namespace vaporstore {

/// 16-bit big-endian binary PGM, maxval 65535, rows written top-down (largest
/// y first). The physical scale goes to a `<path>.scale` sidecar holding the
/// min and max that map to 0 and 65535.
void write_image(const Image&, const std::string& path);

/// Reads the PGM and, when the sidecar is present, undoes the quantization
/// back to physical values; without it the raw counts are returned.
Image read_image(const std::string& path);

void write_curve_csv(const VisibilityCurve&, const std::string& path);
VisibilityCurve read_curve_csv(const std::string& path);

void write_trace_csv(const TimeTrace&, const std::string& path);
void write_phases_csv(const std::vector<double>& phases, const std::string& path);

/// Whole-file write through a temp name plus rename, so readers never observe
/// a partially written file.
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace vaporstore
