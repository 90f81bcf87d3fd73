#pragma once

#include <string>

#include "core/config.hpp"

namespace vaporstore {

/// Executes one verb (simulate, sweep, fit, design, traces), writing all
/// artifacts plus a checksummed manifest into the configured output directory.
void run_command(const std::string& verb, const RunConfig&);

}  // namespace vaporstore
