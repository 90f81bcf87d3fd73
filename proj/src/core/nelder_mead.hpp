#pragma once

#include <functional>
#include <vector>

namespace vaporstore {

struct MinimizeOptions {
  int max_iterations = 500;
  double rel_tolerance = 1e-6;  // on the objective spread across the simplex
  double init_step = 0.25;      // first simplex step as a fraction of the bound width
};

struct MinimizeResult {
  std::vector<double> x;
  double fx = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Derivative-free Nelder-Mead search box-constrained to [lo, hi] per axis.
/// Deterministic: the initial simplex is built from the bounds, no randomness.
MinimizeResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                           const std::vector<double>& lo, const std::vector<double>& hi,
                           const MinimizeOptions& options = {});

}  // namespace vaporstore
