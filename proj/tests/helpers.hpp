#pragma once

#include <optional>
#include <random>

#include "core/error.hpp"
#include "core/grid.hpp"

namespace testutil {

using vaporstore::ComplexField;
using vaporstore::cplx;
using vaporstore::GridSpec;

inline ComplexField random_field(const GridSpec& grid, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  ComplexField f = vaporstore::make_field(grid);
  for (cplx& v : f.values) {
    double re = dist(rng);
    double im = dist(rng);
    v = cplx(re, im);
  }
  return f;
}

inline double max_abs_diff(const ComplexField& a, const ComplexField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

template <typename Fn>
std::optional<vaporstore::ErrorCode> error_code_of(Fn&& fn) {
  try {
    fn();
  } catch (const vaporstore::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace testutil
