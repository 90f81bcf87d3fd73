#include "core/nelder_mead.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace vaporstore {

namespace {

void clamp_into(std::vector<double>& x, const std::vector<double>& lo, const std::vector<double>& hi) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
}

}  // namespace

MinimizeResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                           const std::vector<double>& lo, const std::vector<double>& hi,
                           const MinimizeOptions& options) {
  std::size_t dim = lo.size();
  if (dim == 0) fail(ErrorCode::domain, "minimizer needs at least one free parameter");
  if (hi.size() != dim) fail(ErrorCode::shape, "bound arrays differ in length");
  for (std::size_t i = 0; i < dim; ++i) {
    if (!std::isfinite(lo[i]) || !std::isfinite(hi[i]) || !(lo[i] < hi[i]))
      fail(ErrorCode::domain, "parameter bounds must be finite with lo < hi");
  }

  // Simplex seeded at the box center with one step along each axis.
  std::vector<std::vector<double>> pts;
  std::vector<double> center(dim);
  for (std::size_t i = 0; i < dim; ++i) center[i] = 0.5 * (lo[i] + hi[i]);
  pts.push_back(center);
  for (std::size_t i = 0; i < dim; ++i) {
    std::vector<double> p = center;
    p[i] += options.init_step * (hi[i] - lo[i]);
    clamp_into(p, lo, hi);
    pts.push_back(p);
  }

  std::vector<double> fv(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) fv[i] = objective(pts[i]);

  const double alpha = 1.0, gamma = 2.0, rho = 0.5, shrink = 0.5;
  MinimizeResult result;
  std::vector<std::size_t> order(pts.size());

  int it = 0;
  for (; it < options.max_iterations; ++it) {
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });

    double best = fv[order.front()];
    double worst = fv[order.back()];
    if (worst - best <= options.rel_tolerance * (std::abs(best) + 1e-12)) {
      result.converged = true;
      break;
    }

    std::size_t iw = order.back();
    std::vector<double> centroid(dim, 0.0);
    for (std::size_t k = 0; k + 1 < order.size(); ++k)
      for (std::size_t i = 0; i < dim; ++i) centroid[i] += pts[order[k]][i];
    for (double& c : centroid) c /= static_cast<double>(dim);

    auto towards = [&](double coeff) {
      std::vector<double> p(dim);
      for (std::size_t i = 0; i < dim; ++i) p[i] = centroid[i] + coeff * (centroid[i] - pts[iw][i]);
      clamp_into(p, lo, hi);
      return p;
    };

    std::vector<double> reflected = towards(alpha);
    double fr = objective(reflected);
    double second_worst = fv[order[order.size() - 2]];

    if (fr < best) {
      std::vector<double> expanded = towards(gamma);
      double fe = objective(expanded);
      if (fe < fr) {
        pts[iw] = expanded;
        fv[iw] = fe;
      } else {
        pts[iw] = reflected;
        fv[iw] = fr;
      }
    } else if (fr < second_worst) {
      pts[iw] = reflected;
      fv[iw] = fr;
    } else {
      std::vector<double> contracted = towards(-rho);
      double fc = objective(contracted);
      if (fc < fv[iw]) {
        pts[iw] = contracted;
        fv[iw] = fc;
      } else {
        std::size_t ib = order.front();
        for (std::size_t k = 0; k < pts.size(); ++k) {
          if (k == ib) continue;
          for (std::size_t i = 0; i < dim; ++i)
            pts[k][i] = pts[ib][i] + shrink * (pts[k][i] - pts[ib][i]);
          fv[k] = objective(pts[k]);
        }
      }
    }
  }

  std::size_t ib = 0;
  for (std::size_t i = 1; i < fv.size(); ++i)
    if (fv[i] < fv[ib]) ib = i;
  result.x = pts[ib];
  result.fx = fv[ib];
  result.iterations = it;
  return result;
}

}  // namespace vaporstore
