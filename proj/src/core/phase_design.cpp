#include "core/phase_design.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

namespace vaporstore {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

double wrap_phase(double p) {
  double w = std::fmod(p, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  return w;
}

struct PixelList {
  std::vector<int> ix, iy;
};

// Closest approach between two regions is always realized by pixels on the
// region boundary, so only those are kept for the distance scan.
std::vector<PixelList> boundary_pixels(const LabelMap& labels) {
  std::vector<PixelList> out(static_cast<std::size_t>(labels.region_count) + 1);
  for (int iy = 0; iy < labels.ny; ++iy)
    for (int ix = 0; ix < labels.nx; ++ix) {
      int label = labels.at(ix, iy);
      if (label <= 0) continue;
      bool edge = ix == 0 || ix == labels.nx - 1 || iy == 0 || iy == labels.ny - 1 ||
                  labels.at(ix - 1, iy) != label || labels.at(ix + 1, iy) != label ||
                  labels.at(ix, iy - 1) != label || labels.at(ix, iy + 1) != label;
      if (edge) {
        out[label].ix.push_back(ix);
        out[label].iy.push_back(iy);
      }
    }
  return out;
}

bool within_radius(const PixelList& a, const PixelList& b, double radius_px) {
  double r2 = radius_px * radius_px;
  for (std::size_t i = 0; i < a.ix.size(); ++i)
    for (std::size_t j = 0; j < b.ix.size(); ++j) {
      double dx = a.ix[i] - b.ix[j];
      double dy = a.iy[i] - b.iy[j];
      if (dx * dx + dy * dy <= r2) return true;
    }
  return false;
}

}  // namespace

bool AdjacencyGraph::has_edge(int a, int b) const {
  if (a > b) std::swap(a, b);
  return std::find(edges.begin(), edges.end(), std::make_pair(a, b)) != edges.end();
}

AdjacencyGraph build_adjacency(const LabelMap& labels, const GridSpec& grid, double radius) {
  grid.validate();
  if (labels.nx != grid.nx || labels.ny != grid.ny)
    fail(ErrorCode::shape, "label map does not match the grid");
  if (!(radius > 0.0) || !std::isfinite(radius))
    fail(ErrorCode::domain, "adjacency radius must be positive");

  std::vector<PixelList> boundary = boundary_pixels(labels);
  AdjacencyGraph graph;
  graph.node_count = labels.region_count;
  double radius_px = radius / grid.pitch;
  for (int a = 1; a <= labels.region_count; ++a)
    for (int b = a + 1; b <= labels.region_count; ++b)
      if (within_radius(boundary[a], boundary[b], radius_px)) graph.edges.emplace_back(a, b);
  return graph;
}

PhaseAssignment assign_phases_two_color(const AdjacencyGraph& graph) {
  constexpr double kPi = 3.14159265358979323846;
  int n = graph.node_count;
  std::vector<std::vector<int>> nbr(static_cast<std::size_t>(n) + 1);
  for (auto [a, b] : graph.edges) {
    nbr[a].push_back(b);
    nbr[b].push_back(a);
  }
  for (auto& list : nbr) std::sort(list.begin(), list.end());

  std::vector<int> color(static_cast<std::size_t>(n) + 1, -1);
  bool bipartite = true;
  for (int root = 1; root <= n; ++root) {
    if (color[root] != -1) continue;
    color[root] = 0;
    std::deque<int> queue{root};
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int v : nbr[u]) {
        if (color[v] == -1) {
          color[v] = 1 - color[u];
          queue.push_back(v);
        } else if (color[v] == color[u]) {
          bipartite = false;
        }
      }
    }
  }

  PhaseAssignment out;
  out.bipartite = bipartite;
  if (!bipartite) {
    // Greedy recolouring in label order, each node taking the phase that
    // clashes with fewer already-coloured neighbours. Ties go to 0.
    std::fill(color.begin(), color.end(), -1);
    for (int u = 1; u <= n; ++u) {
      int clash0 = 0, clash1 = 0;
      for (int v : nbr[u]) {
        if (color[v] == 0) ++clash0;
        if (color[v] == 1) ++clash1;
      }
      color[u] = clash1 < clash0 ? 1 : 0;
    }
    for (auto [a, b] : graph.edges)
      if (color[a] == color[b]) ++out.conflicts;
  }

  out.phases.resize(static_cast<std::size_t>(n));
  for (int u = 1; u <= n; ++u) out.phases[u - 1] = color[u] == 1 ? kPi : 0.0;
  return out;
}

namespace {

// Precomputes everything the objective needs so that trying a new phase vector
// costs only a few complex sums per sampled pixel: each region is blurred once,
// and any phase assignment is then a linear combination of those fields.
class DesignEvaluator {
 public:
  DesignEvaluator(const Target& target, const MediumParams& medium, double tau, double radius)
      : labels_(target.labels) {
    medium.validate();
    if (!(tau >= 0.0) || !std::isfinite(tau)) fail(ErrorCode::domain, "design duration must be >= 0");
    if (radius <= 0.0) radius = 3.0 * blur_sigma(medium, tau);
    graph_ = build_adjacency(labels_, target.field.grid, radius);

    int n = labels_.region_count;
    for (int r = 1; r <= n; ++r) {
      ComplexField part = make_field(target.field.grid);
      for (std::size_t i = 0; i < part.values.size(); ++i)
        if (labels_.values[i] == r) part.values[i] = target.field.values[i];
      blurred_.push_back(tau == 0.0 ? part : propagate_storage(part, medium, tau));
    }

    region_pixels_.resize(static_cast<std::size_t>(n));
    std::vector<long long> sx(static_cast<std::size_t>(n) + 1, 0), sy(sx), count(sx);
    for (int iy = 0; iy < labels_.ny; ++iy)
      for (int ix = 0; ix < labels_.nx; ++ix) {
        int label = labels_.at(ix, iy);
        if (label <= 0) continue;
        region_pixels_[label - 1].push_back(static_cast<std::size_t>(iy) * labels_.nx + ix);
        sx[label] += ix;
        sy[label] += iy;
        ++count[label];
      }

    for (auto [a, b] : graph_.edges) {
      std::vector<std::size_t> gap = gap_samples(a, b, sx, sy, count);
      if (!gap.empty()) gapped_edges_.push_back({a, b, std::move(gap)});
    }
  }

  int region_count() const { return labels_.region_count; }
  const AdjacencyGraph& graph() const { return graph_; }

  double objective(const std::vector<double>& phases) const {
    std::vector<cplx> factors(phases.size());
    for (std::size_t k = 0; k < phases.size(); ++k)
      factors[k] = cplx(std::cos(phases[k]), std::sin(phases[k]));

    auto combined_norm = [&](std::size_t pixel) {
      cplx acc = 0.0;
      for (std::size_t k = 0; k < factors.size(); ++k) acc += factors[k] * blurred_[k].values[pixel];
      return std::norm(acc);
    };

    std::vector<double> peak(phases.size(), 0.0);
    for (std::size_t k = 0; k < phases.size(); ++k)
      for (std::size_t pixel : region_pixels_[k]) peak[k] = std::max(peak[k], combined_norm(pixel));

    double worst = 1.0;
    for (const GappedEdge& edge : gapped_edges_) {
      double trough = combined_norm(edge.gap[0]);
      for (std::size_t pixel : edge.gap) trough = std::min(trough, combined_norm(pixel));
      double pk = 0.5 * (peak[edge.a - 1] + peak[edge.b - 1]);
      double denom = pk + trough;
      double v = denom > 0.0 ? std::clamp((pk - trough) / denom, 0.0, 1.0) : 0.0;
      worst = std::min(worst, v);
    }
    return worst;
  }

 private:
  struct GappedEdge {
    int a, b;
    std::vector<std::size_t> gap;
  };

  // Background pixels along the centroid-to-centroid segment, strictly between
  // the last sample inside region a and the first sample inside region b.
  std::vector<std::size_t> gap_samples(int a, int b, const std::vector<long long>& sx,
                                       const std::vector<long long>& sy,
                                       const std::vector<long long>& count) const {
    double ax = static_cast<double>(sx[a]) / count[a], ay = static_cast<double>(sy[a]) / count[a];
    double bx = static_cast<double>(sx[b]) / count[b], by = static_cast<double>(sy[b]) / count[b];
    int steps = static_cast<int>(std::lround(std::max(std::abs(bx - ax), std::abs(by - ay))));
    if (steps < 1) return {};

    std::vector<int> label_at(static_cast<std::size_t>(steps) + 1);
    std::vector<std::size_t> pixel_at(static_cast<std::size_t>(steps) + 1);
    for (int s = 0; s <= steps; ++s) {
      double t = static_cast<double>(s) / steps;
      int ix = static_cast<int>(std::lround(ax + t * (bx - ax)));
      int iy = static_cast<int>(std::lround(ay + t * (by - ay)));
      ix = std::clamp(ix, 0, labels_.nx - 1);
      iy = std::clamp(iy, 0, labels_.ny - 1);
      label_at[s] = labels_.at(ix, iy);
      pixel_at[s] = static_cast<std::size_t>(iy) * labels_.nx + ix;
    }

    int leave_a = -1, enter_b = steps + 1;
    for (int s = 0; s <= steps; ++s)
      if (label_at[s] == a) leave_a = s;
    for (int s = steps; s >= 0; --s)
      if (label_at[s] == b) enter_b = s;

    std::vector<std::size_t> gap;
    for (int s = leave_a + 1; s < enter_b; ++s)
      if (label_at[s] == 0) gap.push_back(pixel_at[s]);
    return gap;
  }

  LabelMap labels_;
  AdjacencyGraph graph_;
  std::vector<ComplexField> blurred_;
  std::vector<std::vector<std::size_t>> region_pixels_;
  std::vector<GappedEdge> gapped_edges_;
};

}  // namespace

double design_objective(const Target& target, const MediumParams& medium, double tau,
                        const std::vector<double>& phases, double adjacency_radius) {
  if (static_cast<int>(phases.size()) != target.labels.region_count)
    fail(ErrorCode::shape, "phase count does not match the target regions");
  DesignEvaluator eval(target, medium, tau, adjacency_radius);
  return eval.objective(phases);
}

PhaseAssignment refine_phases(const Target& target, const MediumParams& medium, double tau,
                              const PhaseAssignment& initial) {
  if (static_cast<int>(initial.phases.size()) != target.labels.region_count)
    fail(ErrorCode::shape, "phase count does not match the target regions");

  DesignEvaluator eval(target, medium, tau, 0.0);
  std::vector<double> phases(initial.phases.size());
  for (std::size_t k = 0; k < phases.size(); ++k) phases[k] = wrap_phase(initial.phases[k]);

  PhaseAssignment out;
  out.conflicts = initial.conflicts;
  out.bipartite = initial.bipartite;

  constexpr int kScanPoints = 32;
  constexpr double kStep = kTwoPi / kScanPoints;
  constexpr double kCycleTolerance = 1e-4;
  constexpr int kMaxCycles = 50;

  double current = eval.objective(phases);
  out.objective_history.push_back(current);

  for (int cycle = 0; cycle < kMaxCycles && phases.size() > 1; ++cycle) {
    double at_cycle_start = current;
    for (std::size_t k = 1; k < phases.size(); ++k) {  // region 1 is the gauge pin
      double best_phase = phases[k];
      double best_value = current;

      std::vector<double> scan(kScanPoints);
      for (int c = 0; c < kScanPoints; ++c) {
        phases[k] = c * kStep;
        scan[c] = eval.objective(phases);
        if (scan[c] > best_value) {
          best_value = scan[c];
          best_phase = phases[k];
        }
      }

      // Parabolic touch-up through the best scan point and its neighbours.
      int c0 = static_cast<int>(std::max_element(scan.begin(), scan.end()) - scan.begin());
      double fm = scan[(c0 + kScanPoints - 1) % kScanPoints];
      double f0 = scan[c0];
      double fp = scan[(c0 + 1) % kScanPoints];
      double denom = fm + fp - 2.0 * f0;
      if (denom < 0.0) {
        double offset = std::clamp(0.5 * kStep * (fm - fp) / denom, -kStep, kStep);
        phases[k] = wrap_phase(c0 * kStep + offset);
        double refined = eval.objective(phases);
        if (refined > best_value) {
          best_value = refined;
          best_phase = phases[k];
        }
      }

      phases[k] = best_phase;
      current = best_value;
    }
    out.objective_history.push_back(current);
    if (current - at_cycle_start < kCycleTolerance) break;
  }

  out.phases = phases;
  out.objective = current;
  return out;
}

}  // namespace vaporstore
