#pragma once

#include <utility>
#include <vector>

#include "core/propagation.hpp"
#include "core/targets.hpp"

namespace vaporstore {

struct AdjacencyGraph {
  int node_count = 0;                      // nodes are region labels 1..node_count
  std::vector<std::pair<int, int>> edges;  // first < second
  bool has_edge(int a, int b) const;
};

/// Regions become neighbours when their closest pixel centers are within
/// `radius`. Use 3 * blur_sigma at the design duration for a radius that
/// tracks how far diffusion actually mixes light.
AdjacencyGraph build_adjacency(const LabelMap&, const GridSpec&, double radius);

struct PhaseAssignment {
  std::vector<double> phases;             // radians in [0, 2pi), one per region
  double objective = -1.0;                // worst adjacent-gap visibility; negative = not evaluated
  int conflicts = 0;                      // adjacent same-phase pairs left by the greedy fallback
  bool bipartite = true;
  std::vector<double> objective_history;  // objective after each refinement cycle
};

/// Alternating 0 / pi colouring by BFS. Falls back to a greedy colouring with a
/// conflict count when the graph is not two-colourable.
PhaseAssignment assign_phases_two_color(const AdjacencyGraph&);

/// Worst-case gap visibility over adjacent region pairs after storing for tau.
/// Pairs without a background gap between them are skipped; no pairs means 1.
/// adjacency_radius <= 0 selects the 3 sigma default.
double design_objective(const Target&, const MediumParams&, double tau,
                        const std::vector<double>& phases, double adjacency_radius = 0.0);

/// Cyclic coordinate ascent on the design objective, one region at a time with
/// a 32-point phase scan plus quadratic touch-up. Region 1 stays at its initial
/// phase (the objective only sees phase differences, so one region is gauge).
PhaseAssignment refine_phases(const Target&, const MediumParams&, double tau,
                              const PhaseAssignment& initial);

}  // namespace vaporstore
