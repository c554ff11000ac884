#pragma once

#include <optional>
#include <span>

#include "varcalc/grid.hpp"
#include "varcalc/lagrangian.hpp"

namespace varcalc {

// Configuration of the layered lattice search.  All node-to-node transitions
// per time layer are admissible unless `slope_cap` prunes the fast ones.
struct SolverConfig {
  int time_steps = 0;
  std::vector<GridAxis> axes;
  std::optional<double> slope_cap;
};

struct SolveResult {
  Trajectory trajectory;
  double action = 0.0;
  bool grid_global = false;  // true when the result is the lattice optimum
  long tie_count = 0;        // argmin ties broken by lowest predecessor index
  double snap_distance = 0.0;
};

// Grid-global minimizer of the fixed-endpoint problem over lattice paths.
// Deterministic for any thread count: every node takes the lowest-index
// predecessor among the cost minimizers.
SolveResult solve_lagrange_dp(const ProblemInstance& problem,
                              const SolverConfig& config);

// Coordinate-wise sub-grid descent around a solution: each interior node is
// nudged by bisected offsets while its two adjacent action terms improve.
// The action never increases; the result is no longer grid-global.
SolveResult refine_local(const ProblemInstance& problem,
                         const SolveResult& start, int sweeps = 2,
                         int bisection_levels = 4);

// Action change caused by reparametrizing time with node speeds `speeds`
// (one per interval, each > 1/2, total time preserved).  Nonnegative gains
// certify that uniform speed was already optimal for the given curve.
double reparametrization_gain(const LagrangianSpec& lagrangian,
                              const Trajectory& trajectory,
                              std::span<const double> speeds,
                              double mass_tol = 1e-12);

}  // namespace varcalc
