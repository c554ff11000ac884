#include "varcalc/solver.hpp"

#include <algorithm>
#include <cmath>

#include "varcalc/parallel.hpp"

namespace varcalc {

namespace {

// Transition cost between two lattice nodes, written exactly like the
// left-endpoint rule in evaluate_action so path costs match it bitwise.
inline double transition_cost(const LagrangianFn& l, const double* from,
                              const double* to, int dim, double dt,
                              double* slope_buf) {
  for (int k = 0; k < dim; ++k) slope_buf[k] = (to[k] - from[k]) / dt;
  double v = l({from, static_cast<std::size_t>(dim)},
               {slope_buf, static_cast<std::size_t>(dim)});
  return v * dt;
}

}  // namespace

SolveResult solve_lagrange_dp(const ProblemInstance& problem,
                              const SolverConfig& config) {
  if (problem.kind != ProblemKind::kLagrange)
    throw ConfigError("trajectory solver expects a fixed-endpoint problem");
  const int dim = problem.lagrangian.dim;
  if (dim > 2)
    throw ConfigError("all-transition lattice search supports dim <= 2");
  if (config.time_steps < 1) throw ConfigError("need at least one time step");
  if (static_cast<int>(config.axes.size()) != dim)
    throw DimensionMismatch("one grid axis per state coordinate required");

  Lattice lattice(config.axes);
  const std::size_t n_states = lattice.size();
  const int n_steps = config.time_steps;
  const double dt = (problem.b - problem.a) / n_steps;

  // Node coordinates, flattened once.
  std::vector<double> nodes(n_states * dim);
  for (std::size_t s = 0; s < n_states; ++s)
    lattice.node(s, nodes.data() + s * dim);

  double snap_a = 0.0, snap_b = 0.0;
  const std::size_t start = lattice.snap(problem.xa, &snap_a);
  const std::size_t goal = lattice.snap(problem.xb, &snap_b);

  double cap2 = kInf;
  if (config.slope_cap) cap2 = *config.slope_cap * *config.slope_cap;

  std::vector<double> best(n_states, kInf);
  std::vector<double> next(n_states);
  std::vector<int> pred(static_cast<std::size_t>(n_steps) * n_states, -1);
  std::vector<long> ties(n_states, 0);
  best[start] = 0.0;
  long tie_count = 0;

  const LagrangianFn& l = problem.lagrangian.value;
  for (int step = 0; step < n_steps; ++step) {
    int* pred_row = pred.data() + static_cast<std::size_t>(step) * n_states;
    parallel_for(n_states, [&](std::size_t j) {
      const double* to = nodes.data() + j * dim;
      double incumbent = kInf;
      int incumbent_pred = -1;
      long local_ties = 0;
      double slope[2];
      for (std::size_t i = 0; i < n_states; ++i) {
        if (best[i] == kInf) continue;
        const double* from = nodes.data() + i * dim;
        if (cap2 < kInf) {
          double s2 = 0.0;
          for (int k = 0; k < dim; ++k) {
            double u = (to[k] - from[k]) / dt;
            s2 += u * u;
          }
          if (s2 > cap2) continue;
        }
        double cand = best[i] + transition_cost(l, from, to, dim, dt, slope);
        if (cand < incumbent) {
          incumbent = cand;
          incumbent_pred = static_cast<int>(i);
        } else if (cand == incumbent && incumbent < kInf) {
          ++local_ties;  // kept the lower predecessor index
        }
      }
      next[j] = incumbent;
      pred_row[j] = incumbent_pred;
      ties[j] = local_ties;
    });
    best.swap(next);
    for (long t : ties) tie_count += t;
    std::fill(ties.begin(), ties.end(), 0L);
  }

  if (best[goal] == kInf)
    throw CostOverflow("no lattice path with finite action reaches the goal");

  SolveResult result;
  result.grid_global = true;
  result.tie_count = tie_count;
  result.snap_distance = std::max(snap_a, snap_b);

  Trajectory& traj = result.trajectory;
  traj.t0 = problem.a;
  traj.dt = dt;
  traj.dim = dim;
  traj.states.assign(static_cast<std::size_t>(n_steps + 1) * dim, 0.0);
  std::size_t at = goal;
  for (int step = n_steps; step >= 0; --step) {
    lattice.node(at, traj.states.data() + static_cast<std::size_t>(step) * dim);
    if (step > 0) {
      int p = pred[static_cast<std::size_t>(step - 1) * n_states + at];
      at = static_cast<std::size_t>(p);
    }
  }
  result.action = evaluate_action(problem.lagrangian, traj).value();
  return result;
}

SolveResult refine_local(const ProblemInstance& problem,
                         const SolveResult& start, int sweeps,
                         int bisection_levels) {
  if (sweeps < 1 || bisection_levels < 1)
    throw ConfigError("refinement needs positive sweeps and levels");
  SolveResult result = start;
  Trajectory& traj = result.trajectory;
  const int dim = traj.dim;
  const int n = traj.steps();
  const double dt = traj.dt;
  const LagrangianFn& l = problem.lagrangian.value;

  // Local objective: the two action terms that depend on node i.
  double slope[2];
  auto local_cost = [&](int i) {
    const double* prev = traj.states.data() + static_cast<std::size_t>(i - 1) * dim;
    const double* here = traj.states.data() + static_cast<std::size_t>(i) * dim;
    const double* next = traj.states.data() + static_cast<std::size_t>(i + 1) * dim;
    return transition_cost(l, prev, here, dim, dt, slope) +
           transition_cost(l, here, next, dim, dt, slope);
  };

  // First offset: half a typical slope quantum, estimated from the data.
  double scale = 0.0;
  for (std::size_t k = 0; k + dim < traj.states.size(); ++k)
    scale = std::max(scale, std::abs(traj.states[k + dim] - traj.states[k]));
  if (scale == 0.0) scale = dt;

  for (int sweep = 0; sweep < sweeps; ++sweep) {
    for (int i = 1; i < n; ++i) {
      for (int a = 0; a < dim; ++a) {
        double delta = 0.5 * scale;
        for (int level = 0; level < bisection_levels; ++level, delta *= 0.5) {
          double& coord = traj.states[static_cast<std::size_t>(i) * dim + a];
          double base = local_cost(i);
          double saved = coord;
          coord = saved + delta;
          double up = local_cost(i);
          coord = saved - delta;
          double down = local_cost(i);
          coord = saved;
          if (up < base && up <= down)
            coord = saved + delta;
          else if (down < base)
            coord = saved - delta;
        }
      }
    }
  }
  result.action = evaluate_action(problem.lagrangian, traj).value();
  result.grid_global = false;
  return result;
}

double reparametrization_gain(const LagrangianSpec& lagrangian,
                              const Trajectory& trajectory,
                              std::span<const double> speeds,
                              double mass_tol) {
  const int n = trajectory.steps();
  if (static_cast<int>(speeds.size()) != n)
    throw DimensionMismatch("one speed per trajectory interval required");
  double mass = 0.0;
  for (double v : speeds) {
    if (!(v > 0.5))
      throw SlopeOutOfDomain("time-rescaling speeds must exceed 1/2");
    mass += v * trajectory.dt;
  }
  const double span = trajectory.dt * n;
  if (std::abs(mass - span) > mass_tol * span)
    throw MassMismatch("rescaled speeds do not preserve the total time");

  // Rescaled action minus the uniform-speed action: sum of
  // dt * [ L(y_i, u_i / v_i) * v_i - L(y_i, u_i) ].
  double gain = 0.0;
  Vec u(trajectory.dim), w(trajectory.dim);
  for (int i = 0; i < n; ++i) {
    auto yi = trajectory.state(i);
    auto yj = trajectory.state(i + 1);
    for (int k = 0; k < trajectory.dim; ++k) {
      u[k] = (yj[k] - yi[k]) / trajectory.dt;
      w[k] = u[k] / speeds[i];
    }
    double rescaled = lagrangian.value(yi, w) * speeds[i];
    double uniform = lagrangian.value(yi, u);
    gain += trajectory.dt * (rescaled - uniform);
  }
  return gain;
}

}  // namespace varcalc
