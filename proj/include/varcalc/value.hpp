#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "varcalc/convex.hpp"
#include "varcalc/grid.hpp"
#include "varcalc/lagrangian.hpp"

namespace varcalc {

// ---------------------------------------------------------------------------
// Value grid
// ---------------------------------------------------------------------------

struct ValueGridConfig {
  int time_steps = 100;   // layers between horizon 0 and the target horizon
  int extra_layers = 2;   // additional layers so probes can look past the end
  GridAxis axis{0.0, 1.0, 801};
  double slope_cap = 4.0;  // per-step slope magnitude bound
};

// V[k][i] = optimal cost from state x_i over horizon k*tau, computed by the
// forward-in-horizon recursion V[k+1][i] = min_u { tau*L(x_i,u) + V[k][x_i +
// tau*u] } with u ranging over lattice-reachable slopes.  `best` stores the
// argmin destination index (lowest index on ties), -1 on layer 0.
struct ValueGrid {
  double tau = 0.0;
  double horizon = 0.0;
  int horizon_layers = 0;  // layer index sitting at the requested horizon
  int total_layers = 0;    // last computed layer (>= horizon_layers)
  GridAxis axis{0.0, 1.0, 2};
  int states = 0;
  int reach = 0;  // max lattice-offset magnitude reachable in one step
  std::vector<double> x;
  std::vector<double> v;  // (total_layers+1) x states, layer-major
  std::vector<int> best;  // same shape

  double value(int k, int i) const {
    return v[static_cast<std::size_t>(k) * states + i];
  }
  // First-step slope of the optimal path from (k*tau, x_i).
  double slope_of(int k, int i) const;
  // Bilinear interpolation of an arbitrary layered field sharing this grid's
  // lattice (field may cover fewer layers).  +inf outside the covered box.
  double sample_field(std::span<const double> field, double t,
                      double xq) const;
  double sample(double t, double xq) const { return sample_field(v, t, xq); }
};

ValueGrid compute_value_grid(const LagrangianSpec& lagrangian,
                             const TerminalCost& phi, double horizon,
                             const ValueGridConfig& config);

// Follows the stored argmins from (horizon, x_start) down to layer 0.
// x_start must sit on the lattice (TrajectoryOffGrid otherwise).
Trajectory extract_dp_path(const ValueGrid& grid, double x_start);

// ---------------------------------------------------------------------------
// Relaxed integrand estimators
// ---------------------------------------------------------------------------

struct RelaxedIntegrandConfig {
  double h0 = 1e-1;  // geometric step schedule h0 * 2^-j
  int levels = 12;
  int tail = 4;          // statistic window: last `tail` averaged values
  int inner_states = 9;  // odd; offsets around the straight interpolant
  int inner_steps = 4;   // substeps of the inner problem
  double slope_unit = 0.5;  // offset quantum, in velocity units
  int refine = 1;           // nested refinement rounds around the argmin
};

// Averaged short-horizon optimal costs between x and x + h*u (upper variant:
// from x - h*u into x).  upper = max of the tail, lower = min of the tail.
struct RelaxedIntegrandEstimate {
  double x = 0.0;
  double u = 0.0;
  std::vector<double> h;
  std::vector<double> averaged;  // I(h), +inf when the inner problem is
  double upper = 0.0;            // guaranteed upper statistic of the tail
  double lower = 0.0;
  int tail = 0;
};

RelaxedIntegrandEstimate estimate_upper_integrand(
    const LagrangianSpec& lagrangian, double x, double u,
    const RelaxedIntegrandConfig& config);
RelaxedIntegrandEstimate estimate_lower_integrand(
    const LagrangianSpec& lagrangian, double x, double u,
    const RelaxedIntegrandConfig& config);

// ---------------------------------------------------------------------------
// Hamiltonians
// ---------------------------------------------------------------------------

// Discrete conjugates of the velocity section at state x over a symmetric
// u-grid: plain uses L directly; upper/lower (filled when an estimator
// config is supplied) conjugate the relaxed integrand samples instead.
struct HamiltonianSection {
  std::vector<double> p;
  std::vector<double> plain;
  std::vector<bool> truncated;  // argmax sat on the u-grid boundary
  std::vector<double> upper;    // conjugate of the upper relaxed integrand
  std::vector<double> lower;    // conjugate of the lower relaxed integrand
};

HamiltonianSection hamiltonian_section(
    const LagrangianSpec& lagrangian, double x,
    const std::vector<double>& p_grid, double u_max, int u_resolution,
    const RelaxedIntegrandConfig* estimator = nullptr);

// ---------------------------------------------------------------------------
// Initial attainment and local Lipschitz table
// ---------------------------------------------------------------------------

struct AttainmentConfig {
  // The cone has to stay small: V moves away from phi at rate L + slope
  // effects, so a wide or deep cone reports drift, not attainment failures.
  int cone_layers = 1;       // how many early layers the cone inspects
  double cone_slope = 0.25;  // |x - x0| <= slope * t within the cone
  double tol = 2e-2;
};

struct AttainmentReport {
  bool initial_exact = false;  // layer 0 equals phi sample-for-sample
  int lsc_violations = 0;      // finite-point lattice lsc proxy failures
  int cone_checked = 0;
  int cone_failures = 0;   // cone minimum dips below phi(x0) - tol
  double worst_gap = 0.0;  // largest phi(x0) - cone minimum
};

AttainmentReport check_initial_attainment(const ValueGrid& grid,
                                          const TerminalCost& phi,
                                          const AttainmentConfig& config);

struct Region {
  double t_min = 0.0, t_max = 1.0;
  double x_min = -1.0, x_max = 1.0;
};

// Per-cell largest difference quotient over lattice-neighbor pairs in t and
// in x; `overall` is the max over cells.
struct LipschitzTable {
  int t_cells = 0, x_cells = 0;
  std::vector<double> constant;  // t-major
  double overall = 0.0;
};

LipschitzTable lipschitz_estimate_V(const ValueGrid& grid,
                                    const Region& region, int t_cells = 3,
                                    int x_cells = 3);

// ---------------------------------------------------------------------------
// Hamilton-Jacobi residuals
// ---------------------------------------------------------------------------

// How the relaxed integrands entering the HJ inequalities are obtained:
// kDirect substitutes L itself (exact at continuity points, which is the
// regime the smooth-point report targets), kEstimated runs the short-horizon
// estimators at every sampled (x,u).
enum class IntegrandSource { kDirect, kEstimated };

struct ProbeSchedule {
  double h0 = 0.0;  // 0 = use the grid's tau
  int levels = 6;
  int tail = 6;  // tail == levels keeps the coarsest (exact-Bellman) probe
};

struct HjConfig {
  double tol = 3e-2;
  int k_lo = 1;    // first tested layer
  int k_hi = -1;   // last tested layer (-1 = horizon layer)
  int i_margin = 1;
  int t_stride = 1, x_stride = 1;
  int raw_stride = 8;           // stride of the directional-quotient checks
  double kink_tol = 5e-2;       // x-slope gap below which a point is smooth
  IntegrandSource source = IntegrandSource::kDirect;
  ProbeSchedule schedule;
  std::vector<double> fan_deltas{0.0, -5e-3, 5e-3, -1e-2, 1e-2};
  std::vector<double> raw_fan{0.0, -1.0, -0.5, -0.25, 0.25, 0.5, 1.0, 2.0};
  RelaxedIntegrandConfig estimator;  // used when source == kEstimated
};

struct HjPointFinding {
  int k = 0, i = 0;
  double residual = 0.0;
  std::string kind;
};

struct HjResidualReport {
  long points_checked = 0;  // smooth interior points visited
  double smooth_fraction = 1.0;
  long super_violations = 0;  // p_t + H(x,-p_x) < -tol
  long sub_violations = 0;    // p_t + H(x,-p_x) > tol
  double worst_super = 0.0;   // most negative supersolution residual
  double worst_sub = 0.0;     // most positive subsolution residual
  long raw_points = 0;
  long raw_sup_violations = 0;  // existential upper-quotient inequality
  long raw_sub_violations = 0;  // universal lower-quotient inequality
  double worst_raw_sup = 0.0;
  double worst_raw_sub = 0.0;
  std::vector<HjPointFinding> worst;  // up to 10, most severe first
};

HjResidualReport hj_residuals(const ValueGrid& grid,
                              const LagrangianSpec& lagrangian,
                              const HjConfig& config);

// ---------------------------------------------------------------------------
// Dini monotonicity
// ---------------------------------------------------------------------------

struct DiniReport {
  double max_quotient = 0.0;  // largest forward difference quotient
  bool quotients_nonpositive = false;
  bool monotone_conclusion = false;   // f(b) <= f(a) + tol
  bool dominated_conclusion = false;  // f(b) - f(a) <= sum g*dt + tol
  double endpoint_gap = 0.0;          // f(b) - f(a)
  double budget = 0.0;                // sum g*dt (0 without a dominator)
  int lsc_violations = 0;
};

DiniReport dini_monotonicity(const std::vector<double>& f, double dt,
                             const std::vector<double>* dominator = nullptr,
                             double tol = 1e-9);

// ---------------------------------------------------------------------------
// Comparison / maximality
// ---------------------------------------------------------------------------

enum class ComparisonVerdict { kNotAdmissible, kDominated, kViolation };

struct ComparisonConfig {
  double initial_tol = 1e-9;  // admissibility: W(0,.) must equal phi
  double sub_tol = 3e-2;      // subsolution sample tolerance
  double dominance_tol = 2e-2;
  int t_stride = 4, x_stride = 4;
  std::vector<double> u_fan{0.0, -1.0, -0.5, 0.5, 1.0};
  ProbeSchedule schedule;
  IntegrandSource source = IntegrandSource::kDirect;
  RelaxedIntegrandConfig estimator;
};

struct ComparisonReport {
  ComparisonVerdict verdict = ComparisonVerdict::kViolation;
  double max_initial_gap = 0.0;
  long sub_checked = 0;
  double worst_subsolution = 0.0;  // max of quotient - relaxed integrand
  double max_excess = 0.0;         // max W - V over the compared grid
  int violation_k = -1, violation_i = -1;
  bool sampled_verified = true;  // grid evidence only, never a proof
};

// W is layer-major on the grid's lattice covering at least the horizon
// layers.  Verdict: kNotAdmissible when W(0,.) != phi; otherwise the
// subsolution inequality is sampled and dominance W <= V + tol checked.
ComparisonReport comparison_check(std::span<const double> candidate,
                                  const ValueGrid& grid,
                                  const LagrangianSpec& lagrangian,
                                  const TerminalCost& phi,
                                  const ComparisonConfig& config);

// ---------------------------------------------------------------------------
// Differential-inclusion characterization
// ---------------------------------------------------------------------------

enum class InclusionVerdict { kMinimizer, kRejected };

struct InclusionConfig {
  double tol = 5e-2;           // membership residual tolerance
  double pass_fraction = 0.95; // nodes that must satisfy one membership test
  double action_tol = 2e-2;    // optimality slack for action + phi vs V
  double equality_tol = 5e-2;  // two-sided derivative equality tolerance
  ProbeSchedule schedule;
  std::vector<double> fan_deltas{0.0, -5e-3, 5e-3, -1e-2, 1e-2};
};

struct InclusionNodeReport {
  double r_forward = 0.0;   // lower quotient in direction (-1, u) plus L
  double r_backward = 0.0;  // L minus upper quotient in direction (1, -u)
  bool pass = false;
  bool equalities = false;  // all four derivative equalities within tol
};

struct InclusionReport {
  InclusionVerdict verdict = InclusionVerdict::kRejected;
  double pass_fraction = 0.0;
  double action_excess = 0.0;  // action + phi(end) - V(horizon, start)
  double max_r_forward = 0.0;
  double equality_fraction = 0.0;
  double worst_equality_gap = 0.0;
  std::vector<InclusionNodeReport> nodes;
};

InclusionReport inclusion_check(const Trajectory& trajectory,
                                const ValueGrid& grid,
                                const LagrangianSpec& lagrangian,
                                const TerminalCost& phi,
                                const InclusionConfig& config);

}  // namespace varcalc
