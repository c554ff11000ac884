#pragma once

#include <functional>

#include "varcalc/convex.hpp"
#include "varcalc/lagrangian.hpp"

namespace varcalc {

// A-priori slope bound for minimizers, derived from the growth gauge, the
// local bound psi, and the problem data bounds.  Every intermediate constant
// is kept so reports can show how the final number was reached.
struct BoundTrace {
  double displacement_budget = 0.0;  // bound on the total variation of y
  double state_radius = 0.0;         // anchor radius + displacement budget
  double speed_threshold = 0.0;      // slope the action budget cannot beat
  double constant_floor = 0.0;       // lower bound for the Erdmann constant
  double unit_cost_cap = 0.0;        // integrand cap for unit-speed detours
  double slope_cap = 0.0;            // level from the coercivity inversion
  double lipschitz = 0.0;            // final bound, always >= 2
  DataBounds inputs;
};

// Convex envelope of the gauge's radial profile on [0, s_max], sampled on a
// uniform grid.  The even extension is enveloped first, so profiles whose
// minimum sits away from the origin (double wells) flatten correctly near 0.
// Non-radial gauges use the smallest profile over a direction fan, which
// under-estimates the gauge and therefore keeps the final bound sound.
SampledFunction1D co_gauge_profile(const GrowthGauge& gauge, int dim,
                                   double s_max, int resolution = 8192);

// Traces the slope bound: displacement budget from the certificate split
// |u| <= s + theta(u)/ratio(s), anchor radius, the speed threshold that the
// action budget cannot exceed on a full-measure set, the Erdmann-constant
// floor, and finally the inversion of co(theta)(s)/s against the detour cap.
// Throws GaugeTooWeak when an inversion cannot be certified inside the
// tabulated certificate range.
BoundTrace lipschitz_bound(const GrowthGauge& gauge,
                           const std::function<double(double)>& local_bound,
                           const DataBounds& bounds, int dim = 1);

struct BoundVerification {
  double empirical = 0.0;  // largest slope magnitude along the minimizer
  double bound = 0.0;      // trace.lipschitz
  double margin = 0.0;     // bound - empirical
  bool passed = false;     // empirical <= bound
  double anchor = 0.0;     // closest approach of the state to the origin
  double action = 0.0;     // measured action of the trajectory
  double span = 0.0;       // length of the time interval
};

// Checks that the problem instance actually satisfies the declared data
// bounds (anchor_bound: min |y| <= A; action_budget: action <= B;
// interval_bounds: alpha <= span <= beta), then compares the empirical
// slope against the traced bound.  Violated hypotheses throw
// HypothesisFailed naming the check.
BoundVerification verify_bound(const ProblemInstance& problem,
                               const Trajectory& minimizer,
                               const BoundTrace& trace, double tol = 1e-9);

}  // namespace varcalc
