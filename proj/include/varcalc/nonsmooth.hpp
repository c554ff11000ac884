#pragma once

#include <functional>
#include <span>
#include <vector>

#include "varcalc/convex.hpp"

namespace varcalc {

// Scalar field on R^m, possibly +inf outside its effective domain.
using FieldFn = std::function<double(std::span<const double>)>;

// Geometric step schedule h_j = h0 * 2^-j used as the discrete stand-in for
// h -> 0+.  Limit surrogates look only at the last `tail` levels.
struct StepSchedule {
  double h0 = 1e-1;
  int levels = 20;
  int tail = 5;
};

// Difference quotients of a field along a bundle of directions, kept with
// enough structure that callers can audit which step/direction realized an
// extreme value.
struct DerivativeFan {
  std::vector<double> base;
  std::vector<std::vector<double>> directions;
  std::vector<double> steps;                    // tail steps, descending
  std::vector<std::vector<double>> quotients;   // [direction][step]
  double liminf = 0.0;  // min over directions x tail steps
  double limsup = 0.0;  // max over directions x tail steps
};

DerivativeFan probe_fan(const FieldFn& f, std::span<const double> base,
                        const std::vector<std::vector<double>>& directions,
                        const StepSchedule& sched = {});

// Lower Dini derivative along a fixed direction (liminf surrogate).
double dini_lower(const FieldFn& f, std::span<const double> base,
                  std::span<const double> direction,
                  const StepSchedule& sched = {});

// Contingent pair at `base` in direction `dir`: liminf/limsup over the tail
// steps and a tensor fan of direction perturbations (per-axis offsets up to
// `half_width`, `points_per_axis` odd so the unperturbed direction is kept).
struct ContingentPair {
  double lower;  // liminf surrogate
  double upper;  // limsup surrogate
};
ContingentPair contingent_pair(const FieldFn& f, std::span<const double> base,
                               std::span<const double> direction,
                               const StepSchedule& sched = {},
                               double half_width = 0.0,
                               int points_per_axis = 3);

// Candidate-lattice tests for the generalized gradients.  A candidate p is
// kept when <p, v> <= D_lower(v) + tol for every probed direction v
// (subdifferential), resp. <p, v> >= D_upper(v) - tol (superdifferential).
// tol must dominate curvature * h_max of the schedule tail or smooth points
// come out empty; the candidate box stays quotient-tight, so a generous tol
// does not cost precision.
struct GradientLatticeConfig {
  StepSchedule sched{};
  double tol = 1e-3;
  int lattice_points = 81;  // per axis
  double pad = 1.5;         // candidate range = quotient range scaled by this
};

std::vector<std::vector<double>> subdifferential(
    const FieldFn& f, std::span<const double> base,
    const GradientLatticeConfig& cfg = {});

std::vector<std::vector<double>> superdifferential(
    const FieldFn& f, std::span<const double> base,
    const GradientLatticeConfig& cfg = {});

// Clarke interval of a scalar locally Lipschitz function: convex hull of the
// limiting difference-quotient slopes observed near the point, on
// neighbourhoods that shrink with the step.
struct ClarkeInterval {
  double lo;
  double hi;
};
ClarkeInterval clarke_gradient_1d(const std::function<double(double)>& f,
                                  double at, const StepSchedule& sched = {},
                                  int neighbourhood_points = 9);

}  // namespace varcalc
