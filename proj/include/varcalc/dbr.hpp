#pragma once

#include <string>
#include <vector>

#include "varcalc/convex.hpp"
#include "varcalc/lagrangian.hpp"
#include "varcalc/nonsmooth.hpp"

namespace varcalc {

// Sampling plan for the per-node scalar sections.  The slope-scaling profile
// g(w) = L(y_i, w u_i) is sampled on (0, 2) with step 1/resolution; the
// time-rescaling profile f(v) = g(1/w) v inherits the reciprocal grid on
// (1/2, v_max], which keeps the two hulls in exact correspondence (affine
// chords map to affine chords under the reciprocal transform).
struct SectionGridConfig {
  int resolution = 200;  // samples per unit of w; multiple of 4
  double v_max = 4.0;
};

struct NodeSection {
  double time = 0.0;
  double integrand = 0.0;  // L(y_i, u_i)
  SampledFunction1D slope_scale;        // g_i
  SampledFunction1D slope_scale_hull;   // convex envelope of g_i
  SampledFunction1D time_rescale;       // f_i
  SampledFunction1D time_rescale_hull;  // convex envelope of f_i
  OneSidedDerivatives slope_scale_slopes{0.0, 0.0};   // hull slopes at w = 1
  OneSidedDerivatives time_rescale_slopes{0.0, 0.0};  // hull slopes at v = 1
  double slope_scale_hull_at_one = 0.0;
  double time_rescale_hull_at_one = 0.0;
  // Admissible range for the constancy candidate at this node:
  // [L_i - right hull slope, L_i - left hull slope].
  double interval_lo = 0.0;
  double interval_hi = 0.0;
};

struct EnvelopePipeline {
  SectionGridConfig config;
  std::vector<NodeSection> nodes;
};

EnvelopePipeline build_pipeline(const LagrangianSpec& lagrangian,
                                const Trajectory& trajectory,
                                const SectionGridConfig& config = {});

// Common shape of every constancy report.  `constant` is the candidate c
// with L_i - <p_i, u_i> = c along the trajectory; `residual` the worst
// violation of that identity; `enlargement` how much the per-node intervals
// had to be inflated before they intersected (0 for genuine minimizers).
struct DbrReport {
  std::string variant;
  double constant = 0.0;
  double interval_lo = 0.0;
  double interval_hi = 0.0;
  double residual = 0.0;
  double vacuous_fraction = 0.0;
  double enlargement = 0.0;
  double hamiltonian_residual = 0.0;  // convexified variant only
  std::vector<double> costates;       // p_i, flattened; empty for erdmann
};

// Interval test on the pipeline alone: intersects the per-node ranges and
// takes the midpoint as the constant.
DbrReport erdmann_interval_test(const EnvelopePipeline& pipeline);

struct DbrConfig {
  SectionGridConfig grid{};
  double hypothesis_tol = 1e-8;     // |L - co L| admitted along the curve
  double u_radius = 8.0;            // half width of the convexification grid
  GradientLatticeConfig lattice{};  // for the sub/superdifferential variants
  StepSchedule clarke_steps{};
};

// Costate via the convexified velocity section; requires L to touch its
// convexification along the trajectory and cross-checks the Hamiltonian
// against -c.
DbrReport dbr_convexified(const LagrangianSpec& lagrangian,
                          const Trajectory& trajectory,
                          const DbrConfig& config = {});

// Costate from the viscosity subdifferential of L(y_i, .); needs the
// semiconvex or differentiable hypothesis flag.
DbrReport dbr_subdifferential(const LagrangianSpec& lagrangian,
                              const Trajectory& trajectory,
                              const DbrConfig& config = {});

// Costate from the Clarke interval; needs the locally Lipschitz flag.
DbrReport dbr_clarke(const LagrangianSpec& lagrangian,
                     const Trajectory& trajectory,
                     const DbrConfig& config = {});

// Unconditional variant: tests the constancy for every lattice element of
// the superdifferential, reporting the fraction of nodes where it is empty.
DbrReport dbr_superdifferential(const LagrangianSpec& lagrangian,
                                const Trajectory& trajectory,
                                const DbrConfig& config = {});

}  // namespace varcalc
