#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "varcalc/extreal.hpp"

namespace varcalc {

using Vec = std::vector<double>;

// L(x, u), extended-real valued.  Evaluators are pure and total on finite
// inputs; +inf encodes "forbidden".
using LagrangianFn =
    std::function<double(std::span<const double>, std::span<const double>)>;

// Tabulated superlinearity certificate: ratio[i] is a sound lower bound for
// inf { theta(u)/|u| : |u| >= level[i] }.  Levels are geometric and the
// ratios nondecreasing, which is what the bound-tracing code relies on.
struct SuperlinearityCertificate {
  std::vector<double> level;
  std::vector<double> ratio;
};

// Coercivity gauge theta with its certificate.  All catalog gauges are
// radial; `radial_profile` is the exact section s -> theta(s * e).
struct GrowthGauge {
  std::string name;
  std::function<double(std::span<const double>)> value;
  std::function<double(double)> radial_profile;
  SuperlinearityCertificate certificate;
  bool radial = true;
};

// Regularity of L in the velocity argument, declared per catalog entry and
// consumed by the necessary-condition variants as hypotheses.
struct LagrangianFlags {
  bool convex_in_u = false;
  bool differentiable_in_u = false;
  bool semiconvex_in_u = false;
  bool lipschitz_in_u = false;
};

struct LagrangianSpec {
  std::string name;
  int dim = 1;
  LagrangianFn value;
  GrowthGauge gauge;                          // theta <= L everywhere
  std::function<double(double)> local_bound;  // psi(R) >= L on |x|,|u| <= R
  LagrangianFlags flags;
};

// Terminal cost of the fixed-horizon problem, with one point where it is
// known to be finite (used to seed feasibility checks).
struct TerminalCost {
  std::string name;
  std::function<double(std::span<const double>)> value;
  Vec finite_point;
};

struct DataBounds {
  double A = 0.0;      // some trajectory point has |y| <= A
  double B = 0.0;      // action budget
  double alpha = 1.0;  // shortest admissible interval
  double beta = 1.0;   // longest admissible interval
};

enum class ProblemKind { kLagrange, kBolza };

struct ProblemInstance {
  ProblemKind kind = ProblemKind::kLagrange;
  LagrangianSpec lagrangian;
  // Lagrange data: fixed interval and endpoints.
  double a = 0.0, b = 1.0;
  Vec xa, xb;
  // Bolza data: horizon, initial point, terminal cost.
  double horizon = 1.0;
  Vec x0;
  std::optional<TerminalCost> terminal;
  std::optional<DataBounds> bounds;
};

// Uniformly sampled absolutely continuous curve.  states is (steps+1) x dim,
// row-major; slopes are forward differences.
struct Trajectory {
  double t0 = 0.0;
  double dt = 0.0;
  int dim = 1;
  std::vector<double> states;

  int steps() const {
    return static_cast<int>(states.size()) / dim - 1;
  }
  std::span<const double> state(int i) const {
    return {states.data() + static_cast<std::size_t>(i) * dim,
            static_cast<std::size_t>(dim)};
  }
  // Forward-difference slope on [t_i, t_{i+1}].
  Vec slope(int i) const;
  double time(int i) const { return t0 + dt * i; }
};

// Left-endpoint Riemann sum of L along the trajectory.  +inf propagates;
// non-finite states or a dimension mismatch throw.
ExtReal evaluate_action(const LagrangianSpec& lagrangian,
                        const Trajectory& trajectory);

// Largest slope magnitude, the empirical Lipschitz constant of the curve.
double empirical_lipschitz(const Trajectory& trajectory);

}  // namespace varcalc
