#include "varcalc/lagrangian.hpp"

#include <cmath>

#include "varcalc/errors.hpp"

namespace varcalc {

Vec Trajectory::slope(int i) const {
  Vec u(dim);
  auto yi = state(i);
  auto yj = state(i + 1);
  for (int k = 0; k < dim; ++k) u[k] = (yj[k] - yi[k]) / dt;
  return u;
}

ExtReal evaluate_action(const LagrangianSpec& lagrangian,
                        const Trajectory& trajectory) {
  if (trajectory.dim != lagrangian.dim)
    throw DimensionMismatch("trajectory dimension differs from Lagrangian");
  if (trajectory.dt <= 0.0 || trajectory.steps() < 1)
    throw ConfigError("trajectory needs a positive step and one interval");
  for (double s : trajectory.states)
    if (!std::isfinite(s))
      throw NonFiniteState("trajectory contains a non-finite state");

  ExtReal total(0.0);
  Vec u(trajectory.dim);
  for (int i = 0; i < trajectory.steps(); ++i) {
    auto yi = trajectory.state(i);
    auto yj = trajectory.state(i + 1);
    for (int k = 0; k < trajectory.dim; ++k)
      u[k] = (yj[k] - yi[k]) / trajectory.dt;
    double l = lagrangian.value(yi, u);
    if (std::isnan(l)) throw NonFiniteState("Lagrangian returned NaN");
    total += ExtReal(l).scaled_by(trajectory.dt);
  }
  return total;
}

double empirical_lipschitz(const Trajectory& trajectory) {
  double worst = 0.0;
  for (int i = 0; i < trajectory.steps(); ++i) {
    Vec u = trajectory.slope(i);
    double norm2 = 0.0;
    for (double c : u) norm2 += c * c;
    worst = std::max(worst, std::sqrt(norm2));
  }
  return worst;
}

}  // namespace varcalc
