#include "varcalc/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "varcalc/errors.hpp"

namespace varcalc {

SampledFunction1D co_gauge_profile(const GrowthGauge& gauge, int dim,
                                   double s_max, int resolution) {
  if (resolution < 2) throw ConfigError("profile resolution must be >= 2");
  if (!(s_max > 0.0)) throw ConfigError("profile range must be positive");
  if (dim < 1) throw ConfigError("dimension must be positive");

  std::vector<Vec> fan;
  if (!gauge.radial) {
    if (dim == 1) {
      fan.push_back({1.0});
      fan.push_back({-1.0});
    } else {
      for (int k = 0; k < 16; ++k) {
        double ang = 2.0 * std::numbers::pi * k / 16.0;
        Vec e(dim, 0.0);
        e[0] = std::cos(ang);
        e[1] = std::sin(ang);
        fan.push_back(std::move(e));
      }
    }
  }
  Vec probe(static_cast<std::size_t>(dim));
  auto profile = [&](double r) {
    if (gauge.radial) return gauge.radial_profile(r);
    double best = kInf;
    for (const auto& e : fan) {
      for (int c = 0; c < dim; ++c) probe[c] = r * e[c];
      best = std::min(best, gauge.value(probe));
    }
    return best;
  };

  const double step = s_max / resolution;
  const int n = 2 * resolution + 1;
  std::vector<double> xs(n), ys(n);
  for (int k = 0; k < n; ++k) {
    xs[k] = (k - resolution) * step;
    ys[k] = profile(std::abs(xs[k]));
  }
  SampledFunction1D hull =
      lower_convex_envelope_1d(SampledFunction1D(std::move(xs), std::move(ys)));

  std::vector<double> half_x(hull.abscissae.begin() + resolution,
                             hull.abscissae.end());
  std::vector<double> half_y(hull.ordinates.begin() + resolution,
                             hull.ordinates.end());
  return SampledFunction1D(std::move(half_x), std::move(half_y),
                           SampledFunction1D::Interpretation::kPiecewiseLinear);
}

BoundTrace lipschitz_bound(const GrowthGauge& gauge,
                           const std::function<double(double)>& local_bound,
                           const DataBounds& bounds, int dim) {
  if (!(bounds.alpha > 0.0) || bounds.beta < bounds.alpha)
    throw ConfigError("need 0 < alpha <= beta");
  if (bounds.A < 0.0 || bounds.B < 0.0)
    throw ConfigError("anchor radius and action budget must be nonnegative");
  const auto& cert = gauge.certificate;
  if (cert.level.empty() || cert.level.size() != cert.ratio.size())
    throw GaugeTooWeak("missing superlinearity certificate");

  BoundTrace trace;
  trace.inputs = bounds;

  // Split |u| <= s + theta(u)/ratio(s) and integrate: the total variation is
  // at most s*beta + B/ratio(s); take the best certificate level.
  double budget = kInf;
  for (std::size_t i = 0; i < cert.level.size(); ++i) {
    if (cert.ratio[i] <= 0.0) continue;
    budget = std::min(budget, cert.level[i] * bounds.beta +
                                  bounds.B / cert.ratio[i]);
  }
  if (!std::isfinite(budget))
    throw GaugeTooWeak("certificate has no positive ratio level");
  trace.displacement_budget = budget;
  trace.state_radius = bounds.A + budget;

  // On a positive-measure set the gauge is at most B/alpha, so the slope
  // there is at most the first level whose certified growth beats that.
  bool found = false;
  for (std::size_t i = 0; i < cert.level.size(); ++i) {
    if (cert.ratio[i] * cert.level[i] > bounds.B / bounds.alpha) {
      trace.speed_threshold = cert.level[i];
      found = true;
      break;
    }
  }
  if (!found)
    throw GaugeTooWeak(
        "action budget exceeds certified growth over the tabulated range");

  trace.constant_floor =
      -3.0 * local_bound(trace.state_radius + 2.0 * trace.speed_threshold);
  trace.unit_cost_cap = local_bound(trace.state_radius + 1.0);
  const double detour_cap =
      trace.unit_cost_cap - std::min(trace.constant_floor, 0.0);

  // Invert co(theta)(s)/s <= detour_cap on the certificate grid.  The ratio
  // is nondecreasing (convex envelope, nonnegative at 0), so the admissible
  // levels form a prefix; the bound is certified only if some level fails.
  SampledFunction1D co = co_gauge_profile(gauge, dim, cert.level.back());
  bool some_fail = false;
  for (std::size_t i = 0; i < cert.level.size(); ++i) {
    double s = cert.level[i];
    if (co.interpolate(s) / s <= detour_cap)
      trace.slope_cap = std::max(trace.slope_cap, s);
    else
      some_fail = true;
  }
  if (!some_fail)
    throw GaugeTooWeak("coercivity inversion exceeds the tabulated range");

  trace.lipschitz = std::max(2.0, trace.slope_cap);
  return trace;
}

BoundVerification verify_bound(const ProblemInstance& problem,
                               const Trajectory& minimizer,
                               const BoundTrace& trace, double tol) {
  if (problem.kind != ProblemKind::kLagrange)
    throw ConfigError("bound verification expects a Lagrange problem");
  const DataBounds& d = trace.inputs;

  BoundVerification v;
  v.span = problem.b - problem.a;
  if (v.span < d.alpha * (1.0 - tol) || v.span > d.beta * (1.0 + tol))
    throw HypothesisFailed("interval_bounds: span outside [alpha, beta]");

  v.anchor = kInf;
  for (int i = 0; i <= minimizer.steps(); ++i) {
    auto y = minimizer.state(i);
    double r = 0.0;
    for (double c : y) r += c * c;
    v.anchor = std::min(v.anchor, std::sqrt(r));
  }
  if (v.anchor > d.A + tol * (1.0 + d.A))
    throw HypothesisFailed("anchor_bound: trajectory never enters |y| <= A");

  ExtReal action = evaluate_action(problem.lagrangian, minimizer);
  if (action.is_infinite())
    throw HypothesisFailed("action_budget: infinite action");
  v.action = action.value();
  if (v.action > d.B * (1.0 + tol) + tol)
    throw HypothesisFailed("action_budget: action exceeds B");

  v.empirical = empirical_lipschitz(minimizer);
  v.bound = trace.lipschitz;
  v.margin = v.bound - v.empirical;
  v.passed = v.empirical <= v.bound;
  return v;
}

}  // namespace varcalc
