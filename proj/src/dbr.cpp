#include "varcalc/dbr.hpp"

#include <algorithm>
#include <cmath>

#include "varcalc/errors.hpp"
#include "varcalc/parallel.hpp"

namespace varcalc {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

// Median with deterministic averaging for even counts.
double median(std::vector<double> v) {
  if (v.empty()) throw ConfigError("median of an empty sample");
  std::sort(v.begin(), v.end());
  std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

NodeSection build_section(const LagrangianSpec& lagrangian,
                          const Trajectory& traj, int i,
                          const SectionGridConfig& cfg) {
  NodeSection node;
  node.time = traj.time(i);
  const Vec u = traj.slope(i);
  auto y = traj.state(i);
  const int R = cfg.resolution;

  Vec scaled(u.size());
  auto scale_eval = [&](double w) {
    for (std::size_t k = 0; k < u.size(); ++k) scaled[k] = w * u[k];
    return lagrangian.value(y, scaled);
  };
  node.integrand = scale_eval(1.0);

  // g on (0, 2): open endpoints are +inf markers.
  {
    std::vector<double> w_grid, vals;
    w_grid.reserve(2 * R + 1);
    vals.reserve(2 * R + 1);
    w_grid.push_back(0.0);
    vals.push_back(kInf);
    for (int k = 1; k < 2 * R; ++k) {
      double w = static_cast<double>(k) / R;
      w_grid.push_back(w);
      vals.push_back(scale_eval(w));
    }
    w_grid.push_back(2.0);
    vals.push_back(kInf);
    node.slope_scale = SampledFunction1D(std::move(w_grid), std::move(vals));
  }

  // f on (1/2, v_max]: reciprocal grid of the w samples with w >= 1/v_max,
  // so that the two hulls correspond exactly.  f(1/w) = g(w)/w.
  {
    const int k_min = static_cast<int>(std::lround(R / cfg.v_max));
    std::vector<double> v_grid, vals;
    v_grid.reserve(2 * R - k_min + 1);
    vals.reserve(2 * R - k_min + 1);
    v_grid.push_back(0.5);
    vals.push_back(kInf);
    for (int k = 2 * R - 1; k >= k_min; --k) {
      double w = static_cast<double>(k) / R;
      v_grid.push_back(1.0 / w);
      vals.push_back(node.slope_scale.ordinates[k] / w);
    }
    node.time_rescale = SampledFunction1D(std::move(v_grid), std::move(vals));
  }

  node.slope_scale_hull = lower_convex_envelope_1d(node.slope_scale);
  node.time_rescale_hull = lower_convex_envelope_1d(node.time_rescale);
  node.slope_scale_slopes = one_sided_derivatives(node.slope_scale_hull, 1.0);
  node.time_rescale_slopes =
      one_sided_derivatives(node.time_rescale_hull, 1.0);
  node.slope_scale_hull_at_one = node.slope_scale_hull.interpolate(1.0);
  node.time_rescale_hull_at_one = node.time_rescale_hull.interpolate(1.0);
  node.interval_lo = node.integrand - node.slope_scale_slopes.right;
  node.interval_hi = node.integrand - node.slope_scale_slopes.left;
  return node;
}

struct Intersection {
  double lo, hi, enlargement;
};

Intersection intersect_intervals(const std::vector<NodeSection>& nodes) {
  double lo = -kInf, hi = kInf;
  for (const auto& n : nodes) {
    lo = std::max(lo, n.interval_lo);
    hi = std::min(hi, n.interval_hi);
  }
  double enlargement = lo > hi ? 0.5 * (lo - hi) : 0.0;
  return {lo, hi, enlargement};
}

// Shared tail for the costate variants: derive the constant from the
// selections, measure the constancy residual.
void finish_gradient_report(const LagrangianSpec& lagrangian,
                            const Trajectory& traj,
                            const std::vector<bool>& vacuous,
                            DbrReport& report) {
  const int n = traj.steps();
  std::vector<double> candidates;
  for (int i = 0; i < n; ++i) {
    if (vacuous[i]) continue;
    Vec u = traj.slope(i);
    double l = lagrangian.value(traj.state(i), u);
    std::span<const double> p(report.costates.data() +
                                  static_cast<std::size_t>(i) * traj.dim,
                              static_cast<std::size_t>(traj.dim));
    candidates.push_back(l - dot(p, u));
  }
  if (candidates.empty())
    throw HypothesisFailed("costate selection empty at every node");
  report.constant = median(candidates);
  report.interval_lo = *std::min_element(candidates.begin(), candidates.end());
  report.interval_hi = *std::max_element(candidates.begin(), candidates.end());
  report.residual = 0.0;
  for (double c : candidates)
    report.residual = std::max(report.residual, std::abs(c - report.constant));
  int vac = 0;
  for (bool b : vacuous) vac += b ? 1 : 0;
  report.vacuous_fraction = static_cast<double>(vac) / n;
}

}  // namespace

EnvelopePipeline build_pipeline(const LagrangianSpec& lagrangian,
                                const Trajectory& trajectory,
                                const SectionGridConfig& config) {
  if (config.resolution < 8 || config.resolution % 4 != 0)
    throw ConfigError("section resolution must be a positive multiple of 4");
  if (!(config.v_max > 1.0))
    throw ConfigError("time-rescaling grid must reach beyond v = 1");
  if (lagrangian.dim != trajectory.dim)
    throw DimensionMismatch("trajectory dimension differs from Lagrangian");
  EnvelopePipeline pipe;
  pipe.config = config;
  pipe.nodes.resize(trajectory.steps());
  parallel_for(pipe.nodes.size(), [&](std::size_t i) {
    pipe.nodes[i] =
        build_section(lagrangian, trajectory, static_cast<int>(i), config);
  });
  return pipe;
}

DbrReport erdmann_interval_test(const EnvelopePipeline& pipeline) {
  if (pipeline.nodes.empty()) throw ConfigError("empty pipeline");
  DbrReport report;
  report.variant = "erdmann";
  Intersection box = intersect_intervals(pipeline.nodes);
  report.interval_lo = box.lo;
  report.interval_hi = box.hi;
  report.enlargement = box.enlargement;
  report.constant = 0.5 * (box.lo + box.hi);
  for (const auto& n : pipeline.nodes) {
    double miss = std::max({0.0, n.interval_lo - report.constant,
                            report.constant - n.interval_hi});
    report.residual = std::max(report.residual, miss);
  }
  return report;
}

DbrReport dbr_convexified(const LagrangianSpec& lagrangian,
                          const Trajectory& trajectory,
                          const DbrConfig& config) {
  const int dim = trajectory.dim;
  const int n = trajectory.steps();
  if (n < 1) throw ConfigError("empty trajectory");

  DbrReport report;
  report.variant = "convex";
  report.costates.assign(static_cast<std::size_t>(n) * dim, 0.0);
  std::vector<double> ham_residuals(n, 0.0);

  const int R = config.grid.resolution;
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t idx) {
    int i = static_cast<int>(idx);
    auto y = trajectory.state(i);
    Vec u = trajectory.slope(i);
    double l_here = lagrangian.value(y, u);

    // 1-D convexification: along the velocity axis for dim 1, along the ray
    // through u_i for radial integrands in higher dimension.
    Vec dir(dim, 0.0);
    double s_here;  // coordinate of u_i on the section axis
    if (dim == 1) {
      dir[0] = 1.0;
      s_here = u[0];
    } else {
      if (!lagrangian.gauge.radial)
        throw ConfigError(
            "convexified variant needs dim 1 or a radial integrand");
      double r = norm(u);
      s_here = r;
      if (r == 0.0)
        dir[0] = 1.0;
      else
        for (int k = 0; k < dim; ++k) dir[k] = u[k] / r;
    }

    // Sample grid along the section, anchored so s_here is a node.
    const int M = static_cast<int>(std::ceil(config.u_radius * R));
    std::vector<double> grid, vals;
    grid.reserve(2 * M + 1);
    vals.reserve(2 * M + 1);
    Vec point(dim);
    for (int m = -M; m <= M; ++m) {
      double s = s_here + static_cast<double>(m) / R;
      grid.push_back(s);
      for (int c = 0; c < dim; ++c) point[c] = s * dir[c];
      vals.push_back(lagrangian.value(y, point));
    }
    SampledFunction1D section(std::move(grid), std::move(vals));
    SampledFunction1D hull = lower_convex_envelope_1d(section);

    double l_hull = hull.interpolate(s_here);
    if (std::abs(l_hull - l_here) >
        config.hypothesis_tol * (1.0 + std::abs(l_here)))
      throw HypothesisFailed(
          "integrand does not touch its convexification along the curve");

    OneSidedDerivatives d = one_sided_derivatives(hull, s_here);
    double p_scalar = min_norm_in_interval(d.left, d.right);
    for (int c = 0; c < dim; ++c)
      report.costates[idx * dim + c] = p_scalar * dir[c];

    // Hamiltonian value at the costate from the same section samples:
    // H = max_s { p*s - L(y, s dir) }.
    double h = -kInf;
    for (std::size_t k = 0; k < section.size(); ++k)
      if (std::isfinite(section.ordinates[k]))
        h = std::max(h, p_scalar * section.abscissae[k] -
                            section.ordinates[k]);
    ham_residuals[idx] = h;
  });

  std::vector<bool> vacuous(n, false);
  finish_gradient_report(lagrangian, trajectory, vacuous, report);
  for (int i = 0; i < n; ++i)
    report.hamiltonian_residual =
        std::max(report.hamiltonian_residual,
                 std::abs(ham_residuals[i] + report.constant));
  return report;
}

namespace {

DbrReport gradient_variant(const LagrangianSpec& lagrangian,
                           const Trajectory& trajectory,
                           const DbrConfig& config, const std::string& name) {
  const int dim = trajectory.dim;
  const int n = trajectory.steps();
  if (n < 1) throw ConfigError("empty trajectory");

  DbrReport report;
  report.variant = name;
  report.costates.assign(static_cast<std::size_t>(n) * dim, 0.0);
  std::vector<bool> vacuous(n, false);
  std::vector<std::vector<std::vector<double>>> all_sets(n);

  parallel_for(static_cast<std::size_t>(n), [&](std::size_t idx) {
    int i = static_cast<int>(idx);
    auto y = trajectory.state(i);
    Vec u = trajectory.slope(i);
    FieldFn section = [&lagrangian, y](std::span<const double> w) {
      return lagrangian.value(y, w);
    };
    std::vector<std::vector<double>> set;
    if (name == "clarke") {
      ClarkeInterval iv = clarke_gradient_1d(
          [&](double s) {
            double w = s;
            return lagrangian.value(y, {&w, 1});
          },
          u[0], config.clarke_steps);
      set.push_back({min_norm_in_interval(iv.lo, iv.hi)});
    } else if (name == "subdiff") {
      set = subdifferential(section, u, config.lattice);
    } else {
      set = superdifferential(section, u, config.lattice);
    }
    if (set.empty()) {
      vacuous[idx] = true;
      return;
    }
    // Deterministic min-norm selection.
    std::size_t best = 0;
    double best_norm = kInf;
    for (std::size_t s = 0; s < set.size(); ++s) {
      double nn = norm(set[s]);
      if (nn < best_norm) {
        best_norm = nn;
        best = s;
      }
    }
    for (int c = 0; c < dim; ++c)
      report.costates[idx * dim + c] = set[best][c];
    all_sets[idx] = std::move(set);
  });

  finish_gradient_report(lagrangian, trajectory, vacuous, report);

  if (name == "superdiff") {
    // The constancy must hold for every lattice element, not only the
    // selected one.
    for (int i = 0; i < n; ++i) {
      if (vacuous[i]) continue;
      Vec u = trajectory.slope(i);
      double l = lagrangian.value(trajectory.state(i), u);
      for (const auto& p : all_sets[i])
        report.residual =
            std::max(report.residual,
                     std::abs(l - dot(p, u) - report.constant));
    }
  }
  return report;
}

}  // namespace

DbrReport dbr_subdifferential(const LagrangianSpec& lagrangian,
                              const Trajectory& trajectory,
                              const DbrConfig& config) {
  if (!lagrangian.flags.semiconvex_in_u &&
      !lagrangian.flags.differentiable_in_u)
    throw FlagMissing(
        "subdifferential costates need semiconvex_in_u or "
        "differentiable_in_u");
  return gradient_variant(lagrangian, trajectory, config, "subdiff");
}

DbrReport dbr_clarke(const LagrangianSpec& lagrangian,
                     const Trajectory& trajectory, const DbrConfig& config) {
  if (!lagrangian.flags.lipschitz_in_u)
    throw FlagMissing("clarke costates need lipschitz_in_u");
  if (trajectory.dim != 1)
    throw ConfigError("clarke costates are implemented for dim 1");
  return gradient_variant(lagrangian, trajectory, config, "clarke");
}

DbrReport dbr_superdifferential(const LagrangianSpec& lagrangian,
                                const Trajectory& trajectory,
                                const DbrConfig& config) {
  return gradient_variant(lagrangian, trajectory, config, "superdiff");
}

}  // namespace varcalc
