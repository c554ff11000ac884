#include "varcalc/value.hpp"

#include <algorithm>
#include <cmath>

#include "varcalc/errors.hpp"
#include "varcalc/parallel.hpp"

namespace varcalc {

namespace {

double axis_step(const GridAxis& a) {
  return 2.0 * a.half_width / (a.resolution - 1);
}

double axis_origin(const GridAxis& a) { return a.center - a.half_width; }

// Linear blend that is exact at the endpoints and +inf whenever a corner
// with positive weight is +inf.
double lerp_extended(double a, double b, double w) {
  if (w <= 0.0) return a;
  if (w >= 1.0) return b;
  if (!std::isfinite(a) || !std::isfinite(b)) return kInf;
  return a + w * (b - a);
}

}  // namespace

double ValueGrid::slope_of(int k, int i) const {
  int j = best[static_cast<std::size_t>(k) * states + i];
  if (j < 0) throw ConfigError("no optimal step stored at this node");
  return (x[j] - x[i]) / tau;
}

double ValueGrid::sample_field(std::span<const double> field, double t,
                               double xq) const {
  if (field.size() % static_cast<std::size_t>(states) != 0 || field.empty())
    throw DimensionMismatch("field does not tile the state lattice");
  const int layers = static_cast<int>(field.size() / states) - 1;
  double ft = t / tau;
  if (ft < -1e-9 || ft > layers + 1e-9) return kInf;
  const double step = axis_step(axis);
  double fx = (xq - axis_origin(axis)) / step;
  if (fx < -1e-9 || fx > states - 1 + 1e-9) return kInf;
  ft = std::clamp(ft, 0.0, static_cast<double>(layers));
  fx = std::clamp(fx, 0.0, static_cast<double>(states - 1));
  int k = std::min(static_cast<int>(ft), std::max(0, layers - 1));
  int i = std::min(static_cast<int>(fx), states - 2);
  double wt = ft - k;
  double wx = fx - i;
  auto at = [&](int kk, int ii) {
    return field[static_cast<std::size_t>(kk) * states + ii];
  };
  double low = lerp_extended(at(k, i), at(k, i + 1), wx);
  if (wt <= 0.0) return low;
  double high = lerp_extended(at(k + 1, i), at(k + 1, i + 1), wx);
  return lerp_extended(low, high, wt);
}

ValueGrid compute_value_grid(const LagrangianSpec& lagrangian,
                             const TerminalCost& phi, double horizon,
                             const ValueGridConfig& config) {
  if (lagrangian.dim != 1)
    throw ConfigError("value grids support one-dimensional states");
  if (!(horizon > 0.0)) throw ConfigError("horizon must be positive");
  if (config.time_steps < 1) throw ConfigError("need at least one time step");
  if (config.extra_layers < 0) throw ConfigError("extra layers must be >= 0");
  if (config.axis.resolution < 3 || !(config.axis.half_width > 0.0))
    throw ConfigError("state axis needs at least three nodes");

  ValueGrid g;
  g.tau = horizon / config.time_steps;
  g.horizon = horizon;
  g.horizon_layers = config.time_steps;
  g.total_layers = config.time_steps + config.extra_layers;
  g.axis = config.axis;
  g.states = config.axis.resolution;
  const double step = axis_step(g.axis);
  g.reach =
      static_cast<int>(std::floor(config.slope_cap * g.tau / step + 1e-9));
  if (g.reach < 1)
    throw ConfigError("slope cap does not reach the next lattice node");
  g.x.resize(g.states);
  for (int i = 0; i < g.states; ++i) g.x[i] = axis_origin(g.axis) + step * i;

  const std::size_t layer_size = static_cast<std::size_t>(g.states);
  g.v.assign(static_cast<std::size_t>(g.total_layers + 1) * layer_size, kInf);
  g.best.assign(g.v.size(), -1);

  bool any_finite = false;
  for (int i = 0; i < g.states; ++i) {
    double val = phi.value({&g.x[i], 1});
    if (std::isnan(val)) throw NonFiniteState("terminal cost returned NaN");
    g.v[i] = val;
    any_finite = any_finite || std::isfinite(val);
  }
  if (!any_finite)
    throw AllInfiniteLayer("terminal cost is infinite on the whole lattice");

  // Velocity sections, cached once: the integrand is autonomous, so the
  // transition cost from x_i with lattice offset `off` never changes across
  // layers.  Slopes use the same (to - from) / tau expression as Trajectory,
  // keeping extracted paths bitwise consistent with the recursion.
  const int width = 2 * g.reach + 1;
  std::vector<double> section(layer_size * width, kInf);
  parallel_for(layer_size, [&](std::size_t ii) {
    int i = static_cast<int>(ii);
    for (int off = -g.reach; off <= g.reach; ++off) {
      int j = i + off;
      if (j < 0 || j >= g.states) continue;
      double u = (g.x[j] - g.x[i]) / g.tau;
      double l = lagrangian.value({&g.x[i], 1}, {&u, 1});
      if (std::isnan(l)) throw NonFiniteState("integrand returned NaN");
      section[ii * width + (off + g.reach)] = l;
    }
  });

  for (int k = 1; k <= g.total_layers; ++k) {
    const double* prev = g.v.data() + static_cast<std::size_t>(k - 1) * layer_size;
    double* cur = g.v.data() + static_cast<std::size_t>(k) * layer_size;
    int* arg = g.best.data() + static_cast<std::size_t>(k) * layer_size;
    parallel_for(layer_size, [&](std::size_t ii) {
      int i = static_cast<int>(ii);
      double best_cost = kInf;
      int best_j = -1;
      for (int off = -g.reach; off <= g.reach; ++off) {
        int j = i + off;
        if (j < 0 || j >= g.states) continue;
        double l = section[ii * width + (off + g.reach)];
        if (!std::isfinite(l)) continue;
        double pv = prev[j];
        if (!std::isfinite(pv)) continue;
        double cost = g.tau * l + pv;
        if (cost < best_cost) {  // strict: ties keep the lowest index j
          best_cost = cost;
          best_j = j;
        }
      }
      cur[ii] = best_j >= 0 ? best_cost : kInf;
      arg[ii] = best_j;
    });
    bool finite_somewhere = false;
    for (int i = 0; i < g.states && !finite_somewhere; ++i)
      finite_somewhere = std::isfinite(cur[i]);
    if (!finite_somewhere)
      throw AllInfiniteLayer("value layer became infinite everywhere");
  }
  return g;
}

Trajectory extract_dp_path(const ValueGrid& grid, double x_start) {
  const double step = axis_step(grid.axis);
  double fi = (x_start - axis_origin(grid.axis)) / step;
  long nearest = std::lround(fi);
  if (nearest < 0 || nearest >= grid.states ||
      std::abs(fi - static_cast<double>(nearest)) > 1e-6)
    throw TrajectoryOffGrid("start state is not a lattice node");

  Trajectory traj;
  traj.t0 = 0.0;
  traj.dt = grid.tau;
  traj.dim = 1;
  traj.states.reserve(grid.horizon_layers + 1);
  int cur = static_cast<int>(nearest);
  traj.states.push_back(grid.x[cur]);
  for (int k = grid.horizon_layers; k > 0; --k) {
    int j = grid.best[static_cast<std::size_t>(k) * grid.states + cur];
    if (j < 0)
      throw CostOverflow("no optimal step from an infinite-value state");
    traj.states.push_back(grid.x[j]);
    cur = j;
  }
  return traj;
}

// ---------------------------------------------------------------------------
// Relaxed integrand estimators
// ---------------------------------------------------------------------------

namespace {

struct InnerPath {
  double cost = kInf;
  std::vector<double> offsets;  // relative to the straight interpolant
};

// Small DP over per-node offsets around the straight path from x_from to
// x_to.  `centers` shifts the offset window per node (used by refinement);
// both endpoints are pinned to offset zero.
InnerPath inner_dp(const LagrangianSpec& lagrangian, double x_from,
                   double x_to, double h, int substeps, int half_width,
                   double unit, const std::vector<double>& centers) {
  const int width = 2 * half_width + 1;
  const double delta = h / substeps;
  auto position = [&](int r, int w) {
    double base =
        x_from + (static_cast<double>(r) / substeps) * (x_to - x_from);
    return base + centers[r] + (w - half_width) * unit;
  };
  auto admissible = [&](int r, int w) {
    return (r > 0 && r < substeps) || w == half_width;
  };

  std::vector<double> cost(width, kInf), next(width, kInf);
  cost[half_width] = 0.0;
  std::vector<int> pred(static_cast<std::size_t>(substeps) * width, -1);
  for (int r = 0; r < substeps; ++r) {
    std::fill(next.begin(), next.end(), kInf);
    for (int w2 = 0; w2 < width; ++w2) {
      if (!admissible(r + 1, w2)) continue;
      double best_cost = kInf;
      int best_w = -1;
      for (int w1 = 0; w1 < width; ++w1) {
        if (!admissible(r, w1) || !std::isfinite(cost[w1])) continue;
        double p1 = position(r, w1);
        double p2 = position(r + 1, w2);
        double u = (p2 - p1) / delta;
        double l = lagrangian.value({&p1, 1}, {&u, 1});
        if (std::isnan(l)) throw NonFiniteState("integrand returned NaN");
        if (!std::isfinite(l)) continue;
        double c = cost[w1] + delta * l;
        if (c < best_cost) {
          best_cost = c;
          best_w = w1;
        }
      }
      next[w2] = best_cost;
      pred[static_cast<std::size_t>(r) * width + w2] = best_w;
    }
    cost.swap(next);
  }

  InnerPath out;
  out.cost = cost[half_width];
  out.offsets.assign(substeps + 1, 0.0);
  if (std::isfinite(out.cost)) {
    int w = half_width;
    for (int r = substeps; r > 0; --r) {
      out.offsets[r] = centers[r] + (w - half_width) * unit;
      w = pred[static_cast<std::size_t>(r - 1) * width + w];
    }
    out.offsets[0] = centers[0];
  }
  return out;
}

double inner_infimum(const LagrangianSpec& lagrangian, double x_from,
                     double x_to, double h,
                     const RelaxedIntegrandConfig& cfg) {
  const int m = cfg.inner_steps;
  const int half_width = cfg.inner_states / 2;
  const double delta = h / m;
  std::vector<double> centers(m + 1, 0.0);
  double unit = cfg.slope_unit * delta;
  InnerPath best = inner_dp(lagrangian, x_from, x_to, h, m, half_width, unit,
                            centers);
  for (int round = 0; round < cfg.refine && std::isfinite(best.cost);
       ++round) {
    centers = best.offsets;
    centers.front() = centers.back() = 0.0;
    unit *= 0.25;
    InnerPath refined = inner_dp(lagrangian, x_from, x_to, h, m, half_width,
                                 unit, centers);
    if (refined.cost < best.cost) best = refined;
  }
  return best.cost;
}

void validate_estimator_config(const LagrangianSpec& lagrangian,
                               const RelaxedIntegrandConfig& cfg) {
  if (lagrangian.dim != 1)
    throw ConfigError("relaxed integrand estimators are one-dimensional");
  if (!(cfg.h0 > 0.0) || cfg.levels < 1 || cfg.tail < 1 ||
      cfg.tail > cfg.levels)
    throw ConfigError("bad step schedule");
  if (cfg.inner_steps < 1 || cfg.inner_states < 3 ||
      cfg.inner_states % 2 == 0 || !(cfg.slope_unit > 0.0) || cfg.refine < 0)
    throw ConfigError("bad inner lattice");
}

RelaxedIntegrandEstimate run_estimator(const LagrangianSpec& lagrangian,
                                       double x, double u, bool into_x,
                                       const RelaxedIntegrandConfig& cfg) {
  validate_estimator_config(lagrangian, cfg);
  RelaxedIntegrandEstimate est;
  est.x = x;
  est.u = u;
  est.tail = cfg.tail;
  est.h.reserve(cfg.levels);
  est.averaged.reserve(cfg.levels);
  for (int j = 0; j < cfg.levels; ++j) {
    double h = std::ldexp(cfg.h0, -j);
    double from = into_x ? x - h * u : x;
    double to = into_x ? x : x + h * u;
    est.h.push_back(h);
    est.averaged.push_back(inner_infimum(lagrangian, from, to, h, cfg) / h);
  }
  est.lower = kInf;
  est.upper = -kInf;
  for (int j = cfg.levels - cfg.tail; j < cfg.levels; ++j) {
    est.lower = std::min(est.lower, est.averaged[j]);
    est.upper = std::max(est.upper, est.averaged[j]);
  }
  return est;
}

}  // namespace

RelaxedIntegrandEstimate estimate_upper_integrand(
    const LagrangianSpec& lagrangian, double x, double u,
    const RelaxedIntegrandConfig& config) {
  return run_estimator(lagrangian, x, u, /*into_x=*/true, config);
}

RelaxedIntegrandEstimate estimate_lower_integrand(
    const LagrangianSpec& lagrangian, double x, double u,
    const RelaxedIntegrandConfig& config) {
  return run_estimator(lagrangian, x, u, /*into_x=*/false, config);
}

// ---------------------------------------------------------------------------
// Hamiltonian sections
// ---------------------------------------------------------------------------

HamiltonianSection hamiltonian_section(const LagrangianSpec& lagrangian,
                                       double x,
                                       const std::vector<double>& p_grid,
                                       double u_max, int u_resolution,
                                       const RelaxedIntegrandConfig* estimator) {
  if (lagrangian.dim != 1)
    throw ConfigError("Hamiltonian sections are one-dimensional");
  if (p_grid.empty()) throw EmptyDualGrid("empty dual grid");
  if (!(u_max > 0.0) || u_resolution < 1)
    throw ConfigError("bad velocity grid");

  // Coercive-range guard: the certificate must testify that slopes beyond
  // the sampled box cannot carry the supremum for any requested p.
  double p_max = 0.0;
  for (double p : p_grid) p_max = std::max(p_max, std::abs(p));
  const auto& cert = lagrangian.gauge.certificate;
  double certified = 0.0;
  for (std::size_t i = 0; i < cert.level.size(); ++i)
    if (cert.level[i] <= u_max) certified = std::max(certified, cert.ratio[i]);
  if (certified < p_max)
    throw ConfigError("dual grid exceeds the certified coercive range");

  const int n = 2 * u_resolution + 1;
  std::vector<double> us(n), plain_vals(n);
  for (int k = 0; k < n; ++k) {
    us[k] = (k - u_resolution) * (u_max / u_resolution);
    plain_vals[k] = lagrangian.value({&x, 1}, {&us[k], 1});
    if (std::isnan(plain_vals[k]))
      throw NonFiniteState("integrand returned NaN");
  }

  HamiltonianSection out;
  out.p = p_grid;
  Conjugate1D plain = legendre_fenchel(
      SampledFunction1D(us, plain_vals), p_grid);
  out.plain = plain.transform.ordinates;
  out.truncated = plain.truncated;

  if (estimator) {
    std::vector<double> upper_vals(n), lower_vals(n);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t k) {
      upper_vals[k] =
          estimate_upper_integrand(lagrangian, x, us[k], *estimator).upper;
      lower_vals[k] =
          estimate_lower_integrand(lagrangian, x, us[k], *estimator).lower;
    });
    out.upper =
        legendre_fenchel(SampledFunction1D(us, upper_vals), p_grid)
            .transform.ordinates;
    out.lower =
        legendre_fenchel(SampledFunction1D(us, lower_vals), p_grid)
            .transform.ordinates;
  }
  return out;
}

}  // namespace varcalc
