#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "varcalc/errors.hpp"
#include "varcalc/parallel.hpp"
#include "varcalc/value.hpp"

namespace varcalc {

namespace {

double axis_step(const GridAxis& a) {
  return 2.0 * a.half_width / (a.resolution - 1);
}

double axis_origin(const GridAxis& a) { return a.center - a.half_width; }

// Extremes of difference quotients of `field` at (t, x) in the space-time
// direction (t_dir, u + delta) over a geometric step schedule and a small
// direction fan.  Probes outside the field are +inf, so the extremes stay
// conservative; an infinite base value yields an unusable (inf, -inf) pair.
struct QuotientExtremes {
  double lower = kInf;
  double upper = -kInf;
  bool valid = false;
};

QuotientExtremes probe_quotients(const ValueGrid& grid,
                                 std::span<const double> field, double t,
                                 double x, double t_dir, double u,
                                 const ProbeSchedule& sched,
                                 std::span<const double> deltas) {
  if (sched.levels < 1 || sched.tail < 1 || sched.tail > sched.levels)
    throw ConfigError("bad probe schedule");
  if (deltas.empty()) throw EmptyFan("empty direction fan");
  QuotientExtremes q;
  double base = grid.sample_field(field, t, x);
  if (!std::isfinite(base)) return q;
  const double h0 = sched.h0 > 0.0 ? sched.h0 : grid.tau;
  for (int j = sched.levels - sched.tail; j < sched.levels; ++j) {
    double h = std::ldexp(h0, -j);
    for (double d : deltas) {
      double val = grid.sample_field(field, t + t_dir * h, x + h * (u + d));
      double quot = (val - base) / h;
      q.lower = std::min(q.lower, quot);
      q.upper = std::max(q.upper, quot);
    }
  }
  q.valid = true;
  return q;
}

// Jump-robust lattice proxy for lower semicontinuity at interior samples: a
// finite value sticking out above both neighbors is a downward-jump witness
// the limit cannot repair.  Comparing against the larger neighbor keeps
// smooth slopes (which a raw min-neighbor test would flag) out of the count.
template <typename At>
int lsc_proxy_violations(int n, const At& at, double tol) {
  int violations = 0;
  for (int i = 1; i + 1 < n; ++i) {
    double v = at(i);
    if (!std::isfinite(v)) continue;
    double nb = std::max(at(i - 1), at(i + 1));
    if (v > nb + tol) ++violations;
  }
  return violations;
}

}  // namespace

// ---------------------------------------------------------------------------
// Initial attainment
// ---------------------------------------------------------------------------

AttainmentReport check_initial_attainment(const ValueGrid& grid,
                                          const TerminalCost& phi,
                                          const AttainmentConfig& config) {
  if (config.cone_layers < 1 || config.cone_layers > grid.total_layers ||
      !(config.cone_slope >= 0.0))
    throw ConfigError("bad attainment cone");
  AttainmentReport rep;
  std::vector<double> ph(grid.states);
  rep.initial_exact = true;
  for (int i = 0; i < grid.states; ++i) {
    ph[i] = phi.value({&grid.x[i], 1});
    if (std::isnan(ph[i])) throw NonFiniteState("terminal cost returned NaN");
    if (ph[i] != grid.value(0, i)) rep.initial_exact = false;
  }

  rep.lsc_violations = lsc_proxy_violations(
      grid.states, [&](int i) { return ph[i]; }, config.tol);

  const double step = axis_step(grid.axis);
  for (int i = 0; i < grid.states; ++i) {
    if (!std::isfinite(ph[i])) continue;  // no finite target to undershoot
    ++rep.cone_checked;
    double cone_min = kInf;
    for (int k = 1; k <= config.cone_layers; ++k) {
      double radius = config.cone_slope * (k * grid.tau);
      int di = static_cast<int>(std::floor(radius / step + 1e-9));
      int lo = std::max(0, i - di);
      int hi = std::min(grid.states - 1, i + di);
      for (int j = lo; j <= hi; ++j)
        cone_min = std::min(cone_min, grid.value(k, j));
    }
    double gap = ph[i] - cone_min;  // positive = V dips below phi(x0)
    rep.worst_gap = std::max(rep.worst_gap, gap);
    if (gap > config.tol) ++rep.cone_failures;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Local Lipschitz table
// ---------------------------------------------------------------------------

LipschitzTable lipschitz_estimate_V(const ValueGrid& grid,
                                    const Region& region, int t_cells,
                                    int x_cells) {
  if (t_cells < 1 || x_cells < 1) throw ConfigError("need positive cells");
  const double step = axis_step(grid.axis);
  const double origin = axis_origin(grid.axis);
  int k0 = std::max(0, static_cast<int>(std::ceil(region.t_min / grid.tau - 1e-9)));
  int k1 = std::min(grid.horizon_layers,
                    static_cast<int>(std::floor(region.t_max / grid.tau + 1e-9)));
  int i0 = std::max(0, static_cast<int>(std::ceil((region.x_min - origin) / step - 1e-9)));
  int i1 = std::min(grid.states - 1,
                    static_cast<int>(std::floor((region.x_max - origin) / step + 1e-9)));
  if (k0 > k1 || i0 > i1) throw ConfigError("region misses the grid");

  LipschitzTable table;
  table.t_cells = t_cells;
  table.x_cells = x_cells;
  table.constant.assign(static_cast<std::size_t>(t_cells) * x_cells, 0.0);
  auto cell_range = [](int lo, int hi, int cells, int c) {
    int n = hi - lo + 1;
    int a = lo + (n * c) / cells;
    int b = lo + (n * (c + 1)) / cells - 1;
    return std::pair<int, int>(a, b);
  };
  for (int ct = 0; ct < t_cells; ++ct) {
    auto [ka, kb] = cell_range(k0, k1, t_cells, ct);
    for (int cx = 0; cx < x_cells; ++cx) {
      auto [ia, ib] = cell_range(i0, i1, x_cells, cx);
      double best = 0.0;
      for (int k = ka; k <= kb; ++k) {
        for (int i = ia; i <= ib; ++i) {
          double v = grid.value(k, i);
          if (!std::isfinite(v)) continue;
          if (k + 1 <= kb && std::isfinite(grid.value(k + 1, i)))
            best = std::max(best,
                            std::abs(grid.value(k + 1, i) - v) / grid.tau);
          if (i + 1 <= ib && std::isfinite(grid.value(k, i + 1)))
            best = std::max(best, std::abs(grid.value(k, i + 1) - v) / step);
        }
      }
      table.constant[static_cast<std::size_t>(ct) * x_cells + cx] = best;
      table.overall = std::max(table.overall, best);
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// Hamilton-Jacobi residuals
// ---------------------------------------------------------------------------

namespace {

struct LayerAccumulator {
  long visited = 0;
  long smooth = 0;
  long super_violations = 0;
  long sub_violations = 0;
  double worst_super = 0.0;
  double worst_sub = 0.0;
  long raw_points = 0;
  long raw_sup_violations = 0;
  long raw_sub_violations = 0;
  double worst_raw_sup = -kInf;
  double worst_raw_sub = -kInf;
  std::vector<HjPointFinding> findings;
};

}  // namespace

HjResidualReport hj_residuals(const ValueGrid& grid,
                              const LagrangianSpec& lagrangian,
                              const HjConfig& config) {
  if (lagrangian.dim != 1)
    throw ConfigError("residual reports are one-dimensional");
  int k_hi = config.k_hi < 0 ? grid.horizon_layers : config.k_hi;
  if (config.k_lo < 1 || k_hi > grid.total_layers - 1 || config.k_lo > k_hi)
    throw ConfigError("layer window out of range");
  if (config.t_stride < 1 || config.x_stride < 1 || config.raw_stride < 1)
    throw ConfigError("strides must be positive");
  const int margin = std::max(1, config.i_margin);
  if (2 * margin >= grid.states - 1)
    throw ConfigError("margin swallows the whole axis");
  const double step = axis_step(grid.axis);

  // The directional checks displace the state by up to (|u| + delta) * h for
  // the coarsest probe step; closer to the boundary the quotients would read
  // the box truncation, not the value function.
  double fan_reach = 0.0;
  for (double u : config.raw_fan) fan_reach = std::max(fan_reach, std::abs(u));
  double delta_reach = 0.0;
  for (double d : config.fan_deltas)
    delta_reach = std::max(delta_reach, std::abs(d));
  double h_coarse = config.schedule.h0 > 0 ? config.schedule.h0 : grid.tau;
  h_coarse = std::ldexp(h_coarse,
                        -(config.schedule.levels - config.schedule.tail));
  const int raw_margin = std::max(
      margin,
      static_cast<int>(
          std::ceil((fan_reach + delta_reach) * h_coarse / step)) +
          1);

  // Direct velocity sections over the lattice-reachable slopes; the same
  // transition set the recursion itself used, so the conjugate cancels the
  // scheme's own discretization at Bellman-optimal points.
  const int width = 2 * grid.reach + 1;
  std::vector<double> u_tab(static_cast<std::size_t>(grid.states) * width,
                            0.0);
  std::vector<double> l_tab(u_tab.size(), kInf);
  parallel_for(static_cast<std::size_t>(grid.states), [&](std::size_t ii) {
    int i = static_cast<int>(ii);
    for (int off = -grid.reach; off <= grid.reach; ++off) {
      int j = i + off;
      if (j < 0 || j >= grid.states) continue;
      double u = (grid.x[j] - grid.x[i]) / grid.tau;
      u_tab[ii * width + (off + grid.reach)] = u;
      l_tab[ii * width + (off + grid.reach)] =
          lagrangian.value({&grid.x[i], 1}, {&u, 1});
    }
  });

  const bool direct = config.source == IntegrandSource::kDirect;
  std::vector<int> layers;
  for (int k = config.k_lo; k <= k_hi; k += config.t_stride)
    layers.push_back(k);
  std::vector<LayerAccumulator> acc(layers.size());

  parallel_for(layers.size(), [&](std::size_t a) {
    const int k = layers[a];
    LayerAccumulator& A = acc[a];
    const double t = k * grid.tau;
    for (int i = margin; i <= grid.states - 1 - margin; i += config.x_stride) {
      ++A.visited;
      double v0 = grid.value(k, i);
      double vl = grid.value(k, i - 1);
      double vr = grid.value(k, i + 1);
      double vt = grid.value(k + 1, i);
      if (!std::isfinite(v0) || !std::isfinite(vl) || !std::isfinite(vr) ||
          !std::isfinite(vt))
        continue;
      double left = (v0 - vl) / step;
      double right = (vr - v0) / step;
      if (std::abs(right - left) > config.kink_tol) continue;
      ++A.smooth;
      double p_x = (vr - vl) / (2.0 * step);
      double p_t = (vt - v0) / grid.tau;
      double q = -p_x;

      double h_lower = -kInf;  // conjugate of the lower integrand
      double h_upper = -kInf;  // conjugate of the upper integrand
      for (int off = -grid.reach; off <= grid.reach; ++off) {
        int j = i + off;
        if (j < 0 || j >= grid.states) continue;
        double u = u_tab[static_cast<std::size_t>(i) * width +
                         (off + grid.reach)];
        double l = l_tab[static_cast<std::size_t>(i) * width +
                         (off + grid.reach)];
        double l_lo = l, l_up = l;
        if (!direct) {
          l_lo = estimate_lower_integrand(lagrangian, grid.x[i], u,
                                          config.estimator)
                     .lower;
          l_up = estimate_upper_integrand(lagrangian, grid.x[i], u,
                                          config.estimator)
                     .upper;
        }
        if (std::isfinite(l_lo)) h_lower = std::max(h_lower, q * u - l_lo);
        if (std::isfinite(l_up)) h_upper = std::max(h_upper, q * u - l_up);
      }

      double r_super = p_t + h_lower;  // must stay >= -tol
      double r_sub = p_t + h_upper;    // must stay <= tol
      A.worst_super = std::min(A.worst_super, r_super);
      A.worst_sub = std::max(A.worst_sub, r_sub);
      if (r_super < -config.tol) {
        ++A.super_violations;
        A.findings.push_back({k, i, r_super, "super"});
      }
      if (r_sub > config.tol) {
        ++A.sub_violations;
        A.findings.push_back({k, i, r_sub, "sub"});
      }

      if (k % config.raw_stride == 0 && i >= raw_margin &&
          i + raw_margin <= grid.states - 1 &&
          (i - raw_margin) % config.raw_stride == 0) {
        ++A.raw_points;
        // Existential inequality: some direction makes the lower quotient
        // dominate -L; the stored optimal slope is the natural witness.
        std::vector<double> candidates;
        if (grid.best[static_cast<std::size_t>(k) * grid.states + i] >= 0)
          candidates.push_back(grid.slope_of(k, i));
        candidates.insert(candidates.end(), config.raw_fan.begin(),
                          config.raw_fan.end());
        double best = kInf;
        for (double u : candidates) {
          QuotientExtremes qe =
              probe_quotients(grid, grid.v, t, grid.x[i], -1.0, u,
                              config.schedule, config.fan_deltas);
          double l_lo = direct
                            ? lagrangian.value({&grid.x[i], 1}, {&u, 1})
                            : estimate_lower_integrand(lagrangian, grid.x[i],
                                                       u, config.estimator)
                                  .lower;
          best = std::min(best, qe.lower + l_lo);
        }
        A.worst_raw_sup = std::max(A.worst_raw_sup, best);
        if (best > config.tol) {
          ++A.raw_sup_violations;
          A.findings.push_back({k, i, best, "exists"});
        }
        // Universal inequality: every fan direction keeps the upper
        // quotient below the upper integrand.
        double worst_dir = -kInf;
        for (double u : config.raw_fan) {
          QuotientExtremes qe =
              probe_quotients(grid, grid.v, t, grid.x[i], 1.0, -u,
                              config.schedule, config.fan_deltas);
          double l_up = direct
                            ? lagrangian.value({&grid.x[i], 1}, {&u, 1})
                            : estimate_upper_integrand(lagrangian, grid.x[i],
                                                       u, config.estimator)
                                  .upper;
          worst_dir = std::max(worst_dir, qe.upper - l_up);
        }
        A.worst_raw_sub = std::max(A.worst_raw_sub, worst_dir);
        if (worst_dir > config.tol) {
          ++A.raw_sub_violations;
          A.findings.push_back({k, i, worst_dir, "forall"});
        }
      }
    }
  });

  HjResidualReport rep;
  long visited = 0;
  double raw_sup = -kInf, raw_sub = -kInf;
  std::vector<HjPointFinding> findings;
  for (const auto& A : acc) {
    visited += A.visited;
    rep.points_checked += A.smooth;
    rep.super_violations += A.super_violations;
    rep.sub_violations += A.sub_violations;
    rep.worst_super = std::min(rep.worst_super, A.worst_super);
    rep.worst_sub = std::max(rep.worst_sub, A.worst_sub);
    rep.raw_points += A.raw_points;
    rep.raw_sup_violations += A.raw_sup_violations;
    rep.raw_sub_violations += A.raw_sub_violations;
    raw_sup = std::max(raw_sup, A.worst_raw_sup);
    raw_sub = std::max(raw_sub, A.worst_raw_sub);
    findings.insert(findings.end(), A.findings.begin(), A.findings.end());
  }
  rep.worst_raw_sup = rep.raw_points ? raw_sup : 0.0;
  rep.worst_raw_sub = rep.raw_points ? raw_sub : 0.0;
  rep.smooth_fraction =
      visited ? static_cast<double>(rep.points_checked) / visited : 1.0;
  std::sort(findings.begin(), findings.end(),
            [](const HjPointFinding& a, const HjPointFinding& b) {
              double ma = std::abs(a.residual), mb = std::abs(b.residual);
              if (ma != mb) return ma > mb;
              if (a.k != b.k) return a.k < b.k;
              if (a.i != b.i) return a.i < b.i;
              return a.kind < b.kind;
            });
  if (findings.size() > 10) findings.resize(10);
  rep.worst = std::move(findings);
  return rep;
}

// ---------------------------------------------------------------------------
// Dini monotonicity
// ---------------------------------------------------------------------------

DiniReport dini_monotonicity(const std::vector<double>& f, double dt,
                             const std::vector<double>* dominator,
                             double tol) {
  if (f.size() < 2 || !(dt > 0.0))
    throw ConfigError("need two samples and a positive step");
  if (dominator && dominator->size() != f.size() - 1)
    throw DimensionMismatch("dominator needs one sample per interval");
  if (!std::isfinite(f.front()) || !std::isfinite(f.back()))
    throw ConfigError("endpoint samples must be finite");

  DiniReport rep;
  double max_q = -kInf;
  bool any = false;
  for (std::size_t i = 0; i + 1 < f.size(); ++i) {
    if (std::isnan(f[i]) || std::isnan(f[i + 1]))
      throw NonFiniteState("sample is NaN");
    if (!std::isfinite(f[i]) && !std::isfinite(f[i + 1])) continue;
    max_q = std::max(max_q, (f[i + 1] - f[i]) / dt);
    any = true;
  }
  rep.max_quotient = any ? max_q : 0.0;
  rep.quotients_nonpositive = rep.max_quotient <= tol;
  rep.endpoint_gap = f.back() - f.front();
  rep.monotone_conclusion = rep.endpoint_gap <= tol;
  if (dominator) {
    for (double gi : *dominator) rep.budget += gi * dt;
    rep.dominated_conclusion = rep.endpoint_gap <= rep.budget + tol;
  }
  rep.lsc_violations = lsc_proxy_violations(
      static_cast<int>(f.size()), [&](int i) { return f[i]; }, tol);
  return rep;
}

// ---------------------------------------------------------------------------
// Comparison / maximality
// ---------------------------------------------------------------------------

ComparisonReport comparison_check(std::span<const double> candidate,
                                  const ValueGrid& grid,
                                  const LagrangianSpec& lagrangian,
                                  const TerminalCost& phi,
                                  const ComparisonConfig& config) {
  const std::size_t states = static_cast<std::size_t>(grid.states);
  if (candidate.size() % states != 0 ||
      candidate.size() / states <
          static_cast<std::size_t>(grid.horizon_layers) + 1)
    throw DimensionMismatch("candidate does not cover the horizon layers");
  std::span<const double> w = candidate.first(
      (static_cast<std::size_t>(grid.horizon_layers) + 1) * states);

  ComparisonReport rep;
  for (int i = 0; i < grid.states; ++i) {
    double p = phi.value({&grid.x[i], 1});
    double wi = w[i];
    if (std::isnan(p) || std::isnan(wi))
      throw NonFiniteState("initial layer produced NaN");
    double gap;
    if (!std::isfinite(p) && !std::isfinite(wi))
      gap = 0.0;
    else if (!std::isfinite(p) || !std::isfinite(wi))
      gap = kInf;
    else
      gap = std::abs(wi - p);
    rep.max_initial_gap = std::max(rep.max_initial_gap, gap);
  }
  if (rep.max_initial_gap > config.initial_tol) {
    rep.verdict = ComparisonVerdict::kNotAdmissible;
    return rep;
  }

  // Subsolution sample: upper quotients in directions (1, -u) against the
  // upper integrand, on interior points clear of the axis edge.
  const double step = axis_step(grid.axis);
  const double h0 = config.schedule.h0 > 0.0 ? config.schedule.h0 : grid.tau;
  const bool direct = config.source == IntegrandSource::kDirect;
  static constexpr double kDeltas[] = {0.0, -5e-3, 5e-3};
  double u_span = 0.0;
  for (double u : config.u_fan) u_span = std::max(u_span, std::abs(u) + 1e-2);
  int margin =
      std::max(1, static_cast<int>(std::ceil(u_span * h0 / step)) + 1);
  if (2 * margin >= grid.states - 1)
    throw ConfigError("fan margin swallows the whole axis");

  double worst = -kInf;
  for (int k = 0; k < grid.horizon_layers; k += config.t_stride) {
    double t = k * grid.tau;
    for (int i = margin; i <= grid.states - 1 - margin; i += config.x_stride) {
      if (!std::isfinite(w[static_cast<std::size_t>(k) * states + i]))
        continue;
      for (double u : config.u_fan) {
        QuotientExtremes qe =
            probe_quotients(grid, w, t, grid.x[i], 1.0, -u, config.schedule,
                            kDeltas);
        double l_up =
            direct ? lagrangian.value({&grid.x[i], 1}, {&u, 1})
                   : estimate_upper_integrand(lagrangian, grid.x[i], u,
                                              config.estimator)
                         .upper;
        double resid = qe.upper - l_up;
        ++rep.sub_checked;
        worst = std::max(worst, resid);
        if (resid > config.sub_tol && rep.violation_k < 0) {
          rep.violation_k = k;
          rep.violation_i = i;
        }
      }
    }
  }
  if (rep.sub_checked == 0) throw ConfigError("no subsolution samples");
  rep.worst_subsolution = worst;
  if (worst > config.sub_tol) {
    rep.verdict = ComparisonVerdict::kViolation;
    return rep;
  }

  rep.violation_k = rep.violation_i = -1;
  double excess = -kInf;
  for (int k = 0; k <= grid.horizon_layers; ++k) {
    for (int i = 0; i < grid.states; ++i) {
      double wi = w[static_cast<std::size_t>(k) * states + i];
      double vi = grid.value(k, i);
      if (!std::isfinite(wi)) {
        if (std::isfinite(vi)) {  // candidate infinite above a finite value
          excess = kInf;
          if (rep.violation_k < 0) {
            rep.violation_k = k;
            rep.violation_i = i;
          }
        }
        continue;
      }
      if (!std::isfinite(vi)) continue;  // dominated trivially
      double e = wi - vi;
      excess = std::max(excess, e);
      if (e > config.dominance_tol && rep.violation_k < 0) {
        rep.violation_k = k;
        rep.violation_i = i;
      }
    }
  }
  rep.max_excess = excess == -kInf ? 0.0 : excess;
  rep.verdict = rep.max_excess <= config.dominance_tol
                    ? ComparisonVerdict::kDominated
                    : ComparisonVerdict::kViolation;
  return rep;
}

// ---------------------------------------------------------------------------
// Differential-inclusion characterization
// ---------------------------------------------------------------------------

InclusionReport inclusion_check(const Trajectory& trajectory,
                                const ValueGrid& grid,
                                const LagrangianSpec& lagrangian,
                                const TerminalCost& phi,
                                const InclusionConfig& config) {
  if (trajectory.dim != 1)
    throw ConfigError("inclusion checks are one-dimensional");
  if (std::abs(trajectory.dt - grid.tau) > 1e-12 * std::max(1.0, grid.tau))
    throw ConfigError("trajectory step must equal the grid step");
  const int steps = trajectory.steps();
  if (steps != grid.horizon_layers)
    throw ConfigError("trajectory must span the grid horizon");

  const double step = axis_step(grid.axis);
  double fi = (trajectory.states[0] - axis_origin(grid.axis)) / step;
  long nearest = std::lround(fi);
  if (nearest < 0 || nearest >= grid.states ||
      std::abs(fi - static_cast<double>(nearest)) > 1e-6)
    throw TrajectoryOffGrid("start state is not a lattice node");

  InclusionReport rep;
  rep.nodes.resize(steps);
  int passes = 0, equal = 0;
  for (int s = 0; s < steps; ++s) {
    double y = trajectory.state(s)[0];
    double u = trajectory.slope(s)[0];
    double t_rem = (grid.horizon_layers - s) * grid.tau;
    double l = lagrangian.value({&y, 1}, {&u, 1});
    if (std::isnan(l)) throw NonFiniteState("integrand returned NaN");

    QuotientExtremes forward = probe_quotients(
        grid, grid.v, t_rem, y, -1.0, u, config.schedule, config.fan_deltas);
    QuotientExtremes backward = probe_quotients(
        grid, grid.v, t_rem, y, 1.0, -u, config.schedule, config.fan_deltas);

    InclusionNodeReport& node = rep.nodes[s];
    node.r_forward = forward.lower + l;
    node.r_backward = l - backward.upper;
    node.pass =
        node.r_forward <= config.tol || node.r_backward <= config.tol;
    double eq_gap = std::max(
        std::max(std::abs(forward.lower + l), std::abs(forward.upper + l)),
        std::max(std::abs(backward.lower - l),
                 std::abs(backward.upper - l)));
    node.equalities = eq_gap <= config.equality_tol;
    rep.worst_equality_gap = std::max(rep.worst_equality_gap, eq_gap);
    rep.max_r_forward = std::max(rep.max_r_forward, node.r_forward);
    passes += node.pass ? 1 : 0;
    equal += node.equalities ? 1 : 0;
  }
  rep.pass_fraction = static_cast<double>(passes) / steps;
  rep.equality_fraction = static_cast<double>(equal) / steps;

  ExtReal total = evaluate_action(lagrangian, trajectory);
  double end = trajectory.states.back();
  double terminal = phi.value({&end, 1});
  if (std::isnan(terminal)) throw NonFiniteState("terminal cost NaN");
  total += ExtReal(terminal);
  double v_start = grid.value(grid.horizon_layers, static_cast<int>(nearest));
  if (total.is_infinite())
    rep.action_excess = std::isfinite(v_start) ? kInf : 0.0;
  else if (!std::isfinite(v_start))
    rep.action_excess = -kInf;
  else
    rep.action_excess = total.value() - v_start;

  rep.verdict = (rep.pass_fraction >= config.pass_fraction &&
                 rep.action_excess <= config.action_tol)
                    ? InclusionVerdict::kMinimizer
                    : InclusionVerdict::kRejected;
  return rep;
}

}  // namespace varcalc
