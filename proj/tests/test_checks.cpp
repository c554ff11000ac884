#include <cmath>
#include <vector>

#include <doctest.h>

#include "varcalc/catalog.hpp"
#include "varcalc/errors.hpp"
#include "varcalc/value.hpp"

using namespace varcalc;

namespace {

const ValueGrid& dense_quadratic_grid() {
  static ValueGrid grid = [] {
    ValueGridConfig cfg;
    cfg.time_steps = 100;
    cfg.axis = GridAxis{0.0, 1.0, 801};
    return compute_value_grid(find_lagrangian("quadratic"),
                              find_terminal("quadratic_phi"), 1.0, cfg);
  }();
  return grid;
}

const ValueGrid& flat_grid() {
  static ValueGrid grid = [] {
    ValueGridConfig cfg;
    cfg.time_steps = 20;
    cfg.axis = GridAxis{0.0, 1.0, 101};
    return compute_value_grid(find_lagrangian("quadratic"),
                              find_terminal("zero"), 1.0, cfg);
  }();
  return grid;
}

// Candidate covering the horizon layers, filled from an explicit formula.
std::vector<double> candidate_from(const ValueGrid& grid,
                                   double (*f)(double, double)) {
  std::vector<double> w(static_cast<std::size_t>(grid.horizon_layers + 1) *
                        grid.states);
  for (int k = 0; k <= grid.horizon_layers; ++k)
    for (int i = 0; i < grid.states; ++i)
      w[static_cast<std::size_t>(k) * grid.states + i] =
          f(k * grid.tau, grid.x[i]);
  return w;
}

}  // namespace

TEST_CASE("HJ residuals of the dense quadratic value function") {
  const ValueGrid& grid = dense_quadratic_grid();
  HjConfig cfg;  // default strides: the raw pass fires only on its 8-aligned
                 // sublattice, so strided scans can miss it entirely
  HjResidualReport rep =
      hj_residuals(grid, find_lagrangian("quadratic"), cfg);
  CHECK(rep.points_checked > 1000);
  CHECK(rep.smooth_fraction >= 0.95);
  CHECK(rep.super_violations == 0);
  CHECK(rep.sub_violations == 0);
  CHECK(rep.worst_super >= -cfg.tol);
  CHECK(rep.worst_sub <= cfg.tol);
  CHECK(rep.raw_points > 50);
  CHECK(rep.raw_sup_violations * 100 <= rep.raw_points);
  CHECK(rep.raw_sub_violations * 100 <= rep.raw_points);
  CHECK(rep.worst.size() <= 10);
}

TEST_CASE("HJ residuals survive a state-dependent integrand") {
  ValueGridConfig vcfg;
  vcfg.time_steps = 50;
  vcfg.axis = GridAxis{0.0, 1.0, 401};
  ValueGrid grid = compute_value_grid(find_lagrangian("piecewise_x"),
                                      find_terminal("quadratic_phi"), 1.0,
                                      vcfg);
  HjConfig cfg;
  cfg.t_stride = 2;
  cfg.x_stride = 2;
  HjResidualReport rep =
      hj_residuals(grid, find_lagrangian("piecewise_x"), cfg);
  CHECK(rep.points_checked > 500);
  // the kink filter removes the x = 0 interface, the rest must verify
  CHECK(rep.super_violations * 100 <= rep.points_checked);
  CHECK(rep.sub_violations * 100 <= rep.points_checked);
  CHECK(rep.raw_sup_violations * 50 <= rep.raw_points);
  CHECK(rep.raw_sub_violations * 50 <= rep.raw_points);
}

TEST_CASE("a flat value field has identically zero residuals") {
  HjResidualReport rep =
      hj_residuals(flat_grid(), find_lagrangian("quadratic"), {});
  CHECK(rep.points_checked > 0);
  CHECK(rep.smooth_fraction == 1.0);
  CHECK(rep.super_violations == 0);
  CHECK(rep.sub_violations == 0);
  CHECK(rep.raw_sup_violations == 0);
  CHECK(rep.raw_sub_violations == 0);
  CHECK(rep.worst_super == 0.0);
  CHECK(rep.worst_sub == 0.0);
}

TEST_CASE("HJ config validation") {
  const ValueGrid& grid = dense_quadratic_grid();
  LagrangianSpec quad = find_lagrangian("quadratic");
  HjConfig cfg;
  cfg.k_lo = 0;
  CHECK_THROWS_AS(hj_residuals(grid, quad, cfg), ConfigError);
  cfg = {};
  cfg.k_hi = grid.total_layers;  // needs k+1 to exist
  CHECK_THROWS_AS(hj_residuals(grid, quad, cfg), ConfigError);
  cfg = {};
  cfg.t_stride = 0;
  CHECK_THROWS_AS(hj_residuals(grid, quad, cfg), ConfigError);
  cfg = {};
  cfg.fan_deltas.clear();
  CHECK_THROWS_AS(hj_residuals(grid, quad, cfg), EmptyFan);
  CHECK_THROWS_AS(hj_residuals(grid, find_lagrangian("quadratic", 2), {}),
                  ConfigError);
}

TEST_CASE("Dini quotients certify a decreasing sample") {
  std::vector<double> f(51);
  for (int i = 0; i <= 50; ++i) f[i] = 1.0 - 0.02 * i;  // 1 - t on [0,1]
  DiniReport rep = dini_monotonicity(f, 0.02);
  CHECK(rep.max_quotient == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(rep.quotients_nonpositive);
  CHECK(rep.monotone_conclusion);
  CHECK(rep.endpoint_gap == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(rep.lsc_violations == 0);
}

TEST_CASE("an increasing sample is caught unless a dominator pays for it") {
  std::vector<double> f(51);
  for (int i = 0; i <= 50; ++i) f[i] = 0.02 * i;  // t on [0,1]
  DiniReport plain = dini_monotonicity(f, 0.02);
  CHECK(!plain.quotients_nonpositive);
  CHECK(!plain.monotone_conclusion);
  std::vector<double> ones(50, 1.0);
  DiniReport paid = dini_monotonicity(f, 0.02, &ones);
  CHECK(paid.budget == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(paid.dominated_conclusion);
  CHECK(paid.endpoint_gap == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("value along an optimal path decreases exactly by the action") {
  const ValueGrid& grid = dense_quadratic_grid();
  Trajectory path = extract_dp_path(grid, 0.5);
  LagrangianSpec quad = find_lagrangian("quadratic");
  std::vector<double> gamma(static_cast<std::size_t>(path.steps()) + 1);
  std::vector<double> rate(static_cast<std::size_t>(path.steps()));
  for (int s = 0; s <= path.steps(); ++s) {
    double fi = (path.states[s] - (grid.axis.center - grid.axis.half_width)) /
                (2.0 * grid.axis.half_width / (grid.axis.resolution - 1));
    gamma[s] = grid.value(grid.horizon_layers - s,
                          static_cast<int>(std::lround(fi)));
  }
  for (int s = 0; s < path.steps(); ++s) {
    double y = path.state(s)[0];
    double u = path.slope(s)[0];
    rate[s] = quad.value({&y, 1}, {&u, 1});
  }
  DiniReport rep = dini_monotonicity(gamma, grid.tau, &rate);
  CHECK(rep.quotients_nonpositive);
  CHECK(rep.monotone_conclusion);
  CHECK(rep.dominated_conclusion);
  CHECK(std::abs(rep.endpoint_gap + rep.budget) <= 1e-9);
}

TEST_CASE("Dini validation") {
  std::vector<double> two = {1.0, 0.0};
  std::vector<double> bad_dom = {1.0, 1.0};
  CHECK_THROWS_AS(dini_monotonicity({}, 0.1), ConfigError);
  CHECK_THROWS_AS(dini_monotonicity(two, 0.0), ConfigError);
  CHECK_THROWS_AS(dini_monotonicity(two, 0.1, &bad_dom), DimensionMismatch);
  std::vector<double> inf_end = {kInf, 0.0};
  CHECK_THROWS_AS(dini_monotonicity(inf_end, 0.1), ConfigError);
  std::vector<double> with_nan = {1.0, std::nan(""), 0.0};
  CHECK_THROWS_AS(dini_monotonicity(with_nan, 0.1), NonFiniteState);
}

TEST_CASE("the value function dominates itself") {
  const ValueGrid& grid = dense_quadratic_grid();
  ComparisonConfig cfg;
  cfg.sub_tol = 5e-2;  // leave headroom for the scheme's quantization ripple
  ComparisonReport rep =
      comparison_check(grid.v, grid, find_lagrangian("quadratic"),
                       find_terminal("quadratic_phi"), cfg);
  CHECK(rep.verdict == ComparisonVerdict::kDominated);
  CHECK(rep.max_initial_gap == 0.0);
  CHECK(rep.max_excess == 0.0);
  CHECK(rep.sub_checked > 0);
}

TEST_CASE("a lifted candidate fails at the initial layer") {
  const ValueGrid& grid = dense_quadratic_grid();
  std::vector<double> w(grid.v.begin(),
                        grid.v.begin() +
                            static_cast<std::size_t>(grid.horizon_layers + 1) *
                                grid.states);
  for (double& wi : w) wi += 0.05;
  ComparisonReport rep =
      comparison_check(w, grid, find_lagrangian("quadratic"),
                       find_terminal("quadratic_phi"), {});
  CHECK(rep.verdict == ComparisonVerdict::kNotAdmissible);
  CHECK(rep.max_initial_gap == doctest::Approx(0.05).epsilon(1e-9));
}

TEST_CASE("a candidate frozen in time violates the subsolution sample") {
  const ValueGrid& grid = dense_quadratic_grid();
  std::vector<double> w =
      candidate_from(grid, [](double, double x) { return x * x; });
  ComparisonReport rep =
      comparison_check(w, grid, find_lagrangian("quadratic"),
                       find_terminal("quadratic_phi"), {});
  CHECK(rep.verdict == ComparisonVerdict::kViolation);
  CHECK(rep.worst_subsolution > 3e-2);
  CHECK(rep.violation_k >= 0);
  CHECK(rep.violation_i >= 0);
}

TEST_CASE("a slow drift passes the subsolution sample but overshoots V") {
  const ValueGrid& grid = flat_grid();
  std::vector<double> w =
      candidate_from(grid, [](double t, double) { return 0.028 * t; });
  ComparisonReport rep =
      comparison_check(w, grid, find_lagrangian("quadratic"),
                       find_terminal("zero"), {});
  CHECK(rep.verdict == ComparisonVerdict::kViolation);
  CHECK(rep.worst_subsolution <= 3e-2);  // drift itself is inside sub_tol
  CHECK(rep.max_excess == doctest::Approx(0.028).epsilon(1e-9));
  CHECK(rep.violation_k > 0);
}

TEST_CASE("comparison validation") {
  const ValueGrid& grid = dense_quadratic_grid();
  std::vector<double> w(static_cast<std::size_t>(grid.states) * 3);
  CHECK_THROWS_AS(comparison_check(w, grid, find_lagrangian("quadratic"),
                                   find_terminal("quadratic_phi"), {}),
                  DimensionMismatch);
}

TEST_CASE("the DP minimizer satisfies the inclusion characterization") {
  const ValueGrid& grid = dense_quadratic_grid();
  Trajectory path = extract_dp_path(grid, 0.5);
  LagrangianSpec quad = find_lagrangian("quadratic");
  TerminalCost phi = find_terminal("quadratic_phi");
  InclusionReport rep = inclusion_check(path, grid, quad, phi, {});
  CHECK(rep.verdict == InclusionVerdict::kMinimizer);
  CHECK(rep.pass_fraction >= 0.95);
  CHECK(rep.equality_fraction >= 0.90);
  CHECK(rep.action_excess <= 2e-2);
  CHECK(static_cast<int>(rep.nodes.size()) == path.steps());

  Trajectory bent = path;
  double step = 2.0 * grid.axis.half_width / (grid.axis.resolution - 1);
  bent.states[50] += 8 * step;
  InclusionReport bad = inclusion_check(bent, grid, quad, phi, {});
  CHECK(bad.verdict == InclusionVerdict::kRejected);
  CHECK(bad.action_excess == doctest::Approx(0.08).epsilon(0.25));
  CHECK(bad.max_r_forward > 1.0);
  CHECK(bad.max_r_forward >= 10.0 * rep.max_r_forward);
}

TEST_CASE("a path that never reaches the target set is rejected") {
  ValueGridConfig cfg;
  cfg.time_steps = 100;
  cfg.axis = GridAxis{0.0, 1.0, 801};
  ValueGrid grid = compute_value_grid(find_lagrangian("quadratic"),
                                      find_terminal("indicator_point"), 1.0,
                                      cfg);
  Trajectory still;
  still.t0 = 0.0;
  still.dt = grid.tau;
  still.dim = 1;
  still.states.assign(101, 0.5);
  InclusionReport rep =
      inclusion_check(still, grid, find_lagrangian("quadratic"),
                      find_terminal("indicator_point"), {});
  CHECK(rep.verdict == InclusionVerdict::kRejected);
  CHECK(rep.action_excess == kInf);
}

TEST_CASE("inclusion validation") {
  const ValueGrid& grid = dense_quadratic_grid();
  Trajectory path = extract_dp_path(grid, 0.5);
  LagrangianSpec quad = find_lagrangian("quadratic");
  TerminalCost phi = find_terminal("quadratic_phi");
  Trajectory off = path;
  off.states[0] = 0.50031;  // not a lattice node
  CHECK_THROWS_AS(inclusion_check(off, grid, quad, phi, {}),
                  TrajectoryOffGrid);
  Trajectory skewed = path;
  skewed.dt = grid.tau * 1.01;
  CHECK_THROWS_AS(inclusion_check(skewed, grid, quad, phi, {}), ConfigError);
  Trajectory short_path = path;
  short_path.states.pop_back();
  CHECK_THROWS_AS(inclusion_check(short_path, grid, quad, phi, {}),
                  ConfigError);
}
