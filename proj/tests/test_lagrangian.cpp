#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "oracles.hpp"
#include "varcalc/catalog.hpp"
#include "varcalc/errors.hpp"
#include "varcalc/lagrangian.hpp"
#include "varcalc/problem_io.hpp"

using namespace varcalc;

TEST_CASE("catalog lookups") {
  const auto& entries = builtin_catalog();
  CHECK(entries.size() == 5);
  for (const char* name :
       {"quadratic", "double_well", "double_well_x2", "abs", "piecewise_x"})
    CHECK_NOTHROW(find_lagrangian(name));
  CHECK(find_lagrangian("quadratic", 2).dim == 2);
  CHECK_THROWS_AS(find_lagrangian("no_such_integrand"), UnknownLagrangian);

  CHECK(builtin_terminal_costs().size() == 3);
  TerminalCost phi = find_terminal("indicator_point", 2);
  CHECK(phi.finite_point == Vec{0.0, 0.0});
  std::vector<double> origin = {0.0, 0.0}, off = {0.5, 0.0};
  CHECK(phi.value(origin) == 0.0);
  CHECK(phi.value(off) == kInf);
  CHECK_THROWS_AS(find_terminal("no_such_cost"), UnknownLagrangian);
}

TEST_CASE("catalog flags match the declared structure") {
  CHECK(find_lagrangian("quadratic").flags.convex_in_u);
  CHECK(!find_lagrangian("double_well").flags.convex_in_u);
  CHECK(find_lagrangian("double_well").flags.differentiable_in_u);
  CHECK(!find_lagrangian("abs").flags.differentiable_in_u);
  CHECK(find_lagrangian("abs").flags.convex_in_u);
  CHECK(find_lagrangian("piecewise_x").flags.lipschitz_in_u);
}

TEST_CASE("every entry sits between its gauge and its local bound") {
  for (const LagrangianSpec& spec : builtin_catalog()) {
    for (int ix = 0; ix <= 20; ix++) {
      for (int iu = 0; iu <= 20; iu++) {
        double x = -5.0 + 0.5 * ix, u = -5.0 + 0.5 * iu;
        double l = spec.value({&x, 1}, {&u, 1});
        double r = std::max(std::abs(x), std::abs(u));
        CHECK(l >= spec.gauge.value({&u, 1}) - 1e-12);
        CHECK(l <= spec.local_bound(r) + 1e-9);
      }
    }
  }
}

TEST_CASE("piecewise state dependence doubles the cost on the left") {
  LagrangianSpec spec = find_lagrangian("piecewise_x");
  double xl = -1.0, xr = 1.0, u = 2.0;
  CHECK(spec.value({&xl, 1}, {&u, 1}) == 8.0);
  CHECK(spec.value({&xr, 1}, {&u, 1}) == 4.0);
}

TEST_CASE("superlinearity certificates are sound and monotone") {
  for (const LagrangianSpec& spec : builtin_catalog()) {
    const SuperlinearityCertificate& cert = spec.gauge.certificate;
    REQUIRE(cert.level.size() == cert.ratio.size());
    REQUIRE(!cert.level.empty());
    CHECK(cert.ratio.back() > 0.0);
    for (std::size_t i = 1; i < cert.level.size(); ++i) {
      CHECK(cert.level[i] > cert.level[i - 1]);
      CHECK(cert.ratio[i] >= cert.ratio[i - 1]);  // running max
    }
    // spot-check the claim: gauge(u)/|u| >= ratio for sampled |u| >= level
    for (std::size_t i = 0; i < cert.level.size(); i += 40) {
      double s = cert.level[i];
      for (double m : {1.0, 1.5, 2.0, 4.0}) {
        double u = s * m;
        double g = spec.gauge.value({&u, 1});
        CHECK(g / u >= cert.ratio[i] - 1e-9 * (1.0 + cert.ratio[i]));
      }
    }
  }
}

TEST_CASE("certificate tabulation rejects a gauge with no growth") {
  CHECK_THROWS_AS(tabulate_certificate([](double) { return 0.0; }),
                  GaugeTooWeak);
}

TEST_CASE("action of the straight unit-slope path") {
  LagrangianSpec spec = find_lagrangian("quadratic");
  Trajectory traj = oracles::straight(10, 0.0, 1.0, 0.0, 0.1);
  ExtReal action = evaluate_action(spec, traj);
  REQUIRE(action.is_finite());
  CHECK(action.value() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(empirical_lipschitz(traj) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sawtooth slopes hit the well bottom exactly") {
  LagrangianSpec spec = find_lagrangian("double_well");
  Trajectory traj = oracles::sawtooth(64, 8, 1.0 / 64);
  CHECK(traj.states.back() == 0.0);
  CHECK(evaluate_action(spec, traj).value() == 0.0);
  CHECK(empirical_lipschitz(traj) == 1.0);
}

TEST_CASE("action equals the left-endpoint sum bit for bit") {
  LagrangianSpec spec = find_lagrangian("double_well_x2");
  Trajectory traj = oracles::sawtooth(64, 8, 1.0 / 64);
  CHECK(*std::max_element(traj.states.begin(), traj.states.end()) == 0.125);
  double acc = 0.0;
  for (int i = 0; i < traj.steps(); ++i) {
    double from = traj.states[static_cast<std::size_t>(i)];
    double to = traj.states[static_cast<std::size_t>(i) + 1];
    double u = (to - from) / traj.dt;
    acc += spec.value({&from, 1}, {&u, 1}) * traj.dt;
  }
  CHECK(evaluate_action(spec, traj).value() == acc);
}

TEST_CASE("action is additive over a split within rounding") {
  LagrangianSpec spec = find_lagrangian("quadratic");
  Trajectory traj = oracles::sawtooth(32, 4, 0.05);
  Trajectory head = traj, tail = traj;
  head.states.assign(traj.states.begin(), traj.states.begin() + 17);
  tail.states.assign(traj.states.begin() + 16, traj.states.end());
  tail.t0 = traj.time(16);
  double split =
      evaluate_action(spec, head).value() + evaluate_action(spec, tail).value();
  CHECK(evaluate_action(spec, traj).value() ==
        doctest::Approx(split).epsilon(1e-12));
}

TEST_CASE("action validation and saturation") {
  LagrangianSpec spec = find_lagrangian("quadratic");
  Trajectory bad = oracles::straight(4, 0.0, 1.0, 0.0, 0.25);
  bad.states[2] = std::nan("");
  CHECK_THROWS_AS(evaluate_action(spec, bad), NonFiniteState);

  Trajectory flat = oracles::straight(4, 0.0, 1.0, 0.0, 0.25);
  flat.dim = 2;  // states no longer match the declared width
  CHECK_THROWS_AS(evaluate_action(spec, flat), DimensionMismatch);

  Trajectory tiny;
  tiny.dt = 0.0;
  tiny.states = {0.0, 1.0};
  CHECK_THROWS_AS(evaluate_action(spec, tiny), ConfigError);

  LagrangianSpec barrier = spec;
  barrier.value = [](std::span<const double>, std::span<const double> u) {
    return std::abs(u[0]) > 0.5 ? kInf : 0.0;
  };
  Trajectory fast = oracles::straight(4, 0.0, 1.0, 0.0, 0.25);
  CHECK(evaluate_action(barrier, fast).is_infinite());
}

TEST_CASE("problem files round-trip") {
  ProblemInstance p = load_problem(R"({
    "kind": "lagrange",
    "a": 0.0, "b": 1.0,
    "xa": [0.0], "xb": [1.0],
    "lagrangian": "quadratic",
    "bounds": {"A": 1.0, "B": 1.0, "alpha": 1.0, "beta": 1.0}
  })");
  CHECK(p.kind == ProblemKind::kLagrange);
  CHECK(p.a == 0.0);
  CHECK(p.b == 1.0);
  CHECK(p.xa == Vec{0.0});
  CHECK(p.xb == Vec{1.0});
  CHECK(p.lagrangian.name == "quadratic");
  REQUIRE(p.bounds.has_value());
  CHECK(p.bounds->beta == 1.0);

  ProblemInstance q = load_problem(R"({
    "kind": "bolza",
    "t": 1.0, "x": [0.5],
    "phi": "quadratic_phi",
    "lagrangian": {"name": "my_well", "expr-id": "double_well", "n": 1}
  })");
  CHECK(q.kind == ProblemKind::kBolza);
  CHECK(q.horizon == 1.0);
  CHECK(q.x0 == Vec{0.5});
  REQUIRE(q.terminal.has_value());
  CHECK(q.terminal->name == "quadratic_phi");
  CHECK(q.lagrangian.name == "my_well");
  double u = 1.0;
  CHECK(q.lagrangian.value({&u, 1}, {&u, 1}) == 0.0);  // the well formula
  CHECK(!q.bounds.has_value());
}

TEST_CASE("problem files fail with a JSON pointer") {
  auto pointer_of = [](const std::string& text) {
    try {
      load_problem(text);
    } catch (const SchemaError& e) {
      return std::string(e.pointer());
    }
    return std::string("no error");
  };
  CHECK(pointer_of("not json at all") == "/");
  CHECK(pointer_of("[1, 2]") == "/");
  CHECK(pointer_of(R"({"kind": "elastica"})") == "/kind");
  CHECK(pointer_of(R"({"kind": "lagrange", "a": 0, "xa": [0], "xb": [1],
                       "lagrangian": "quadratic"})") == "/b");
  CHECK(pointer_of(R"({"kind": "lagrange", "a": 1, "b": 0, "xa": [0],
                       "xb": [1], "lagrangian": "quadratic"})") == "/b");
  CHECK(pointer_of(R"({"kind": "lagrange", "a": 0, "b": 1, "xa": [0],
                       "xb": [1, 2], "lagrangian": "quadratic"})") == "/xb");
  CHECK(pointer_of(R"({"kind": "lagrange", "a": 0, "b": 1, "xa": [0],
                       "xb": [1], "lagrangian": {"name": "w",
                       "expr-id": "double_well", "n": 2}})") ==
        "/lagrangian/n");
  CHECK(pointer_of(R"({"kind": "bolza", "t": -1, "x": [0],
                       "phi": "zero", "lagrangian": "quadratic"})") == "/t");
  CHECK(pointer_of(R"({"kind": "lagrange", "a": 0, "b": 1, "xa": [0],
                       "xb": [1], "lagrangian": "quadratic",
                       "bounds": {"A": 1, "B": 1, "alpha": 0, "beta": 1}})") ==
        "/bounds/beta");
  CHECK_THROWS_AS(load_problem(R"({"kind": "lagrange", "a": 0, "b": 1,
                                   "xa": [0], "xb": [1],
                                   "lagrangian": "nope"})"),
                  UnknownLagrangian);
}

TEST_CASE("catalog dump is stable JSON") {
  std::string text = catalog_json();
  CHECK(text == catalog_json());
  CHECK(text.back() == '\n');
  nlohmann::json doc = nlohmann::json::parse(text);
  CHECK(doc.at("lagrangians").size() == 5);
  CHECK(doc.at("terminal_costs").size() == 3);
  for (const auto& entry : doc.at("lagrangians")) {
    CHECK(entry.contains("name"));
    CHECK(entry.at("flags").size() == 4);
  }
}
