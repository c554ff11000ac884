#include "varcalc/catalog.hpp"

#include <cmath>

#include "varcalc/errors.hpp"

namespace varcalc {

namespace {

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

GrowthGauge radial_gauge(std::string name,
                         std::function<double(double)> profile,
                         std::function<double(double)> exact_ratio) {
  GrowthGauge g;
  g.name = std::move(name);
  g.radial_profile = profile;
  g.value = [profile](std::span<const double> u) { return profile(norm(u)); };
  g.certificate = tabulate_certificate(exact_ratio);
  g.radial = true;
  return g;
}

std::vector<LagrangianSpec> make_catalog() {
  std::vector<LagrangianSpec> out;

  // |u|^2: the strictly convex benchmark.
  {
    LagrangianSpec s;
    s.name = "quadratic";
    s.value = [](std::span<const double>, std::span<const double> u) {
      double r = norm(u);
      return r * r;
    };
    s.gauge = radial_gauge(
        "quadratic", [](double r) { return r * r; },
        [](double sl) { return sl; });
    s.local_bound = [](double R) { return R * R; };
    s.flags = {true, true, true, true};
    out.push_back(std::move(s));
  }

  // (|u|^2 - 1)^2: nonconvex double well, zero on the unit sphere.
  auto well = [](double r) {
    double z = r * r - 1.0;
    return z * z;
  };
  // inf over r >= sl of well(r)/r: zero until the well, then increasing.
  auto well_ratio = [well](double sl) {
    return sl <= 1.0 ? 0.0 : well(sl) / sl;
  };
  auto well_bound = [well](double R) { return std::max(1.0, well(R)); };
  {
    LagrangianSpec s;
    s.name = "double_well";
    s.value = [well](std::span<const double>, std::span<const double> u) {
      return well(norm(u));
    };
    s.gauge = radial_gauge("double_well", well, well_ratio);
    s.local_bound = well_bound;
    s.flags = {false, true, true, true};
    out.push_back(std::move(s));
  }

  // Double well plus |x|^2: same growth in u, state-coupled.
  {
    LagrangianSpec s;
    s.name = "double_well_x2";
    s.value = [well](std::span<const double> x, std::span<const double> u) {
      double r = norm(x);
      return well(norm(u)) + r * r;
    };
    s.gauge = radial_gauge("double_well", well, well_ratio);
    s.local_bound = [well_bound](double R) { return well_bound(R) + R * R; };
    s.flags = {false, true, true, true};
    out.push_back(std::move(s));
  }

  // |u| + |u|^2: convex but not differentiable at u = 0.
  {
    LagrangianSpec s;
    s.name = "abs";
    s.value = [](std::span<const double>, std::span<const double> u) {
      double r = norm(u);
      return r + r * r;
    };
    s.gauge = radial_gauge(
        "abs", [](double r) { return r + r * r; },
        [](double sl) { return 1.0 + sl; });
    s.local_bound = [](double R) { return R + R * R; };
    s.flags = {true, false, true, true};
    out.push_back(std::move(s));
  }

  // |u|^2 scaled by an indicator jump in the first state coordinate: the
  // discontinuous-in-x example.
  {
    LagrangianSpec s;
    s.name = "piecewise_x";
    s.value = [](std::span<const double> x, std::span<const double> u) {
      double r = norm(u);
      return r * r * (x[0] < 0.0 ? 2.0 : 1.0);
    };
    s.gauge = radial_gauge(
        "quadratic", [](double r) { return r * r; },
        [](double sl) { return sl; });
    s.local_bound = [](double R) { return 2.0 * R * R; };
    s.flags = {true, true, true, true};
    out.push_back(std::move(s));
  }

  return out;
}

std::vector<TerminalCost> make_terminals() {
  std::vector<TerminalCost> out;
  {
    TerminalCost t;
    t.name = "zero";
    t.value = [](std::span<const double>) { return 0.0; };
    t.finite_point = {0.0};
    out.push_back(std::move(t));
  }
  {
    TerminalCost t;
    t.name = "quadratic_phi";
    t.value = [](std::span<const double> x) {
      double r = norm(x);
      return r * r;
    };
    t.finite_point = {0.0};
    out.push_back(std::move(t));
  }
  {
    TerminalCost t;
    t.name = "indicator_point";
    t.value = [](std::span<const double> x) {
      return norm(x) == 0.0 ? 0.0 : kInf;
    };
    t.finite_point = {0.0};
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

SuperlinearityCertificate tabulate_certificate(
    const std::function<double(double)>& exact_ratio, double level_min,
    double level_max, int levels) {
  if (!(level_min > 0.0) || !(level_max > level_min) || levels < 2)
    throw ConfigError("certificate grid must be geometric and nonempty");
  SuperlinearityCertificate cert;
  cert.level.reserve(levels);
  cert.ratio.reserve(levels);
  double g = std::pow(level_max / level_min, 1.0 / (levels - 1));
  double running = 0.0;
  for (int i = 0; i < levels; ++i) {
    double s = level_min * std::pow(g, i);
    running = std::max(running, exact_ratio(s));
    cert.level.push_back(s);
    cert.ratio.push_back(running);
  }
  if (cert.ratio.back() <= 0.0)
    throw GaugeTooWeak("certificate ratios vanish on the whole grid");
  return cert;
}

const std::vector<LagrangianSpec>& builtin_catalog() {
  static const std::vector<LagrangianSpec> table = make_catalog();
  return table;
}

LagrangianSpec find_lagrangian(const std::string& name, int dim) {
  if (dim < 1) throw ConfigError("dimension must be positive");
  for (const auto& entry : builtin_catalog()) {
    if (entry.name == name) {
      LagrangianSpec copy = entry;  // evaluators are dimension-generic
      copy.dim = dim;
      return copy;
    }
  }
  throw UnknownLagrangian(name);
}

const std::vector<TerminalCost>& builtin_terminal_costs() {
  static const std::vector<TerminalCost> table = make_terminals();
  return table;
}

TerminalCost find_terminal(const std::string& name, int dim) {
  if (dim < 1) throw ConfigError("dimension must be positive");
  for (const auto& entry : builtin_terminal_costs()) {
    if (entry.name == name) {
      TerminalCost copy = entry;
      copy.finite_point.assign(dim, 0.0);
      return copy;
    }
  }
  throw UnknownLagrangian("terminal cost '" + name + "'");
}

}  // namespace varcalc
