#include "varcalc.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include <json.hpp>

#include "varcalc/catalog.hpp"
#include "varcalc/dbr.hpp"
#include "varcalc/errors.hpp"
#include "varcalc/problem_io.hpp"
#include "varcalc/regularity.hpp"
#include "varcalc/solver.hpp"
#include "varcalc/value.hpp"

using nlohmann::json;

struct vc_problem {
  varcalc::ProblemInstance instance;
};

struct vc_value_grid {
  varcalc::ValueGrid grid;
};

namespace {

std::string& last_error() {
  thread_local std::string message;
  return message;
}

char* dup_cstr(const std::string& text) {
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (out) std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

template <typename Fn>
vc_status guarded(Fn&& fn) {
  try {
    last_error().clear();
    return fn();
  } catch (const varcalc::Error& e) {
    last_error() = e.what();
  } catch (const std::exception& e) {
    last_error() = e.what();
  } catch (...) {
    last_error() = "unknown failure";
  }
  return VC_ERROR;
}

void require_arg(const void* p, const char* name) {
  if (!p) throw varcalc::ConfigError(std::string("null argument: ") + name);
}

// Shortest-roundtrip formatting; infinities spelled out so CSV consumers do
// not have to parse quiet NaN spellings.
std::string fmt17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// JSON numbers cannot carry infinities; reports encode them as strings.
json num_json(double v) {
  if (std::isnan(v)) return json("nan");
  if (std::isinf(v)) return json(v > 0 ? "inf" : "-inf");
  return json(v);
}

json parse_config(const char* text) {
  if (!text || !*text) return json::object();
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded())
    throw varcalc::ConfigError("config is not valid JSON");
  if (doc.is_null()) return json::object();
  if (!doc.is_object())
    throw varcalc::ConfigError("config must be a JSON object");
  return doc;
}

double cfg_num(const json& cfg, const char* key, double dflt) {
  auto it = cfg.find(key);
  if (it == cfg.end()) return dflt;
  if (!it->is_number())
    throw varcalc::ConfigError(std::string("'") + key + "' must be a number");
  return it->get<double>();
}

int cfg_int(const json& cfg, const char* key, int dflt) {
  auto it = cfg.find(key);
  if (it == cfg.end()) return dflt;
  if (!it->is_number_integer())
    throw varcalc::ConfigError(std::string("'") + key + "' must be an integer");
  return it->get<int>();
}

bool cfg_bool(const json& cfg, const char* key, bool dflt) {
  auto it = cfg.find(key);
  if (it == cfg.end()) return dflt;
  if (!it->is_boolean())
    throw varcalc::ConfigError(std::string("'") + key + "' must be a boolean");
  return it->get<bool>();
}

std::string cfg_str(const json& cfg, const char* key, const char* dflt) {
  auto it = cfg.find(key);
  if (it == cfg.end()) return dflt;
  if (!it->is_string())
    throw varcalc::ConfigError(std::string("'") + key + "' must be a string");
  return it->get<std::string>();
}

std::string require_str(const json& cfg, const char* key) {
  auto it = cfg.find(key);
  if (it == cfg.end() || !it->is_string())
    throw varcalc::ConfigError(std::string("'") + key +
                               "' (string) is required");
  return it->get<std::string>();
}

varcalc::Vec cfg_point(const json& cfg, const char* key,
                       const varcalc::Vec& dflt) {
  auto it = cfg.find(key);
  if (it == cfg.end()) return dflt;
  if (it->is_number()) return {it->get<double>()};
  if (it->is_array()) {
    varcalc::Vec out;
    for (const auto& v : *it) {
      if (!v.is_number())
        throw varcalc::ConfigError(std::string("'") + key +
                                   "' must contain numbers");
      out.push_back(v.get<double>());
    }
    if (out.empty())
      throw varcalc::ConfigError(std::string("'") + key + "' must be nonempty");
    return out;
  }
  throw varcalc::ConfigError(std::string("'") + key +
                             "' must be a number or array");
}

varcalc::SolverConfig solver_config(const varcalc::ProblemInstance& p,
                                    const json& cfg) {
  varcalc::SolverConfig sc;
  // Defaults put the slope quantum (axis step / tau) at 0.5 for unit-span
  // problems so unit-speed paths are representable on the lattice.
  sc.time_steps = cfg_int(cfg, "time_steps", 50);
  int resolution = cfg_int(cfg, "resolution", 201);
  if (sc.time_steps < 1) throw varcalc::ConfigError("time_steps must be >= 1");
  if (resolution < 2) throw varcalc::ConfigError("resolution must be >= 2");
  int dim = p.lagrangian.dim;
  sc.axes.reserve(dim);
  for (int d = 0; d < dim; ++d) {
    double lo = p.xa.empty() ? 0.0 : p.xa[d];
    double hi = p.xb.empty() ? 0.0 : p.xb[d];
    double center = 0.5 * (lo + hi);
    double half = std::max(1.0, 0.75 * std::abs(hi - lo));
    center = cfg_num(cfg, "center", center);
    half = cfg_num(cfg, "half_width", half);
    if (!(half > 0)) throw varcalc::ConfigError("half_width must be positive");
    sc.axes.push_back(varcalc::GridAxis{center, half, resolution});
  }
  if (cfg.contains("slope_cap")) sc.slope_cap = cfg_num(cfg, "slope_cap", 0.0);
  return sc;
}

varcalc::SolveResult run_solver(const varcalc::ProblemInstance& p,
                                const json& cfg) {
  if (p.kind != varcalc::ProblemKind::kLagrange)
    throw varcalc::ConfigError("fixed-endpoint solver needs kind=lagrange");
  varcalc::SolveResult res = varcalc::solve_lagrange_dp(p, solver_config(p, cfg));
  if (cfg_bool(cfg, "refine", true))
    res = varcalc::refine_local(p, res, cfg_int(cfg, "sweeps", 2),
                                cfg_int(cfg, "bisection_levels", 4));
  return res;
}

std::string trajectory_csv(const varcalc::Trajectory& traj) {
  std::string out = "t";
  for (int d = 1; d <= traj.dim; ++d) out += ",y_" + std::to_string(d);
  for (int d = 1; d <= traj.dim; ++d) out += ",u_" + std::to_string(d);
  out += "\n";
  int steps = traj.steps();
  for (int i = 0; i <= steps; ++i) {
    out += fmt17(traj.time(i));
    for (double c : traj.state(i)) out += "," + fmt17(c);
    varcalc::Vec u = traj.slope(std::max(0, std::min(i, steps - 1)));
    for (double c : u) out += "," + fmt17(c);
    out += "\n";
  }
  return out;
}

json dbr_json(const varcalc::DbrReport& rep) {
  json out;
  out["variant"] = rep.variant;
  out["constant"] = num_json(rep.constant);
  out["interval_lo"] = num_json(rep.interval_lo);
  out["interval_hi"] = num_json(rep.interval_hi);
  out["residual"] = num_json(rep.residual);
  out["vacuous_fraction"] = num_json(rep.vacuous_fraction);
  out["enlargement"] = num_json(rep.enlargement);
  out["hamiltonian_residual"] = num_json(rep.hamiltonian_residual);
  if (!rep.costates.empty()) {
    json cs = json::array();
    for (double c : rep.costates) cs.push_back(num_json(c));
    out["costates"] = cs;
  }
  return out;
}

}  // namespace

extern "C" {

const char* vc_version(void) { return "0.1.0"; }

const char* vc_last_error(void) { return last_error().c_str(); }

void vc_string_free(char* text) { std::free(text); }

vc_status vc_problem_parse(const char* json_text, vc_problem** out_problem) {
  return guarded([&] {
    require_arg(json_text, "json_text");
    require_arg(out_problem, "out_problem");
    *out_problem = nullptr;
    auto instance = varcalc::load_problem(json_text);
    *out_problem = new vc_problem{std::move(instance)};
    return VC_OK;
  });
}

void vc_problem_free(vc_problem* problem) { delete problem; }

vc_status vc_catalog_json(char** out_json) {
  return guarded([&] {
    require_arg(out_json, "out_json");
    *out_json = dup_cstr(varcalc::catalog_json());
    return VC_OK;
  });
}

vc_status vc_envelope_csv(const char* config_json, char** out_csv) {
  return guarded([&] {
    require_arg(out_csv, "out_csv");
    *out_csv = nullptr;
    json cfg = parse_config(config_json);
    std::string name = require_str(cfg, "lagrangian");
    varcalc::Vec x = cfg_point(cfg, "x", {0.0});
    int dim = static_cast<int>(x.size());
    varcalc::LagrangianSpec spec = varcalc::find_lagrangian(name, dim);
    varcalc::Vec dir = cfg_point(cfg, "direction", varcalc::Vec(dim, 0.0));
    if (cfg.find("direction") == cfg.end()) dir[0] = 1.0;
    if (static_cast<int>(dir.size()) != dim)
      throw varcalc::ConfigError("'direction' dimension mismatch");
    double u_min = cfg_num(cfg, "u_min", -2.0);
    double u_max = cfg_num(cfg, "u_max", 2.0);
    int points = cfg_int(cfg, "points", 401);
    if (!(u_min < u_max)) throw varcalc::ConfigError("need u_min < u_max");
    if (points < 2) throw varcalc::ConfigError("points must be >= 2");

    std::vector<double> grid(points), vals(points);
    varcalc::Vec u(dim);
    for (int j = 0; j < points; ++j) {
      double w = u_min + (u_max - u_min) * j / (points - 1);
      grid[j] = w;
      for (int d = 0; d < dim; ++d) u[d] = w * dir[d];
      vals[j] = spec.value(x, u);
    }
    varcalc::SampledFunction1D section(grid, vals);
    varcalc::SampledFunction1D hull =
        varcalc::lower_convex_envelope_1d(section);

    std::string csv = "u,value,hull\n";
    for (int j = 0; j < points; ++j)
      csv += fmt17(grid[j]) + "," + fmt17(vals[j]) + "," +
             fmt17(hull.ordinates[j]) + "\n";
    *out_csv = dup_cstr(csv);
    return VC_OK;
  });
}

vc_status vc_conjugate_csv(const char* config_json, char** out_csv) {
  return guarded([&] {
    require_arg(out_csv, "out_csv");
    *out_csv = nullptr;
    json cfg = parse_config(config_json);
    std::string name = require_str(cfg, "lagrangian");
    varcalc::LagrangianSpec spec = varcalc::find_lagrangian(name, 1);
    double x = cfg_num(cfg, "x", 0.0);
    double u_max = cfg_num(cfg, "u_max", 4.0);
    int u_points = cfg_int(cfg, "u_points", 401);
    if (u_points < 3 || u_points % 2 == 0)
      throw varcalc::ConfigError("u_points must be odd and >= 3");
    double p_min = cfg_num(cfg, "p_min", -2.0);
    double p_max = cfg_num(cfg, "p_max", 2.0);
    int p_points = cfg_int(cfg, "p_points", 81);
    if (!(p_min < p_max)) throw varcalc::ConfigError("need p_min < p_max");
    if (p_points < 2) throw varcalc::ConfigError("p_points must be >= 2");

    std::vector<double> p_grid(p_points);
    for (int j = 0; j < p_points; ++j)
      p_grid[j] = p_min + (p_max - p_min) * j / (p_points - 1);
    varcalc::HamiltonianSection hs = varcalc::hamiltonian_section(
        spec, x, p_grid, u_max, (u_points - 1) / 2);

    std::string csv = "p,H,truncated\n";
    for (int j = 0; j < p_points; ++j)
      csv += fmt17(hs.p[j]) + "," + fmt17(hs.plain[j]) + "," +
             (hs.truncated[j] ? "1" : "0") + "\n";
    *out_csv = dup_cstr(csv);
    return VC_OK;
  });
}

vc_status vc_solve(const vc_problem* problem, const char* config_json,
                   char** out_report_json, char** out_trajectory_csv) {
  return guarded([&] {
    require_arg(problem, "problem");
    if (out_report_json) *out_report_json = nullptr;
    if (out_trajectory_csv) *out_trajectory_csv = nullptr;
    json cfg = parse_config(config_json);
    varcalc::SolveResult res = run_solver(problem->instance, cfg);
    if (out_report_json) {
      json rep;
      rep["action"] = num_json(res.action);
      rep["grid_global"] = res.grid_global;
      rep["lipschitz"] = num_json(varcalc::empirical_lipschitz(res.trajectory));
      rep["snap_distance"] = num_json(res.snap_distance);
      rep["ties"] = res.tie_count;
      *out_report_json = dup_cstr(rep.dump(2) + "\n");
    }
    if (out_trajectory_csv)
      *out_trajectory_csv = dup_cstr(trajectory_csv(res.trajectory));
    return VC_OK;
  });
}

vc_status vc_dbr(const vc_problem* problem, const char* variant,
                 const char* config_json, char** out_report_json) {
  return guarded([&] {
    require_arg(problem, "problem");
    require_arg(variant, "variant");
    require_arg(out_report_json, "out_report_json");
    *out_report_json = nullptr;
    json cfg = parse_config(config_json);
    const varcalc::ProblemInstance& p = problem->instance;
    varcalc::SolveResult res = run_solver(p, cfg);

    varcalc::DbrConfig dc;
    dc.grid.resolution = cfg_int(cfg, "section_resolution", 200);
    dc.grid.v_max = cfg_num(cfg, "v_max", 4.0);
    dc.hypothesis_tol = cfg_num(cfg, "hypothesis_tol", dc.hypothesis_tol);
    dc.u_radius = cfg_num(cfg, "u_radius", dc.u_radius);
    double enlargement_tol = cfg_num(cfg, "enlargement_tol", 1e-9);

    std::string kind = variant;
    varcalc::DbrReport rep;
    std::string finding;
    try {
      if (kind == "erdmann") {
        auto pipeline =
            varcalc::build_pipeline(p.lagrangian, res.trajectory, dc.grid);
        rep = varcalc::erdmann_interval_test(pipeline);
      } else if (kind == "convex") {
        rep = varcalc::dbr_convexified(p.lagrangian, res.trajectory, dc);
      } else if (kind == "subdiff") {
        rep = varcalc::dbr_subdifferential(p.lagrangian, res.trajectory, dc);
      } else if (kind == "clarke") {
        rep = varcalc::dbr_clarke(p.lagrangian, res.trajectory, dc);
      } else if (kind == "superdiff") {
        rep = varcalc::dbr_superdifferential(p.lagrangian, res.trajectory, dc);
      } else {
        throw varcalc::ConfigError("unknown variant '" + kind +
                                   "' (erdmann, convex, subdiff, clarke, "
                                   "superdiff)");
      }
    } catch (const varcalc::HypothesisFailed& e) {
      finding = e.what();
    }

    json out;
    if (finding.empty()) {
      out = dbr_json(rep);
      if (rep.enlargement > enlargement_tol)
        out["finding"] = "intervals required enlargement";
    } else {
      out["variant"] = kind;
      out["finding"] = "hypothesis failed";
      out["message"] = finding;
    }
    out["action"] = num_json(res.action);
    out["lipschitz"] = num_json(varcalc::empirical_lipschitz(res.trajectory));
    *out_report_json = dup_cstr(out.dump(2) + "\n");
    return out.contains("finding") ? VC_FINDINGS : VC_OK;
  });
}

vc_status vc_bound(const vc_problem* problem, const char* config_json,
                   char** out_report_json) {
  return guarded([&] {
    require_arg(problem, "problem");
    require_arg(out_report_json, "out_report_json");
    *out_report_json = nullptr;
    json cfg = parse_config(config_json);
    const varcalc::ProblemInstance& p = problem->instance;
    if (!p.bounds)
      throw varcalc::ConfigError("problem declares no data bounds");

    varcalc::BoundTrace trace = varcalc::lipschitz_bound(
        p.lagrangian.gauge, p.lagrangian.local_bound, *p.bounds,
        p.lagrangian.dim);

    json out;
    out["displacement_budget"] = num_json(trace.displacement_budget);
    out["state_radius"] = num_json(trace.state_radius);
    out["speed_threshold"] = num_json(trace.speed_threshold);
    out["constant_floor"] = num_json(trace.constant_floor);
    out["unit_cost_cap"] = num_json(trace.unit_cost_cap);
    out["slope_cap"] = num_json(trace.slope_cap);
    out["lipschitz"] = num_json(trace.lipschitz);
    out["inputs"] = {{"A", num_json(trace.inputs.A)},
                     {"B", num_json(trace.inputs.B)},
                     {"alpha", num_json(trace.inputs.alpha)},
                     {"beta", num_json(trace.inputs.beta)}};

    bool findings = false;
    if (cfg_bool(cfg, "verify", false)) {
      varcalc::SolveResult res = run_solver(p, cfg);
      json ver;
      try {
        varcalc::BoundVerification bv =
            varcalc::verify_bound(p, res.trajectory, trace);
        ver["empirical"] = num_json(bv.empirical);
        ver["bound"] = num_json(bv.bound);
        ver["margin"] = num_json(bv.margin);
        ver["passed"] = bv.passed;
        ver["anchor"] = num_json(bv.anchor);
        ver["action"] = num_json(bv.action);
        ver["span"] = num_json(bv.span);
        findings = !bv.passed;
        if (findings) out["finding"] = "empirical slope exceeds the bound";
      } catch (const varcalc::HypothesisFailed& e) {
        ver["message"] = std::string(e.what());
        out["finding"] = "hypothesis failed";
        findings = true;
      }
      out["verification"] = ver;
    }
    *out_report_json = dup_cstr(out.dump(2) + "\n");
    return findings ? VC_FINDINGS : VC_OK;
  });
}

vc_status vc_value_compute(const vc_problem* problem, const char* config_json,
                           vc_value_grid** out_grid) {
  return guarded([&] {
    require_arg(problem, "problem");
    require_arg(out_grid, "out_grid");
    *out_grid = nullptr;
    json cfg = parse_config(config_json);
    const varcalc::ProblemInstance& p = problem->instance;
    if (p.kind != varcalc::ProblemKind::kBolza || !p.terminal)
      throw varcalc::ConfigError("value grid needs kind=bolza");

    varcalc::ValueGridConfig vc;
    vc.time_steps = cfg_int(cfg, "time_steps", vc.time_steps);
    vc.extra_layers = cfg_int(cfg, "extra_layers", vc.extra_layers);
    vc.axis.center = cfg_num(cfg, "center", vc.axis.center);
    vc.axis.half_width = cfg_num(cfg, "half_width", vc.axis.half_width);
    vc.axis.resolution = cfg_int(cfg, "resolution", vc.axis.resolution);
    vc.slope_cap = cfg_num(cfg, "slope_cap", vc.slope_cap);

    varcalc::ValueGrid grid =
        varcalc::compute_value_grid(p.lagrangian, *p.terminal, p.horizon, vc);
    *out_grid = new vc_value_grid{std::move(grid)};
    return VC_OK;
  });
}

void vc_value_free(vc_value_grid* grid) { delete grid; }

vc_status vc_value_csv(const vc_value_grid* grid, char** out_csv) {
  return guarded([&] {
    require_arg(grid, "grid");
    require_arg(out_csv, "out_csv");
    *out_csv = nullptr;
    const varcalc::ValueGrid& g = grid->grid;
    std::string csv = "t,x,V,u\n";
    for (int k = 0; k <= g.horizon_layers; ++k) {
      for (int i = 0; i < g.states; ++i) {
        csv += fmt17(k * g.tau) + "," + fmt17(g.x[i]) + "," +
               fmt17(g.value(k, i));
        csv += ",";
        if (k > 0 && g.best[static_cast<std::size_t>(k) * g.states + i] >= 0)
          csv += fmt17(g.slope_of(k, i));
        csv += "\n";
      }
    }
    *out_csv = dup_cstr(csv);
    return VC_OK;
  });
}

vc_status vc_hj(const vc_value_grid* grid, const vc_problem* problem,
                const char* config_json, char** out_report_json) {
  return guarded([&] {
    require_arg(grid, "grid");
    require_arg(problem, "problem");
    require_arg(out_report_json, "out_report_json");
    *out_report_json = nullptr;
    json cfg = parse_config(config_json);

    varcalc::HjConfig hc;
    hc.tol = cfg_num(cfg, "tol", hc.tol);
    hc.k_lo = cfg_int(cfg, "k_lo", hc.k_lo);
    hc.k_hi = cfg_int(cfg, "k_hi", hc.k_hi);
    hc.i_margin = cfg_int(cfg, "i_margin", hc.i_margin);
    hc.t_stride = cfg_int(cfg, "t_stride", hc.t_stride);
    hc.x_stride = cfg_int(cfg, "x_stride", hc.x_stride);
    hc.raw_stride = cfg_int(cfg, "raw_stride", hc.raw_stride);
    hc.kink_tol = cfg_num(cfg, "kink_tol", hc.kink_tol);
    std::string source = cfg_str(cfg, "source", "direct");
    if (source == "direct") {
      hc.source = varcalc::IntegrandSource::kDirect;
    } else if (source == "estimated") {
      hc.source = varcalc::IntegrandSource::kEstimated;
    } else {
      throw varcalc::ConfigError("'source' must be direct or estimated");
    }

    varcalc::HjResidualReport rep =
        varcalc::hj_residuals(grid->grid, problem->instance.lagrangian, hc);

    json out;
    out["points_checked"] = rep.points_checked;
    out["smooth_fraction"] = num_json(rep.smooth_fraction);
    out["super_violations"] = rep.super_violations;
    out["sub_violations"] = rep.sub_violations;
    out["worst_super"] = num_json(rep.worst_super);
    out["worst_sub"] = num_json(rep.worst_sub);
    out["raw_points"] = rep.raw_points;
    out["raw_sup_violations"] = rep.raw_sup_violations;
    out["raw_sub_violations"] = rep.raw_sub_violations;
    out["worst_raw_sup"] = num_json(rep.worst_raw_sup);
    out["worst_raw_sub"] = num_json(rep.worst_raw_sub);
    json worst = json::array();
    for (const auto& w : rep.worst)
      worst.push_back({{"k", w.k},
                       {"i", w.i},
                       {"residual", num_json(w.residual)},
                       {"kind", w.kind}});
    out["worst"] = worst;
    *out_report_json = dup_cstr(out.dump(2) + "\n");

    long violations = rep.super_violations + rep.sub_violations +
                      rep.raw_sup_violations + rep.raw_sub_violations;
    return violations > 0 ? VC_FINDINGS : VC_OK;
  });
}

vc_status vc_inclusion(const vc_value_grid* grid, const vc_problem* problem,
                       const char* config_json, char** out_report_json) {
  return guarded([&] {
    require_arg(grid, "grid");
    require_arg(problem, "problem");
    require_arg(out_report_json, "out_report_json");
    *out_report_json = nullptr;
    json cfg = parse_config(config_json);
    const varcalc::ProblemInstance& p = problem->instance;
    if (!p.terminal)
      throw varcalc::ConfigError("inclusion check needs kind=bolza");
    const varcalc::ValueGrid& g = grid->grid;

    double start_x = cfg_num(cfg, "start_x", p.x0.empty() ? 0.0 : p.x0[0]);
    varcalc::Trajectory traj = varcalc::extract_dp_path(g, start_x);

    int node = cfg_int(cfg, "perturb_node", -1);
    int offset = cfg_int(cfg, "perturb_offset", 0);
    if (node >= 0 && offset != 0) {
      if (node <= 0 || node >= traj.steps())
        throw varcalc::ConfigError("perturb_node must be an interior node");
      double step = g.states > 1 ? g.x[1] - g.x[0] : 0.0;
      traj.states[static_cast<std::size_t>(node)] += offset * step;
    }

    varcalc::InclusionConfig ic;
    ic.tol = cfg_num(cfg, "tol", ic.tol);
    ic.pass_fraction = cfg_num(cfg, "pass_fraction", ic.pass_fraction);
    ic.action_tol = cfg_num(cfg, "action_tol", ic.action_tol);
    ic.equality_tol = cfg_num(cfg, "equality_tol", ic.equality_tol);

    varcalc::InclusionReport rep =
        varcalc::inclusion_check(traj, g, p.lagrangian, *p.terminal, ic);

    json out;
    out["verdict"] = rep.verdict == varcalc::InclusionVerdict::kMinimizer
                         ? "minimizer"
                         : "rejected";
    out["pass_fraction"] = num_json(rep.pass_fraction);
    out["action_excess"] = num_json(rep.action_excess);
    out["max_r_forward"] = num_json(rep.max_r_forward);
    out["equality_fraction"] = num_json(rep.equality_fraction);
    out["worst_equality_gap"] = num_json(rep.worst_equality_gap);
    json nodes = json::array();
    for (const auto& n : rep.nodes)
      nodes.push_back({{"r_forward", num_json(n.r_forward)},
                       {"r_backward", num_json(n.r_backward)},
                       {"pass", n.pass},
                       {"equalities", n.equalities}});
    out["nodes"] = nodes;
    *out_report_json = dup_cstr(out.dump(2) + "\n");
    return rep.verdict == varcalc::InclusionVerdict::kMinimizer ? VC_OK
                                                                : VC_FINDINGS;
  });
}

}  // extern "C"
