#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "varcalc.h"

using nlohmann::json;

namespace {

std::string read_file(const std::string& path, bool& ok) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    ok = false;
    return {};
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  ok = true;
  return ss.str();
}

int usage_error(const std::string& message) {
  std::cerr << "varcalc: " << message << "\n";
  return 2;
}

int api_error() { return usage_error(vc_last_error()); }

// Owned string from the library, freed on scope exit.
struct OwnedText {
  char* text = nullptr;
  ~OwnedText() { vc_string_free(text); }
};

struct OwnedProblem {
  vc_problem* handle = nullptr;
  ~OwnedProblem() { vc_problem_free(handle); }
};

struct OwnedGrid {
  vc_value_grid* handle = nullptr;
  ~OwnedGrid() { vc_value_free(handle); }
};

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hash_hex(const std::string& bytes) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "fnv1a:%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lattice toolkit for low-dimensional variational problems"};
  app.require_subcommand(1);

  json cfg = json::object();
  std::string problem_path, out_path, traj_path, manifest_path;
  std::string variant = "erdmann";

  auto opt_num = [&cfg](CLI::App* cmd, const std::string& flag,
                        const std::string& key, const std::string& desc) {
    cmd->add_option_function<double>(
        flag, [&cfg, key](const double& v) { cfg[key] = v; }, desc);
  };
  auto opt_int = [&cfg](CLI::App* cmd, const std::string& flag,
                        const std::string& key, const std::string& desc) {
    cmd->add_option_function<int>(
        flag, [&cfg, key](const int& v) { cfg[key] = v; }, desc);
  };
  auto opt_str = [&cfg](CLI::App* cmd, const std::string& flag,
                        const std::string& key, const std::string& desc) {
    cmd->add_option_function<std::string>(
        flag, [&cfg, key](const std::string& v) { cfg[key] = v; }, desc);
  };

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("-o,--output", out_path, "write the result here");
    cmd->add_option("--manifest", manifest_path, "write a run manifest here");
  };
  auto add_problem = [&](CLI::App* cmd) {
    cmd->add_option("problem,-p,--problem", problem_path, "problem JSON file")
        ->required();
  };
  auto add_solver = [&](CLI::App* cmd) {
    opt_int(cmd, "-N,--time-steps", "time_steps", "lattice layers");
    opt_int(cmd, "--resolution", "resolution", "states per axis");
    opt_num(cmd, "--center", "center", "axis center override");
    opt_num(cmd, "--half-width", "half_width", "axis half width override");
    opt_num(cmd, "--slope-cap", "slope_cap", "prune faster transitions");
    opt_int(cmd, "--sweeps", "sweeps", "refinement sweeps");
    opt_int(cmd, "--bisection-levels", "bisection_levels",
            "refinement bisection depth");
    cmd->add_flag_function(
        "--no-refine", [&cfg](std::int64_t) { cfg["refine"] = false; },
        "keep the raw lattice path");
  };
  auto add_value_grid = [&](CLI::App* cmd) {
    opt_int(cmd, "-N,--time-steps", "time_steps", "layers to the horizon");
    opt_int(cmd, "--resolution", "resolution", "states on the axis");
    opt_num(cmd, "--center", "center", "axis center");
    opt_num(cmd, "--half-width", "half_width", "axis half width");
    opt_num(cmd, "--slope-cap", "slope_cap", "per-step slope bound");
    opt_int(cmd, "--extra-layers", "extra_layers", "layers past the horizon");
  };

  CLI::App* c_solve = app.add_subcommand("solve", "fixed-endpoint minimizer");
  add_problem(c_solve);
  add_solver(c_solve);
  c_solve->add_option("--trajectory", traj_path, "write the path CSV here");
  add_common(c_solve);

  CLI::App* c_env =
      app.add_subcommand("envelope", "velocity section and its convex hull");
  opt_str(c_env, "--lagrangian", "lagrangian", "catalog integrand name");
  opt_num(c_env, "--x", "x", "state of the section");
  opt_num(c_env, "--u-min", "u_min", "left end of the grid");
  opt_num(c_env, "--u-max", "u_max", "right end of the grid");
  opt_int(c_env, "--points", "points", "samples");
  add_common(c_env);

  CLI::App* c_lft =
      app.add_subcommand("lft", "conjugate (Hamiltonian) of an integrand");
  opt_str(c_lft, "--lagrangian", "lagrangian", "catalog integrand name");
  opt_num(c_lft, "--x", "x", "state of the section");
  opt_num(c_lft, "--u-max", "u_max", "velocity grid radius");
  opt_int(c_lft, "--u-points", "u_points", "velocity samples (odd)");
  opt_num(c_lft, "--p-min", "p_min", "left end of the dual grid");
  opt_num(c_lft, "--p-max", "p_max", "right end of the dual grid");
  opt_int(c_lft, "--p-points", "p_points", "dual samples");
  add_common(c_lft);

  CLI::App* c_dbr =
      app.add_subcommand("dbr", "constancy of the Hamiltonian along the path");
  add_problem(c_dbr);
  c_dbr->add_option("--variant", variant,
                    "erdmann, convex, subdiff, clarke or superdiff")
      ->check(CLI::IsMember(
          {"erdmann", "convex", "subdiff", "clarke", "superdiff"}));
  add_solver(c_dbr);
  opt_int(c_dbr, "--section-resolution", "section_resolution",
          "samples per unit of the scalar sections");
  opt_num(c_dbr, "--v-max", "v_max", "right end of the rescaling grid");
  opt_num(c_dbr, "--hypothesis-tol", "hypothesis_tol",
          "admitted gap between L and its convexification");
  opt_num(c_dbr, "--u-radius", "u_radius", "convexification grid half width");
  add_common(c_dbr);

  CLI::App* c_bound =
      app.add_subcommand("bound", "a-priori slope bound from the data bounds");
  add_problem(c_bound);
  c_bound->add_flag_function(
      "--verify", [&cfg](std::int64_t) { cfg["verify"] = true; },
      "solve and compare the empirical slope");
  add_solver(c_bound);
  add_common(c_bound);

  CLI::App* c_value = app.add_subcommand("value", "value function grid (CSV)");
  add_problem(c_value);
  add_value_grid(c_value);
  add_common(c_value);

  CLI::App* c_hj =
      app.add_subcommand("hj", "Hamilton-Jacobi residuals of the value grid");
  add_problem(c_hj);
  add_value_grid(c_hj);
  opt_num(c_hj, "--tol", "tol", "residual tolerance");
  opt_num(c_hj, "--kink-tol", "kink_tol", "smooth-point slope gap");
  opt_int(c_hj, "--t-stride", "t_stride", "layer stride");
  opt_int(c_hj, "--x-stride", "x_stride", "state stride");
  opt_int(c_hj, "--raw-stride", "raw_stride", "directional check stride");
  opt_str(c_hj, "--source", "source", "integrand source: direct or estimated");
  add_common(c_hj);

  CLI::App* c_incl = app.add_subcommand(
      "inclusion", "differential-inclusion verdict for the optimal path");
  add_problem(c_incl);
  add_value_grid(c_incl);
  opt_num(c_incl, "--start-x", "start_x", "where the path starts");
  opt_int(c_incl, "--perturb-node", "perturb_node",
          "interior node to displace (test rejection)");
  opt_int(c_incl, "--perturb-offset", "perturb_offset",
          "displacement in lattice steps");
  opt_num(c_incl, "--tol", "tol", "membership tolerance");
  opt_num(c_incl, "--pass-fraction", "pass_fraction",
          "required fraction of passing nodes");
  opt_num(c_incl, "--action-tol", "action_tol", "optimality slack");
  opt_num(c_incl, "--equality-tol", "equality_tol",
          "derivative equality tolerance");
  add_common(c_incl);

  CLI::App* c_cat = app.add_subcommand("catalog", "built-in problem data");
  add_common(c_cat);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return usage_error(e.get_name() + std::string(": ") + e.what());
  }

  auto start = std::chrono::steady_clock::now();
  std::vector<std::string> written;

  auto emit = [&](const char* text, const std::string& path) {
    if (path.empty()) {
      std::fwrite(text, 1, std::strlen(text), stdout);
      return true;
    }
    std::ofstream out(path, std::ios::binary);
    if (out) out << text;
    if (!out) {
      usage_error("cannot write '" + path + "'");
      return false;
    }
    written.push_back(path);
    return true;
  };

  std::string problem_text;
  OwnedProblem prob;
  if (!problem_path.empty()) {
    bool ok = false;
    problem_text = read_file(problem_path, ok);
    if (!ok) return usage_error("cannot read '" + problem_path + "'");
    if (vc_problem_parse(problem_text.c_str(), &prob.handle) != VC_OK)
      return api_error();
  }
  std::string cfg_text = cfg.dump();

  int code = 0;
  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();

  if (name == "catalog") {
    OwnedText text;
    if (vc_catalog_json(&text.text) != VC_OK) return api_error();
    if (!emit(text.text, out_path)) return 2;
  } else if (name == "envelope") {
    OwnedText text;
    if (vc_envelope_csv(cfg_text.c_str(), &text.text) != VC_OK)
      return api_error();
    if (!emit(text.text, out_path)) return 2;
  } else if (name == "lft") {
    OwnedText text;
    if (vc_conjugate_csv(cfg_text.c_str(), &text.text) != VC_OK)
      return api_error();
    if (!emit(text.text, out_path)) return 2;
  } else if (name == "solve") {
    OwnedText report, csv;
    if (vc_solve(prob.handle, cfg_text.c_str(), &report.text,
                 traj_path.empty() ? nullptr : &csv.text) != VC_OK)
      return api_error();
    if (!emit(report.text, out_path)) return 2;
    if (csv.text && !emit(csv.text, traj_path)) return 2;
  } else if (name == "dbr") {
    OwnedText report;
    vc_status st =
        vc_dbr(prob.handle, variant.c_str(), cfg_text.c_str(), &report.text);
    if (st == VC_ERROR) return api_error();
    if (!emit(report.text, out_path)) return 2;
    code = st;
  } else if (name == "bound") {
    OwnedText report;
    vc_status st = vc_bound(prob.handle, cfg_text.c_str(), &report.text);
    if (st == VC_ERROR) return api_error();
    if (!emit(report.text, out_path)) return 2;
    code = st;
  } else if (name == "value") {
    OwnedGrid grid;
    if (vc_value_compute(prob.handle, cfg_text.c_str(), &grid.handle) != VC_OK)
      return api_error();
    OwnedText csv;
    if (vc_value_csv(grid.handle, &csv.text) != VC_OK) return api_error();
    if (!emit(csv.text, out_path)) return 2;
  } else if (name == "hj" || name == "inclusion") {
    OwnedGrid grid;
    if (vc_value_compute(prob.handle, cfg_text.c_str(), &grid.handle) != VC_OK)
      return api_error();
    OwnedText report;
    vc_status st =
        name == "hj"
            ? vc_hj(grid.handle, prob.handle, cfg_text.c_str(), &report.text)
            : vc_inclusion(grid.handle, prob.handle, cfg_text.c_str(),
                           &report.text);
    if (st == VC_ERROR) return api_error();
    if (!emit(report.text, out_path)) return 2;
    code = st;
  }

  if (!manifest_path.empty()) {
    auto elapsed = std::chrono::steady_clock::now() - start;
    json man;
    std::string cmd;
    for (int i = 0; i < argc; ++i) {
      if (i) cmd += ' ';
      cmd += argv[i];
    }
    man["command"] = cmd;
    man["version"] = vc_version();
    man["config"] = cfg;
    if (!problem_path.empty()) man["problem_hash"] = hash_hex(problem_text);
    man["wall_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
    man["outputs"] = written;
    std::string text = man.dump(2) + "\n";
    if (!emit(text.c_str(), manifest_path)) return 2;
  }

  return code;
}
