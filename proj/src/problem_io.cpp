#include "varcalc/problem_io.hpp"

#include <json.hpp>

#include "varcalc/catalog.hpp"
#include "varcalc/errors.hpp"

namespace varcalc {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& pointer, const std::string& what) {
  throw SchemaError(pointer, what);
}

const json& require(const json& obj, const std::string& key,
                    const std::string& parent) {
  if (!obj.is_object()) fail(parent.empty() ? "/" : parent, "expected object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(parent + "/" + key, "missing required field");
  return *it;
}

double require_number(const json& obj, const std::string& key,
                      const std::string& parent) {
  const json& v = require(obj, key, parent);
  if (!v.is_number()) fail(parent + "/" + key, "expected number");
  return v.get<double>();
}

Vec require_point(const json& obj, const std::string& key,
                  const std::string& parent) {
  const json& v = require(obj, key, parent);
  if (v.is_number()) return {v.get<double>()};
  if (v.is_array()) {
    Vec out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number())
        fail(parent + "/" + key + "/" + std::to_string(i), "expected number");
      out.push_back(v[i].get<double>());
    }
    if (out.empty()) fail(parent + "/" + key, "point must be nonempty");
    return out;
  }
  fail(parent + "/" + key, "expected number or array of numbers");
}

LagrangianSpec parse_lagrangian(const json& node, int dim) {
  if (node.is_string()) return find_lagrangian(node.get<std::string>(), dim);
  if (node.is_object()) {
    const json& name = require(node, "name", "/lagrangian");
    if (!name.is_string()) fail("/lagrangian/name", "expected string");
    const json& expr = require(node, "expr-id", "/lagrangian");
    if (!expr.is_string()) fail("/lagrangian/expr-id", "expected string");
    int n = dim;
    if (auto it = node.find("n"); it != node.end()) {
      if (!it->is_number_integer() || it->get<int>() < 1)
        fail("/lagrangian/n", "expected positive integer");
      n = it->get<int>();
      if (n != dim)
        fail("/lagrangian/n", "dimension disagrees with the endpoint data");
    }
    LagrangianSpec spec = find_lagrangian(expr.get<std::string>(), n);
    spec.name = name.get<std::string>();
    return spec;
  }
  fail("/lagrangian", "expected catalog name or inline spec object");
}

}  // namespace

ProblemInstance load_problem(const std::string& json_text) {
  json doc = json::parse(json_text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) fail("/", "document is not valid JSON");
  if (!doc.is_object()) fail("/", "expected top-level object");

  const json& kind = require(doc, "kind", "");
  if (!kind.is_string()) fail("/kind", "expected string");
  std::string kind_s = kind.get<std::string>();

  ProblemInstance p;
  if (kind_s == "lagrange") {
    p.kind = ProblemKind::kLagrange;
    p.a = require_number(doc, "a", "");
    p.b = require_number(doc, "b", "");
    if (!(p.a < p.b)) fail("/b", "interval must satisfy a < b");
    p.xa = require_point(doc, "xa", "");
    p.xb = require_point(doc, "xb", "");
    if (p.xa.size() != p.xb.size())
      fail("/xb", "endpoint dimensions disagree");
    p.lagrangian = parse_lagrangian(require(doc, "lagrangian", ""),
                                    static_cast<int>(p.xa.size()));
  } else if (kind_s == "bolza") {
    p.kind = ProblemKind::kBolza;
    p.horizon = require_number(doc, "t", "");
    if (!(p.horizon > 0.0)) fail("/t", "horizon must be positive");
    p.x0 = require_point(doc, "x", "");
    const json& phi = require(doc, "phi", "");
    if (!phi.is_string()) fail("/phi", "expected terminal cost name");
    p.terminal = find_terminal(phi.get<std::string>(),
                               static_cast<int>(p.x0.size()));
    p.lagrangian = parse_lagrangian(require(doc, "lagrangian", ""),
                                    static_cast<int>(p.x0.size()));
  } else {
    fail("/kind", "expected 'lagrange' or 'bolza'");
  }

  if (auto it = doc.find("bounds"); it != doc.end()) {
    DataBounds b;
    b.A = require_number(*it, "A", "/bounds");
    b.B = require_number(*it, "B", "/bounds");
    b.alpha = require_number(*it, "alpha", "/bounds");
    b.beta = require_number(*it, "beta", "/bounds");
    if (!(b.alpha > 0.0) || !(b.beta >= b.alpha))
      fail("/bounds/beta", "interval bounds need 0 < alpha <= beta");
    p.bounds = b;
  }
  return p;
}

std::string catalog_json() {
  json out;
  out["lagrangians"] = json::array();
  for (const auto& entry : builtin_catalog()) {
    json e;
    e["name"] = entry.name;
    e["gauge"] = entry.gauge.name;
    e["flags"] = {{"convex_in_u", entry.flags.convex_in_u},
                  {"differentiable_in_u", entry.flags.differentiable_in_u},
                  {"semiconvex_in_u", entry.flags.semiconvex_in_u},
                  {"lipschitz_in_u", entry.flags.lipschitz_in_u}};
    out["lagrangians"].push_back(e);
  }
  out["terminal_costs"] = json::array();
  for (const auto& t : builtin_terminal_costs())
    out["terminal_costs"].push_back(t.name);
  return out.dump(2) + "\n";
}

}  // namespace varcalc
