#pragma once

#include <string>

#include "varcalc/lagrangian.hpp"

namespace varcalc {

// Parses a problem document.  Malformed documents raise SchemaError with the
// JSON pointer of the offending node; unknown names raise UnknownLagrangian.
//
//   {"kind":"lagrange","lagrangian":"quadratic","a":0,"b":1,
//    "xa":[0],"xb":[1],"bounds":{"A":0,"B":1,"alpha":1,"beta":1}}
//   {"kind":"bolza","lagrangian":"double_well","t":1.0,"x":[0],"phi":"zero"}
//
// "lagrangian" also accepts an inline spec {"name":...,"n":...,"expr-id":...}
// that instantiates a formula from the built-in expression table under a
// custom name.
ProblemInstance load_problem(const std::string& json_text);

// Machine-readable listing of the built-in Lagrangians and terminal costs.
std::string catalog_json();

}  // namespace varcalc
