#pragma once

#include <string>
#include <vector>

#include "varcalc/lagrangian.hpp"

namespace varcalc {

// Built-in Lagrangians with exact closed-form gauges, local bounds and
// certificates.  The table entries are immutable; lookups return copies
// instantiated for the requested state dimension (the closed forms are
// dimension-generic).
const std::vector<LagrangianSpec>& builtin_catalog();
LagrangianSpec find_lagrangian(const std::string& name, int dim = 1);

const std::vector<TerminalCost>& builtin_terminal_costs();
TerminalCost find_terminal(const std::string& name, int dim = 1);

// Geometric certificate grid shared by the catalog gauges.
SuperlinearityCertificate tabulate_certificate(
    const std::function<double(double)>& exact_ratio, double level_min = 1e-2,
    double level_max = 2e3, int levels = 241);

}  // namespace varcalc
