#pragma once

// Self-check suite run by the `verify` subcommand. Every check uses fixed
// seeds, so the measured values are reproducible at a fixed node count.

#include <string>
#include <vector>

#include "shel/quadrature.hpp"

namespace shel {

struct CheckResult {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

std::vector<CheckResult> run_invariant_suite(const QuadratureSpec& spec = {});

} // namespace shel
