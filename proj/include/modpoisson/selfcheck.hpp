#pragma once

#include <string>
#include <vector>

namespace modpoisson::selfcheck {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Desk-scale invariant suite over every module; a few seconds total.
std::vector<CheckResult> run_all();

}  // namespace modpoisson::selfcheck
