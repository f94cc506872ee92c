#pragma once

#include <string>
#include <vector>

namespace bellbound {

// One named end-to-end check with its wall time and a value trace for the
// report. Checks are deterministic: detail strings depend only on computed
// numbers, never on timing.
struct CheckResult {
    std::string name;
    std::string suite;
    bool passed    = false;
    double seconds = 0.0;
    double limit   = 0.0; // wall-time budget the check must stay under
    std::string detail;
};

// Runs the named suite: attainability, structure, estimates, catalog, or
// all. Unknown names fault.
std::vector<CheckResult> run_acceptance(const std::string& suite);

} // namespace bellbound
