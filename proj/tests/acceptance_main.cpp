// Runs every acceptance check and prints one pass/fail line per criterion.
// Exit status 0 iff all checks pass.

#include <cstdio>
#include <iostream>
#include <iomanip>

#include "bellbound/acceptance.hpp"

int main() {
    const auto checks = bellbound::run_acceptance("all");
    bool all          = true;
    for (const auto& c : checks) {
        all = all && c.passed;
        std::cout << (c.passed ? "[PASS] " : "[FAIL] ") << c.suite << "/"
                  << c.name << "  (" << std::fixed << std::setprecision(2)
                  << c.seconds << "s, limit " << std::setprecision(0)
                  << c.limit << "s)";
        std::cout.unsetf(std::ios::fixed);
        std::cout << std::setprecision(6);
        if (!c.detail.empty()) std::cout << "  " << c.detail;
        std::cout << "\n";
    }
    std::size_t passed = 0;
    for (const auto& c : checks) passed += c.passed ? 1 : 0;
    std::cout << passed << "/" << checks.size() << " checks passed\n";
    return all ? 0 : 1;
}
