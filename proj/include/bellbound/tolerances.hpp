#pragma once

namespace bellbound {

// Single source of truth for the numeric tolerances quoted in operation
// contracts and asserted by the test suites.
struct Tolerances {
    double structural = 1e-10; // hermiticity, unit trace, POVM completeness
    double spectral   = 1e-9;  // eigendecomposition reconstruction
    double algebraic  = 1e-12; // exact algebraic identities on O(1) data
    double signaling  = 1e-9;  // marginal consistency of float behaviors
    double seesaw_obj = 1e-9;  // see-saw convergence on objective improvement
};

inline constexpr Tolerances kTol{};

} // namespace bellbound
