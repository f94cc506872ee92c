#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bellbound/complex_matrix.hpp"
#include "bellbound/rng.hpp"
#include "bellbound/scenario.hpp"
#include "bellbound/tensor_ops.hpp"
#include "bellbound/tolerances.hpp"

namespace bellbound {

// One positive operator per outcome, summing to the identity.
struct Povm {
    std::vector<ComplexMatrix> elements;

    int outcomes() const noexcept { return static_cast<int>(elements.size()); }
    int dim() const noexcept {
        return elements.empty() ? 0
                                : static_cast<int>(elements[0].rows());
    }
};

// State on the tensor product of the local spaces plus one POVM per
// (party, setting).
struct QuantumModel {
    DimVector dims;                       // local dimension per party
    ComplexMatrix rho;                    // density operator, product space
    std::vector<std::vector<Povm>> povms; // povms[party][setting]

    // Shape checks only: cheap, run on every evaluation.
    void require_shape(const BellScenario& sc) const;
    // Full physicality check: Hermiticity, positivity, unit trace,
    // completeness of every POVM. With projective set, additionally demand
    // idempotent, mutually orthogonal elements (these use the looser of tol
    // and the spectral tolerance). Faults (validation) on the first breach.
    void validate(const BellScenario& sc, double tol = kTol.structural,
                  bool projective = false) const;
};

// P(lam|s) = tr[rho (M^1_{s_1 lam_1} (x) ... (x) M^N_{s_N lam_N})].
Behavior quantum_behavior(const BellScenario& sc, const QuantumModel& m);

// B = sum_{s,lam} f(s,lam) M^1_{s_1 lam_1} (x) ... (x) M^N_{s_N lam_N}.
ComplexMatrix bell_operator(const BellFunctional& f, const QuantumModel& m);

Povm random_projective_povm(Rng& rng, int dim, int outcomes);
QuantumModel random_model(const BellScenario& sc, const DimVector& dims,
                          Rng& rng);

struct SeesawOptions {
    int restarts        = 32;
    int max_iters       = 500;
    double obj_tol      = kTol.seesaw_obj;
    std::uint64_t seed  = kDefaultSeed;
    // The measurement steps keep iterates projective in either case (the
    // two-outcome optimum over all POVMs is attained by a projector); the
    // flag records the intent so callers can hold the returned model to
    // QuantumModel::validate(sc, tol, projective).
    bool projective     = true;
};

// Outcome of a see-saw run together with the deterministic baseline it is
// measured against. ratio = |quantum_value| / lhv_norm is a lower bound on
// the violation the functional admits on these local dimensions.
struct ViolationReport {
    double quantum_value = 0.0;
    double lhv_norm      = 0.0;
    double ratio         = 0.0;
    QuantumModel model;            // attaining model
    int iterations       = 0;      // sweeps used by the winning restart
    int restarts         = 0;      // restarts actually run
    bool converged       = false;  // winning restart met obj_tol
    std::vector<double> trajectory; // objective after each sweep (winner)
    LhvConstants lhv;
};

// Alternating maximization of tr[rho B]: exact top-eigenvector state step,
// exact two-outcome measurement step, greedy eigenvector assignment plus
// pairwise refinement for more outcomes. The objective never decreases.
// Restarts run in parallel, capped by BELLBOUND_THREADS; the result is
// independent of the thread count.
ViolationReport seesaw(const BellFunctional& f, const DimVector& dims,
                       const SeesawOptions& opt = {});

// Ratio attained by one concrete model: |<f, P_model>| / lhv_norm(f).
// Faults (validation) when the functional has lhv_norm 0.
double violation_ratio(const BellFunctional& f, const QuantumModel& m);

// Range of values a quantum model can reach when the violation ratio is at
// most upsilon, in terms of the deterministic extremes of the functional:
//   [inf - (upsilon-1)/2 (sup-inf),  sup + (upsilon-1)/2 (sup-inf)].
struct Envelope {
    double lower = 0.0;
    double upper = 0.0;
};

Envelope quantum_envelope(double lhv_sup, double lhv_inf, double upsilon);

// Same, with the extremes obtained by exhaustive strategy enumeration.
Envelope quantum_envelope(const BellFunctional& f, double upsilon);

inline Envelope envelope_from_constants(const LhvConstants& c,
                                        double upsilon) {
    return quantum_envelope(c.sup, c.inf, upsilon);
}

// Exact maximum of the two-setting correlation functional (+1,+1,+1,-1)
// over planar qubit measurements with angles on a uniform grid of the given
// resolution (at least 8), against the maximally entangled pair correlation
// E(a,b) = -cos(a-b). Runs in O(resolution^2). A resolution divisible by 8
// contains the optimal configuration, so the result is 2 sqrt 2 exactly.
double grid_oracle_chsh(int resolution);

// Number of worker threads see-saw restarts may use: BELLBOUND_THREADS if
// set, hardware concurrency otherwise, at least 1.
int env_thread_cap();

} // namespace bellbound
