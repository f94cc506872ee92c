#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bellbound/complex_matrix.hpp"
#include "bellbound/tensor_ops.hpp"

namespace bellbound {

// Largest tensor dimension a source operator is allowed to occupy.
inline constexpr std::size_t kSourceOpDimCap = 4096;

// Expansion of a unit vector across the pivot site versus a product basis of
// the remaining sites:
//   psi = sum_t beta_t (phi_t (x) e_t),  beta_t >= 0, |phi_t| = 1,
// with t running over basis tuples of the non-pivot sites in ascending site
// order and e_t drawn from the per-site bases (computational by default).
// sigma holds the raw coefficients: column t of sigma, read in the pivot
// basis, equals beta_t phi_t.
struct PureDecomposition {
    int pivot = 0;
    DimVector dims;                       // original site dimensions
    std::vector<ComplexMatrix> bases;     // per site; empty = computational
    ComplexMatrix sigma;                  // d_pivot x (#tuples) coefficients
    std::vector<double> beta;             // weights, sum of squares = 1
    std::vector<std::vector<cd>> phi;     // unit vectors on the pivot site
    std::vector<std::vector<int>> tuples; // basis tuples, ascending site order
};

// Reads the expansion off psi (which must be unit within 1e-9). When bases
// are given there must be one square orthonormal matrix per site, columns
// being the basis vectors; phi is returned in the original coordinates.
PureDecomposition decompose_pure_state(
    std::span<const cd> psi, const DimVector& dims, int pivot = 0,
    std::vector<ComplexMatrix> bases = {});

// Reassembles the state the decomposition encodes, in original site order.
std::vector<cd> reassemble(const PureDecomposition& dec);

// Hermitian-pair block on `copies` tensor copies of C^d: tracing out all but
// any one copy returns |u><v|, and w_block(u, v, c) is the adjoint of
// w_block(v, u, c). For distinct vectors the block combines tensor powers of
// the four projectors onto (u +- v)/sqrt2 and (u +- iv)/sqrt2; for u = v it
// is (|u><u|)^(x)copies. Faults unless u, v are unit and orthogonal (or
// equal).
ComplexMatrix w_block(std::span<const cd> u, std::span<const cd> v,
                      int copies);

// Same on the computational pair (e_j, e_k) of C^d.
ComplexMatrix w_block(int d, int copies, int j, int k);

// Trace-one Hermitian operator on
//   H_pivot (x) (x)_{n != pivot} H_n^{(x) S_n}
// whose partial trace onto the pivot slot plus one copy per remaining site
// reproduces |psi><psi| for every choice of copies.
struct SourceOperator {
    ComplexMatrix op;
    DimVector block_dims;                        // one entry per tensor slot
    std::vector<std::vector<int>> slots_of_site; // site -> slots of its copies
    DimVector site_dims;                         // original site dimensions
    std::vector<int> settings;                   // copy counts (pivot: 1)
    std::vector<double> beta;                    // weights used
    int pivot = 0;
};

// Assembles the operator from a decomposition; `settings` lists the copy
// count S_n of each non-pivot site in ascending site order (length N-1, all
// >= 1). All settings 1 reproduces |psi><psi| exactly. Faults with the
// required size when the assembled dimension exceeds the cap.
SourceOperator build_source_operator(const PureDecomposition& dec,
                                     std::span<const int> settings);

struct DilationReport {
    double partial_trace_error = 0.0; // worst over all copy choices
    double dilation_error      = 0.0; // worst contraction mismatch observed
    int trials                 = 0;
};

// Checks both defining properties of the source operator against the state:
// every copy choice must trace down to |psi><psi|, and contracting random
// Hermitian observables against the chosen copies must match the direct
// expectation on the state.
DilationReport verify_dilation(const SourceOperator& t, std::span<const cd> psi,
                               int trials, std::uint64_t seed);

struct CoveringEstimate {
    double estimate      = 0.0; // exact pair-sum, state-dependent
    double theorem_bound = 0.0; // (2d-1)^(N-1), beta-independent
};

// sum_{t,t'} beta_t beta_{t'} 2^{hamming(t,t')}: what the triangle inequality
// yields for the trace norm of any source operator built on beta, independent
// of the copy counts. beta must hold d^{N-1} entries, nonnegative, with
// sum of squares 1 within 1e-10. The estimate never exceeds the bound; the
// uniform table attains it.
CoveringEstimate covering_estimate(std::span<const double> beta, int d, int N);

// Same from a decomposition, with the bound generalized to
// prod_{n != pivot} (2 d_n - 1) when the site dimensions differ.
CoveringEstimate covering_estimate(const PureDecomposition& dec);

// The product bound the covering estimate is measured against.
double covering_bound(const DimVector& dims, int pivot = 0);

// (sum_j |j...j>) / sqrt d on `parties` sites of dimension d.
std::vector<cd> ghz_state(int d, int parties);

// All-amplitudes-equal unit vector; its covering estimate meets
// covering_bound exactly.
std::vector<cd> uniform_superposition(int d, int parties);

} // namespace bellbound
