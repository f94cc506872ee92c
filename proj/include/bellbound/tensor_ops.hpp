#pragma once

#include "bellbound/complex_matrix.hpp"
#include "bellbound/rng.hpp"
#include "bellbound/tolerances.hpp"

#include <cstdint>
#include <set>
#include <vector>

namespace bellbound {

// Kronecker product; dims multiply.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// c (+)= a (x) b into a preallocated matrix; avoids allocation churn when
// assembling large operator sums.
void kron_into(ComplexMatrix& c, const ComplexMatrix& a,
               const ComplexMatrix& b, bool accumulate);

// Kronecker chain over a factor list.
ComplexMatrix kron_all(const std::vector<const ComplexMatrix*>& factors);

// Reduced operator on the kept factors (0-based, ascending). Trace preserved.
ComplexMatrix partial_trace(const ComplexMatrix& w, const DimVector& dims,
                            const std::set<int>& keep);

// tr[W (F_0 (x) ... (x) F_{K-1})] without materializing the product.
cd trace_contract(const ComplexMatrix& w, const DimVector& dims,
                  const std::vector<const ComplexMatrix*>& factors);

struct EigResult {
    std::vector<double> eigenvalues; // descending
    ComplexMatrix eigenvectors;      // orthonormal columns, same order
};

// Cyclic complex Jacobi for Hermitian matrices. Faults on non-Hermitian
// input (tolerance kTol.structural).
EigResult hermitian_eig(const ComplexMatrix& a,
                        double hermiticity_tol = kTol.structural);

// Sum of absolute eigenvalues (Hermitian input).
double trace_norm(const ComplexMatrix& a);

enum class TensorPositivity { no_violation_found, violated };

struct TensorPositivityReport {
    TensorPositivity verdict = TensorPositivity::no_violation_found;
    double worst             = 0.0; // minimum tr[W (X_1 (x) ... )] observed
    double worst_scaled      = 0.0; // same, divided by prod||X_j|| * ||W||_1
    int samples              = 0;
};

// One-sided Monte-Carlo refutation test of tensor positivity: draws Wishart
// tuples X_j = G G^dagger and looks for tr[W (X_1 (x) ... (x) X_m)] < 0.
// "no_violation_found" never proves tensor positivity.
TensorPositivityReport mc_tensor_positive(const ComplexMatrix& w,
                                          const DimVector& dims, int samples,
                                          std::uint64_t seed);

// Permutation (flip) operator on C^d (x) C^d.
ComplexMatrix flip_operator(int d);

// Random object helpers (all streams derived from the passed Rng).
ComplexMatrix random_ginibre(Rng& rng, int rows, int cols);
ComplexMatrix random_hermitian(Rng& rng, int n);
ComplexMatrix random_wishart(Rng& rng, int n); // G G^dagger, positive
ComplexMatrix random_unitary(Rng& rng, int n); // Haar via Gram-Schmidt
std::vector<cd> random_pure_state(Rng& rng, int dim);

} // namespace bellbound
