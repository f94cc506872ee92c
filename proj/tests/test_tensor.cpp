#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"

#include "bellbound/complex_matrix.hpp"
#include "bellbound/errors.hpp"
#include "bellbound/rng.hpp"
#include "bellbound/tensor_ops.hpp"

using namespace bellbound;

namespace {

ComplexMatrix pauli_x() {
    ComplexMatrix m(2, 2);
    m.at(0, 1) = 1;
    m.at(1, 0) = 1;
    return m;
}

ComplexMatrix pauli_z() {
    ComplexMatrix m(2, 2);
    m.at(0, 0) = 1;
    m.at(1, 1) = -1;
    return m;
}

ComplexMatrix density(std::span<const cd> psi) {
    return ComplexMatrix::outer(psi, psi);
}

} // namespace

TEST_CASE("kron on basis vectors and the mixed-product rule") {
    const auto x  = pauli_x();
    const auto xx = kron(x, x);
    // (sigma_x (x) sigma_x) |00> = |11>
    std::vector<cd> e00 = {1, 0, 0, 0};
    auto v              = apply(xx, e00);
    CHECK(std::abs(v[3] - cd{1, 0}) <= 1e-15);
    CHECK(std::abs(v[0]) + std::abs(v[1]) + std::abs(v[2]) <= 1e-15);

    Rng rng(kDefaultSeed);
    const auto a = random_ginibre(rng, 3, 2);
    const auto b = random_ginibre(rng, 2, 4);
    const auto c = random_ginibre(rng, 2, 3);
    const auto d = random_ginibre(rng, 3, 2);
    // (A (x) C)(B (x) D) = AB (x) CD
    const auto lhs = matmul(kron(a, c), kron(b, d));
    const auto rhs = kron(matmul(a, b), matmul(c, d));
    CHECK(max_abs_diff(lhs, rhs) <= 1e-12);
}

TEST_CASE("kron_all matches nested kron and kron_into accumulates") {
    Rng rng(3);
    const auto a = random_hermitian(rng, 2);
    const auto b = random_hermitian(rng, 3);
    const auto c = random_hermitian(rng, 2);
    const auto chain = kron_all({&a, &b, &c});
    CHECK(max_abs_diff(chain, kron(kron(a, b), c)) <= 1e-13);

    ComplexMatrix acc(6, 6);
    kron_into(acc, a, b, false);
    kron_into(acc, a, b, true);
    CHECK(max_abs_diff(acc, 2.0 * kron(a, b)) <= 1e-13);
}

TEST_CASE("partial trace of the maximally entangled pair is maximally mixed") {
    std::vector<cd> phi = {1.0 / std::sqrt(2.0), 0, 0, 1.0 / std::sqrt(2.0)};
    const auto rho      = density(phi);
    for (int keep = 0; keep < 2; ++keep) {
        auto red = partial_trace(rho, DimVector{2, 2}, {keep});
        CHECK(max_abs_diff(red, 0.5 * ComplexMatrix::identity(2)) <= 1e-14);
    }
}

TEST_CASE("partial trace composes and preserves trace") {
    Rng rng(5);
    const DimVector dims{2, 3, 2};
    auto w = random_hermitian(rng, static_cast<int>(dims.product()));
    // Tracing out everything in two stages equals the scalar trace.
    auto w01 = partial_trace(w, dims, {0, 1});
    auto w0  = partial_trace(w01, DimVector{2, 3}, {0});
    auto w_direct = partial_trace(w, dims, {0});
    CHECK(max_abs_diff(w0, w_direct) <= 1e-12);
    CHECK(std::abs(w0.trace() - w.trace()) <= 1e-12);
}

TEST_CASE("trace_contract equals trace against the materialized product") {
    Rng rng(7);
    const DimVector dims{2, 2, 3};
    const auto w = random_hermitian(rng, static_cast<int>(dims.product()));
    const auto f0 = random_hermitian(rng, 2);
    const auto f1 = random_hermitian(rng, 2);
    const auto f2 = random_hermitian(rng, 3);
    const cd direct = trace_product(w, kron_all({&f0, &f1, &f2}));
    const cd lazy   = trace_contract(w, dims, {&f0, &f1, &f2});
    CHECK(std::abs(direct - lazy) <= 1e-11);
}

TEST_CASE("hermitian_eig on closed-form instances") {
    auto ex = hermitian_eig(pauli_x());
    REQUIRE(ex.eigenvalues.size() == 2);
    CHECK(ex.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(ex.eigenvalues[1] == doctest::Approx(-1.0).epsilon(1e-14));

    auto ed = hermitian_eig(ComplexMatrix::diagonal({cd{3, 0}, cd{-1, 0},
                                                     cd{2, 0}}));
    CHECK(ed.eigenvalues[0] == doctest::Approx(3.0));
    CHECK(ed.eigenvalues[1] == doctest::Approx(2.0));
    CHECK(ed.eigenvalues[2] == doctest::Approx(-1.0));

    auto ez = hermitian_eig(ComplexMatrix(4, 4));
    for (double lam : ez.eigenvalues) CHECK(std::abs(lam) <= 1e-15);
}

TEST_CASE("hermitian_eig reconstructs and returns orthonormal vectors") {
    Rng rng(11);
    for (int n : {2, 5, 17}) {
        const auto a = random_hermitian(rng, n);
        auto e       = hermitian_eig(a);

        // V diag(lam) V^dagger = A
        ComplexMatrix lam(static_cast<std::size_t>(n),
                          static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            lam.at(static_cast<std::size_t>(i), static_cast<std::size_t>(i)) =
                e.eigenvalues[static_cast<std::size_t>(i)];
        auto rec =
            matmul(matmul(e.eigenvectors, lam), e.eigenvectors.adjoint());
        CHECK(max_abs_diff(rec, a) <= 1e-9);

        auto gram = matmul(e.eigenvectors.adjoint(), e.eigenvectors);
        CHECK(max_abs_diff(gram, ComplexMatrix::identity(
                                     static_cast<std::size_t>(n))) <= 1e-10);

        for (std::size_t i = 1; i < e.eigenvalues.size(); ++i)
            CHECK(e.eigenvalues[i - 1] >= e.eigenvalues[i]);
    }
}

TEST_CASE("hermitian_eig faults on non-Hermitian input") {
    ComplexMatrix m(2, 2);
    m.at(0, 1) = cd{1, 0};
    m.at(1, 0) = cd{0.5, 0};
    CHECK_THROWS_AS((void)hermitian_eig(m), Error);
}

TEST_CASE("trace_norm agrees with closed forms") {
    CHECK(trace_norm(ComplexMatrix::diagonal({cd{1, 0}, cd{-2, 0}})) ==
          doctest::Approx(3.0).epsilon(1e-14));

    Rng rng(13);
    auto psi = random_pure_state(rng, 5);
    CHECK(trace_norm(density(psi)) == doctest::Approx(1.0).epsilon(1e-12));

    for (int d = 2; d <= 6; ++d) {
        const auto v = flip_operator(d);
        CHECK(std::abs(trace_norm(v) - static_cast<double>(d) * d) <= 1e-12);
    }

    // |tr W| <= ||W||_1 on random Hermitian matrices.
    for (int t = 0; t < 5; ++t) {
        auto w = random_hermitian(rng, 6);
        CHECK(std::abs(w.trace().real()) <= trace_norm(w) + 1e-12);
    }
}

TEST_CASE("flip operator swaps the factors") {
    for (int d : {2, 3}) {
        const auto v = flip_operator(d);
        Rng rng(17 + static_cast<std::uint64_t>(d));
        auto a = random_pure_state(rng, d);
        auto b = random_pure_state(rng, d);
        std::vector<cd> ab(static_cast<std::size_t>(d) * d);
        std::vector<cd> ba(ab.size());
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                ab[static_cast<std::size_t>(i) * d + j] = a[i] * b[j];
                ba[static_cast<std::size_t>(i) * d + j] = b[i] * a[j];
            }
        auto out = apply(v, ab);
        double worst = 0.0;
        for (std::size_t i = 0; i < ab.size(); ++i)
            worst = std::max(worst, std::abs(out[i] - ba[i]));
        CHECK(worst <= 1e-14);
        CHECK(std::abs(v.trace() - cd{static_cast<double>(d), 0}) <= 1e-14);
    }
}

TEST_CASE("mc_tensor_positive separates psd and flip from indefinite cases") {
    Rng rng(19);
    const auto g   = random_ginibre(rng, 4, 4);
    const auto psd = matmul(g, g.adjoint());
    auto rep_psd   = mc_tensor_positive(psd, DimVector{2, 2}, 500, 1);
    CHECK(rep_psd.verdict == TensorPositivity::no_violation_found);
    CHECK(rep_psd.samples == 500);

    // The flip operator is tensor positive despite being indefinite:
    // tr[V (X (x) Y)] = tr[X Y] >= 0 for positive X, Y.
    auto rep_flip = mc_tensor_positive(flip_operator(2), DimVector{2, 2},
                                       2000, 2);
    CHECK(rep_flip.verdict == TensorPositivity::no_violation_found);
    CHECK(rep_flip.worst >= 0.0);

    // sigma_x (x) sigma_x pairs off-diagonal parts that fluctuate in sign.
    ComplexMatrix sx(2, 2);
    sx.at(0, 1) = 1;
    sx.at(1, 0) = 1;
    auto rep_xx = mc_tensor_positive(kron(sx, sx), DimVector{2, 2}, 2000, 2);
    CHECK(rep_xx.verdict == TensorPositivity::violated);
    CHECK(rep_xx.worst < 0.0);

    auto neg = cd{-1.0, 0.0} * ComplexMatrix::identity(4);
    auto rep_neg = mc_tensor_positive(neg, DimVector{2, 2}, 50, 3);
    CHECK(rep_neg.verdict == TensorPositivity::violated);
}

TEST_CASE("random unitaries are unitary") {
    Rng rng(23);
    for (int n : {2, 3, 5}) {
        auto u = random_unitary(rng, n);
        CHECK(max_abs_diff(matmul(u.adjoint(), u),
                           ComplexMatrix::identity(
                               static_cast<std::size_t>(n))) <= 1e-10);
    }
}

TEST_CASE("random states are unit and wisharts are positive") {
    Rng rng(29);
    auto psi = random_pure_state(rng, 7);
    CHECK(std::abs(norm(psi) - 1.0) <= 1e-12);

    auto w = random_wishart(rng, 4);
    CHECK(w.hermiticity_error() <= 1e-13);
    auto e = hermitian_eig(w);
    CHECK(e.eigenvalues.back() >= -1e-12);
}
