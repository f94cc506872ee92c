#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"

#include "bellbound/complex_matrix.hpp"
#include "bellbound/errors.hpp"
#include "bellbound/rng.hpp"
#include "bellbound/source_operator.hpp"
#include "bellbound/tensor_ops.hpp"

using namespace bellbound;

namespace {

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i)
        r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

// Independent oracle for the uniform-table pair sum:
// sum_k C(N-1, k) (d-1)^k 2^k, the binomial expansion of (2d-1)^(N-1).
double uniform_pair_sum_oracle(int d, int N) {
    double total = 0.0;
    for (int k = 0; k <= N - 1; ++k)
        total += binomial(N - 1, k) * std::pow(double(d - 1), k) *
                 std::pow(2.0, k);
    return total;
}

std::vector<cd> basis_vector(int d, int j) {
    std::vector<cd> v(static_cast<std::size_t>(d));
    v[static_cast<std::size_t>(j)] = 1.0;
    return v;
}

} // namespace

TEST_CASE("ghz decomposition: diagonal weights, basis pivot vectors") {
    const auto psi = ghz_state(2, 3);
    const auto dec = decompose_pure_state(psi, DimVector{2, 2, 2});
    REQUIRE(dec.beta.size() == 4); // tuples (00, 01, 10, 11)
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(dec.beta[0] - r) <= 1e-14);
    CHECK(std::abs(dec.beta[1]) <= 1e-14);
    CHECK(std::abs(dec.beta[2]) <= 1e-14);
    CHECK(std::abs(dec.beta[3] - r) <= 1e-14);
    CHECK(std::abs(dec.phi[0][0] - cd{1, 0}) <= 1e-14);
    CHECK(std::abs(dec.phi[3][1] - cd{1, 0}) <= 1e-14);

    double sq = 0.0;
    for (double b : dec.beta) sq += b * b;
    CHECK(std::abs(sq - 1.0) <= 1e-12);
}

TEST_CASE("product state decomposes onto a single tuple") {
    // |0> (x) |1> : beta concentrates on tuple (1) with phi = e_0.
    std::vector<cd> psi(4);
    psi[1] = 1.0;
    const auto dec = decompose_pure_state(psi, DimVector{2, 2});
    CHECK(std::abs(dec.beta[0]) <= 1e-14);
    CHECK(std::abs(dec.beta[1] - 1.0) <= 1e-14);
    CHECK(std::abs(dec.phi[1][0] - cd{1, 0}) <= 1e-14);
}

TEST_CASE("decomposition round-trips through reassemble") {
    Rng rng(kDefaultSeed);
    struct Case {
        DimVector dims;
        int pivot;
    };
    std::vector<Case> cases = {{DimVector{2, 2}, 0},
                               {DimVector{2, 3}, 1},
                               {DimVector{3, 2, 2}, 0},
                               {DimVector{2, 2, 2}, 2}};
    int t = 0;
    for (const auto& c : cases) {
        auto child     = rng.fork(static_cast<std::uint64_t>(++t));
        const auto psi = random_pure_state(
            child, static_cast<int>(c.dims.product()));
        const auto dec = decompose_pure_state(psi, c.dims, c.pivot);
        const auto back = reassemble(dec);
        double worst    = 0.0;
        for (std::size_t i = 0; i < psi.size(); ++i)
            worst = std::max(worst, std::abs(psi[i] - back[i]));
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("decomposition round-trips with non-computational bases") {
    Rng rng(77);
    const DimVector dims{2, 3};
    const auto psi = random_pure_state(rng, 6);
    std::vector<ComplexMatrix> bases;
    bases.push_back(random_unitary(rng, 2));
    bases.push_back(random_unitary(rng, 3));
    const auto dec  = decompose_pure_state(psi, dims, 0, bases);
    const auto back = reassemble(dec);
    double worst    = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i)
        worst = std::max(worst, std::abs(psi[i] - back[i]));
    CHECK(worst <= 1e-12);

    // Non-orthonormal bases are rejected.
    auto bad = bases;
    bad[0].at(0, 0) += cd{0.2, 0.0};
    CHECK_THROWS_AS((void)decompose_pure_state(psi, dims, 0, bad), Error);
}

TEST_CASE("one-copy w_block is exactly the matrix unit") {
    for (int d : {2, 3, 4})
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) {
                const auto w = w_block(d, 1, j, k);
                const auto unit = ComplexMatrix::outer(basis_vector(d, j),
                                                       basis_vector(d, k));
                CHECK(max_abs_diff(w, unit) <= 1e-12);
            }
}

TEST_CASE("w_block traces down to the matrix unit on every copy") {
    for (int copies : {2, 3}) {
        const int d  = 2;
        const auto w = w_block(d, copies, 0, 1);
        // The block pair is mutually adjoint: W(j,k)^dagger = W(k,j).
        CHECK(max_abs_diff(w.adjoint(), w_block(d, copies, 1, 0)) <= 1e-13);
        DimVector dims{std::vector<int>(static_cast<std::size_t>(copies), d)};
        for (int keep = 0; keep < copies; ++keep) {
            const auto red = partial_trace(w, dims, {keep});
            const auto unit = ComplexMatrix::outer(basis_vector(d, 0),
                                                   basis_vector(d, 1));
            CHECK(max_abs_diff(red, unit) <= 1e-12);
        }
    }
}

TEST_CASE("w_block on a random orthonormal pair traces down to |u><v|") {
    Rng rng(31);
    const int d  = 3;
    const auto u_mat = random_unitary(rng, d);
    std::vector<cd> u(static_cast<std::size_t>(d)), v(u.size());
    for (int i = 0; i < d; ++i) {
        u[static_cast<std::size_t>(i)] = u_mat.at(static_cast<std::size_t>(i), 0);
        v[static_cast<std::size_t>(i)] = u_mat.at(static_cast<std::size_t>(i), 1);
    }
    const auto w = w_block(u, v, 2);
    const auto red = partial_trace(w, DimVector{d, d}, {1});
    CHECK(max_abs_diff(red, ComplexMatrix::outer(u, v)) <= 1e-12);

    // Adjoint symmetry: w(u, v)^dagger = w(v, u).
    CHECK(max_abs_diff(w.adjoint(), w_block(v, u, 2)) <= 1e-13);

    // Equal-vector branch: plain projector power.
    const auto wp = w_block(u, u, 2);
    CHECK(max_abs_diff(wp, kron(ComplexMatrix::outer(u, u),
                                ComplexMatrix::outer(u, u))) <= 1e-12);

    // Non-orthogonal pairs are rejected.
    auto skew = u;
    CHECK_THROWS_AS((void)w_block(skew, basis_vector(d, 0), 2), Error);
}

TEST_CASE("all-settings-one source operator is the state projector") {
    Rng rng(41);
    const DimVector dims{2, 3};
    const auto psi = random_pure_state(rng, 6);
    const auto dec = decompose_pure_state(psi, dims);
    const std::vector<int> ones{1};
    const auto t = build_source_operator(dec, ones);
    CHECK(max_abs_diff(t.op, ComplexMatrix::outer(psi, psi)) <= 1e-12);
}

TEST_CASE("ghz pair source operator: trace one, exact dilation") {
    const auto psi = ghz_state(2, 2);
    const auto dec = decompose_pure_state(psi, DimVector{2, 2});
    const std::vector<int> settings{2};
    const auto t = build_source_operator(dec, settings);
    REQUIRE(t.op.rows() == 8);
    CHECK(std::abs(t.op.trace() - cd{1, 0}) <= 1e-12);
    CHECK(t.op.hermiticity_error() <= 1e-12);

    const auto rep = verify_dilation(t, psi, 20, kDefaultSeed);
    CHECK(rep.partial_trace_error <= 1e-12);
    CHECK(rep.dilation_error <= 1e-12);
    CHECK(rep.trials == 20);
}

TEST_CASE("random states dilate correctly across setting patterns") {
    Rng rng(kDefaultSeed);
    struct Case {
        DimVector dims;
        std::vector<int> settings;
        int pivot;
    };
    std::vector<Case> cases = {{DimVector{2, 2}, {3}, 0},
                               {DimVector{2, 2, 2}, {2, 3}, 0},
                               {DimVector{3, 3}, {2}, 1},
                               {DimVector{2, 3, 2}, {1, 2}, 1}};
    int t = 0;
    for (const auto& c : cases) {
        auto child     = rng.fork(static_cast<std::uint64_t>(100 + ++t));
        const auto psi = random_pure_state(
            child, static_cast<int>(c.dims.product()));
        const auto dec = decompose_pure_state(psi, c.dims, c.pivot);
        const auto op  = build_source_operator(dec, c.settings);
        CHECK(std::abs(op.op.trace() - cd{1, 0}) <= 1e-10);
        const auto rep = verify_dilation(op, psi, 10, 9000 + t);
        CHECK(rep.partial_trace_error <= 1e-10);
        CHECK(rep.dilation_error <= 1e-9);
    }
}

TEST_CASE("covering estimate: concentrated, ghz, and uniform tables") {
    // Single nonzero weight: estimate 1 (2^0 on the diagonal pair).
    std::vector<double> solo(4, 0.0);
    solo[2] = 1.0;
    const auto s = covering_estimate(solo, 2, 3);
    CHECK(std::abs(s.estimate - 1.0) <= 1e-14);
    CHECK(std::abs(s.theorem_bound - 9.0) <= 1e-14);

    for (int d = 2; d <= 4; ++d)
        for (int N = 2; N <= 4; ++N) {
            // GHZ weights: d diagonal entries of 1/sqrt d.
            const int tuples = static_cast<int>(std::pow(double(d), N - 1));
            std::vector<double> ghz(static_cast<std::size_t>(tuples), 0.0);
            std::size_t step = 0, one = 1;
            for (int m = 1; m < N; ++m) {
                step += one;
                one *= static_cast<std::size_t>(d);
            }
            for (int j = 0; j < d; ++j)
                ghz[static_cast<std::size_t>(j) * step] =
                    1.0 / std::sqrt(double(d));
            const auto g = covering_estimate(ghz, d, N);
            const double want = std::pow(2.0, N - 1) * (d - 1) + 1.0;
            CHECK(std::abs(g.estimate - want) <= 1e-12);

            // Uniform weights attain the theorem bound exactly.
            std::vector<double> unif(
                static_cast<std::size_t>(tuples),
                1.0 / std::sqrt(double(tuples)));
            const auto u = covering_estimate(unif, d, N);
            CHECK(std::abs(u.estimate - u.theorem_bound) <= 1e-10);
            CHECK(std::abs(u.estimate - uniform_pair_sum_oracle(d, N)) <=
                  1e-9);
        }
}

TEST_CASE("covering estimate from decompositions and heterogeneous bounds") {
    const auto psi = uniform_superposition(3, 2);
    const auto dec = decompose_pure_state(psi, DimVector{3, 3});
    const auto c   = covering_estimate(dec);
    CHECK(std::abs(c.estimate - 5.0) <= 1e-12);
    CHECK(std::abs(c.theorem_bound - 5.0) <= 1e-12);

    CHECK(covering_bound(DimVector{2, 3, 4}, 0) ==
          doctest::Approx(35.0).epsilon(1e-14)); // (2*3-1)(2*4-1)
    CHECK(covering_bound(DimVector{4, 3, 2}, 1) ==
          doctest::Approx(21.0).epsilon(1e-14)); // (2*4-1)(2*2-1)
}

TEST_CASE("covering estimate validates its weight table") {
    std::vector<double> neg = {0.8, -0.6, 0.0, 0.0};
    CHECK_THROWS_AS((void)covering_estimate(neg, 2, 3), Error);
    std::vector<double> unnorm = {1.0, 1.0, 0.0, 0.0};
    CHECK_THROWS_AS((void)covering_estimate(unnorm, 2, 3), Error);
    std::vector<double> short_table = {1.0, 0.0};
    CHECK_THROWS_AS((void)covering_estimate(short_table, 2, 3), Error);
}

TEST_CASE("oversized source operators fault with the required size") {
    const auto psi = ghz_state(2, 2);
    const auto dec = decompose_pure_state(psi, DimVector{2, 2});
    const std::vector<int> huge{13}; // 2 * 2^13 = 16384 > 4096
    CHECK_THROWS_WITH_AS((void)build_source_operator(dec, huge),
                         doctest::Contains("16384"), Error);
    try {
        (void)build_source_operator(dec, huge);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::budget);
    }

    const std::vector<int> wrong_len{2, 2};
    CHECK_THROWS_AS((void)build_source_operator(dec, wrong_len), Error);
}

TEST_CASE("ghz and uniform state constructors") {
    const auto g = ghz_state(3, 2);
    CHECK(std::abs(norm(g) - 1.0) <= 1e-14);
    CHECK(std::abs(g[0] - cd{1.0 / std::sqrt(3.0), 0}) <= 1e-14);
    CHECK(std::abs(g[4] - cd{1.0 / std::sqrt(3.0), 0}) <= 1e-14);
    CHECK(std::abs(g[8] - cd{1.0 / std::sqrt(3.0), 0}) <= 1e-14);
    CHECK(std::abs(g[1]) + std::abs(g[2]) + std::abs(g[3]) <= 1e-14);

    const auto u = uniform_superposition(2, 3);
    CHECK(u.size() == 8);
    for (const auto& z : u)
        CHECK(std::abs(z - cd{1.0 / std::sqrt(8.0), 0}) <= 1e-14);
}
