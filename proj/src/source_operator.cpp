#include "bellbound/source_operator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <string>

#include "bellbound/errors.hpp"
#include "bellbound/kernels.hpp"
#include "bellbound/multi_index.hpp"
#include "bellbound/rng.hpp"

namespace bellbound {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void require_site(const DimVector& dims, int pivot) {
    if (dims.size() == 0)
        throw Error::validation("at least one site required");
    for (std::size_t n = 0; n < dims.size(); ++n)
        if (dims[n] < 1)
            throw Error::validation("site dimensions must be >= 1");
    if (pivot < 0 || static_cast<std::size_t>(pivot) >= dims.size())
        throw Error::validation("pivot site out of range");
}

void require_unit(std::span<const cd> psi) {
    const double n = norm(psi);
    if (std::abs(n - 1.0) > 1e-9)
        throw Error::validation("state vector norm is " + std::to_string(n) +
                                ", expected 1");
}

ComplexMatrix kron_power(const ComplexMatrix& a, int s) {
    ComplexMatrix p = a;
    for (int k = 1; k < s; ++k) p = kron(p, a);
    return p;
}

// psi reindexed so that site order[m] becomes slot m.
std::vector<cd> permute_sites(std::span<const cd> psi, const DimVector& dims,
                              std::span<const int> order) {
    std::vector<int> new_radix(order.size());
    for (std::size_t m = 0; m < order.size(); ++m)
        new_radix[m] = dims[static_cast<std::size_t>(order[m])];

    std::vector<cd> out(psi.size());
    std::vector<int> idx(dims.size(), 0);
    std::vector<int> new_idx(dims.size(), 0);
    std::size_t flat = 0;
    do {
        for (std::size_t m = 0; m < order.size(); ++m)
            new_idx[m] = idx[static_cast<std::size_t>(order[m])];
        out[flatten(new_idx, new_radix)] = psi[flat];
        ++flat;
    } while (next_tuple(idx, dims.dims));
    return out;
}

std::vector<int> pivot_first_order(std::size_t sites, int pivot) {
    std::vector<int> order;
    order.push_back(pivot);
    for (std::size_t n = 0; n < sites; ++n)
        if (static_cast<int>(n) != pivot) order.push_back(static_cast<int>(n));
    return order;
}

// out[..., i, ...] = sum_j a[i][j] psi[..., j, ...] acting on one site.
std::vector<cd> apply_site(std::span<const cd> psi, const DimVector& dims,
                           std::size_t site, const ComplexMatrix& a) {
    const auto d = static_cast<std::size_t>(dims[site]);
    std::size_t post = 1;
    for (std::size_t n = site + 1; n < dims.size(); ++n)
        post *= static_cast<std::size_t>(dims[n]);
    const std::size_t pre = psi.size() / (d * post);

    std::vector<cd> out(psi.size(), cd(0.0));
    for (std::size_t p = 0; p < pre; ++p)
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                const cd aij = a.at(i, j);
                if (aij == cd(0.0)) continue;
                simd::axpy(post, aij, psi.data() + (p * d + j) * post,
                           out.data() + (p * d + i) * post);
            }
    return out;
}

void require_bases(const std::vector<ComplexMatrix>& bases,
                   const DimVector& dims) {
    if (bases.empty()) return;
    if (bases.size() != dims.size())
        throw Error::validation("one basis per site required, got " +
                                std::to_string(bases.size()) + " for " +
                                std::to_string(dims.size()) + " sites");
    for (std::size_t n = 0; n < bases.size(); ++n) {
        const auto d = static_cast<std::size_t>(dims[n]);
        if (bases[n].rows() != d || bases[n].cols() != d)
            throw Error::validation("basis of site " + std::to_string(n) +
                                    " has the wrong shape");
        ComplexMatrix gram = matmul(bases[n].adjoint(), bases[n]);
        gram -= ComplexMatrix::identity(d);
        if (gram.max_abs() > 1e-9)
            throw Error::validation("basis of site " + std::to_string(n) +
                                    " is not orthonormal");
    }
}

std::vector<cd> basis_column(const ComplexMatrix& u, std::size_t j) {
    std::vector<cd> v(u.rows());
    for (std::size_t i = 0; i < u.rows(); ++i) v[i] = u.at(i, j);
    return v;
}

} // namespace

PureDecomposition decompose_pure_state(std::span<const cd> psi,
                                       const DimVector& dims, int pivot,
                                       std::vector<ComplexMatrix> bases) {
    require_site(dims, pivot);
    dims.require_matches(psi.size(), "state vector");
    require_unit(psi);
    require_bases(bases, dims);

    // Coefficients live in the given bases: rotate each site by the basis
    // adjoint before reading them off.
    std::vector<cd> rotated(psi.begin(), psi.end());
    for (std::size_t n = 0; n < bases.size(); ++n)
        rotated = apply_site(rotated, dims, n, bases[n].adjoint());

    const std::vector<int> order = pivot_first_order(dims.size(), pivot);
    const std::vector<cd> perm   = permute_sites(rotated, dims, order);

    const auto up = static_cast<std::size_t>(pivot);
    const auto dp = static_cast<std::size_t>(dims[up]);
    const std::size_t rest = perm.size() / dp;

    std::vector<int> rest_radix;
    for (std::size_t m = 1; m < order.size(); ++m)
        rest_radix.push_back(dims[static_cast<std::size_t>(order[m])]);

    PureDecomposition dec;
    dec.pivot = pivot;
    dec.dims  = dims;
    dec.bases = std::move(bases);
    dec.sigma = ComplexMatrix(dp, rest);
    std::vector<int> t(rest_radix.size(), 0);
    for (std::size_t tf = 0; tf < rest; ++tf) {
        std::vector<cd> block(dp);
        for (std::size_t i = 0; i < dp; ++i) {
            block[i] = perm[i * rest + tf];
            dec.sigma.at(i, tf) = block[i];
        }
        // phi is reported in the original coordinates of the pivot site.
        if (!dec.bases.empty()) block = bellbound::apply(dec.bases[up], block);
        const double b = norm(block);
        if (b > 0.0) {
            for (cd& x : block) x /= b;
        } else if (dec.bases.empty()) {
            std::fill(block.begin(), block.end(), cd(0.0));
            block[0] = 1.0; // arbitrary unit vector; the weight is zero
        } else {
            block = basis_column(dec.bases[up], 0);
        }
        dec.beta.push_back(b);
        dec.phi.push_back(std::move(block));
        dec.tuples.push_back(t);
        next_tuple(t, rest_radix);
    }
    return dec;
}

std::vector<cd> reassemble(const PureDecomposition& dec) {
    const std::vector<int> order =
        pivot_first_order(dec.dims.size(), dec.pivot);
    const auto dp = static_cast<std::size_t>(
        dec.dims[static_cast<std::size_t>(dec.pivot)]);
    const std::size_t rest = dec.beta.size();

    // sigma is the permuted state in the decomposition bases.
    std::vector<cd> perm(dp * rest, cd(0.0));
    for (std::size_t tf = 0; tf < rest; ++tf)
        for (std::size_t i = 0; i < dp; ++i)
            perm[i * rest + tf] = dec.sigma.at(i, tf);

    // Invert the pivot-first permutation, then rotate back to the original
    // coordinates.
    std::vector<int> inverse(order.size());
    for (std::size_t m = 0; m < order.size(); ++m)
        inverse[static_cast<std::size_t>(order[m])] = static_cast<int>(m);
    DimVector perm_dims;
    for (int site : order)
        perm_dims.dims.push_back(dec.dims[static_cast<std::size_t>(site)]);
    std::vector<cd> psi = permute_sites(perm, perm_dims, inverse);
    for (std::size_t n = 0; n < dec.bases.size(); ++n)
        psi = apply_site(psi, dec.dims, n, dec.bases[n]);
    return psi;
}

ComplexMatrix w_block(std::span<const cd> u, std::span<const cd> v,
                      int copies) {
    const std::size_t d = u.size();
    if (d < 1 || copies < 1)
        throw Error::validation("w_block: dimension and copies must be >= 1");
    if (v.size() != d)
        throw Error::validation("w_block: vectors differ in length");
    double sz = 1.0;
    for (int c = 0; c < copies; ++c) sz *= static_cast<double>(d);
    if (sz > static_cast<double>(kSourceOpDimCap))
        throw Error::budget("w_block needs dimension " +
                            std::to_string(static_cast<long long>(sz)) +
                            ", cap is " + std::to_string(kSourceOpDimCap));
    if (std::abs(norm(u) - 1.0) > 1e-9 || std::abs(norm(v) - 1.0) > 1e-9)
        throw Error::validation("w_block: vectors must be unit");

    double diff = 0.0;
    for (std::size_t i = 0; i < d; ++i)
        diff = std::max(diff, std::abs(u[i] - v[i]));
    if (diff <= 1e-12) {
        std::vector<cd> uu(u.begin(), u.end());
        return kron_power(ComplexMatrix::outer(uu, uu), copies);
    }
    if (std::abs(inner(u, v)) > 1e-9)
        throw Error::validation("w_block: vectors must be orthogonal or "
                                "equal");

    // Four rank-one projectors whose signed tensor powers telescope to
    // |u><v| under any single-copy partial trace.
    auto pair_vec = [&](cd wu, cd wv) {
        std::vector<cd> x(d);
        for (std::size_t i = 0; i < d; ++i) x[i] = wu * u[i] + wv * v[i];
        return x;
    };
    auto power = [&](const std::vector<cd>& x) {
        return kron_power(ComplexMatrix::outer(x, x), copies);
    };

    ComplexMatrix w = power(pair_vec(kInvSqrt2, kInvSqrt2));
    w -= power(pair_vec(kInvSqrt2, -kInvSqrt2));
    ComplexMatrix wi = power(pair_vec(kInvSqrt2, cd(0.0, kInvSqrt2)));
    wi -= power(pair_vec(kInvSqrt2, cd(0.0, -kInvSqrt2)));
    wi *= cd(0.0, 1.0);
    w += wi;
    w *= cd(0.5, 0.0);
    return w;
}

ComplexMatrix w_block(int d, int copies, int j, int k) {
    if (d < 1)
        throw Error::validation("w_block: d must be >= 1");
    if (j < 0 || j >= d || k < 0 || k >= d)
        throw Error::validation("w_block: basis index out of range");
    std::vector<cd> ej(static_cast<std::size_t>(d), cd(0.0));
    std::vector<cd> ek(static_cast<std::size_t>(d), cd(0.0));
    ej[static_cast<std::size_t>(j)] = 1.0;
    ek[static_cast<std::size_t>(k)] = 1.0;
    return w_block(ej, ek, copies);
}

SourceOperator build_source_operator(const PureDecomposition& dec,
                                     std::span<const int> settings) {
    require_site(dec.dims, dec.pivot);
    if (settings.size() + 1 != dec.dims.size())
        throw Error::validation("one copy count per non-pivot site required "
                                "(" + std::to_string(dec.dims.size() - 1) +
                                "), got " + std::to_string(settings.size()));
    for (int s : settings)
        if (s < 1)
            throw Error::validation("copy counts must be >= 1");

    const std::vector<int> order = pivot_first_order(dec.dims.size(),
                                                     dec.pivot);
    const std::size_t rest_count = dec.beta.size();
    {
        std::size_t expect = 1;
        for (std::size_t m = 1; m < order.size(); ++m)
            expect *= static_cast<std::size_t>(
                dec.dims[static_cast<std::size_t>(order[m])]);
        if (rest_count != expect || dec.phi.size() != expect ||
            dec.tuples.size() != expect)
            throw Error::validation("decomposition table sizes do not match "
                                    "the site dimensions");
    }

    SourceOperator t;
    t.pivot     = dec.pivot;
    t.site_dims = dec.dims;
    t.beta      = dec.beta;
    t.settings.assign(dec.dims.size(), 1);
    for (std::size_t m = 1; m < order.size(); ++m)
        t.settings[static_cast<std::size_t>(order[m])] =
            settings[m - 1];
    t.slots_of_site.resize(dec.dims.size());

    double total = static_cast<double>(
        dec.dims[static_cast<std::size_t>(dec.pivot)]);
    for (std::size_t m = 1; m < order.size(); ++m) {
        const auto site = static_cast<std::size_t>(order[m]);
        for (int c = 0; c < t.settings[site]; ++c)
            total *= static_cast<double>(dec.dims[site]);
    }
    if (total > static_cast<double>(kSourceOpDimCap))
        throw Error::budget("source operator needs dimension " +
                            std::to_string(static_cast<long long>(total)) +
                            ", cap is " + std::to_string(kSourceOpDimCap));

    t.block_dims.dims.push_back(
        dec.dims[static_cast<std::size_t>(dec.pivot)]);
    t.slots_of_site[static_cast<std::size_t>(dec.pivot)] = {0};
    for (std::size_t m = 1; m < order.size(); ++m) {
        const auto site = static_cast<std::size_t>(order[m]);
        for (int c = 0; c < t.settings[site]; ++c) {
            t.slots_of_site[site].push_back(
                static_cast<int>(t.block_dims.dims.size()));
            t.block_dims.dims.push_back(dec.dims[site]);
        }
    }

    // All pair blocks per non-pivot site, indexed [j*d + k], expressed in
    // the site's decomposition basis.
    std::vector<std::vector<ComplexMatrix>> blocks(dec.dims.size());
    for (std::size_t m = 1; m < order.size(); ++m) {
        const auto site = static_cast<std::size_t>(order[m]);
        const int d     = dec.dims[site];
        blocks[site].reserve(static_cast<std::size_t>(d * d));
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) {
                if (dec.bases.empty()) {
                    blocks[site].push_back(
                        w_block(d, t.settings[site], j, k));
                } else {
                    blocks[site].push_back(w_block(
                        basis_column(dec.bases[site],
                                     static_cast<std::size_t>(j)),
                        basis_column(dec.bases[site],
                                     static_cast<std::size_t>(k)),
                        t.settings[site]));
                }
            }
    }

    const std::size_t dim = t.block_dims.product();
    t.op = ComplexMatrix(dim, dim);
    std::vector<const ComplexMatrix*> factors(order.size());
    for (std::size_t a = 0; a < rest_count; ++a) {
        if (dec.beta[a] == 0.0) continue;
        for (std::size_t b = 0; b < rest_count; ++b) {
            if (dec.beta[b] == 0.0) continue;
            ComplexMatrix head =
                ComplexMatrix::outer(dec.phi[a], dec.phi[b]);
            factors[0] = &head;
            for (std::size_t m = 1; m < order.size(); ++m) {
                const auto site = static_cast<std::size_t>(order[m]);
                const int d     = dec.dims[site];
                const int j     = dec.tuples[a][m - 1];
                const int k     = dec.tuples[b][m - 1];
                factors[m] = &blocks[site][static_cast<std::size_t>(j * d + k)];
            }
            ComplexMatrix term = kron_all(factors);
            simd::axpy(t.op.size(), cd(dec.beta[a] * dec.beta[b], 0.0),
                       term.data().data(), t.op.data().data());
        }
    }
    return t;
}

DilationReport verify_dilation(const SourceOperator& t,
                               std::span<const cd> psi, int trials,
                               std::uint64_t seed) {
    if (trials < 1)
        throw Error::validation("verify_dilation: trials must be >= 1");
    t.site_dims.require_matches(psi.size(), "state vector");
    require_unit(psi);

    const std::vector<int> order =
        pivot_first_order(t.site_dims.size(), t.pivot);
    const std::vector<cd> perm = permute_sites(psi, t.site_dims, order);
    const ComplexMatrix rho    = ComplexMatrix::outer(perm, perm);

    DimVector perm_dims;
    for (int site : order)
        perm_dims.dims.push_back(t.site_dims[static_cast<std::size_t>(site)]);

    // Copy choice: one copy index per non-pivot site, ascending site order.
    std::vector<int> choice_radix;
    for (std::size_t m = 1; m < order.size(); ++m)
        choice_radix.push_back(
            t.settings[static_cast<std::size_t>(order[m])]);

    DilationReport rep;
    rep.trials = trials;

    std::vector<int> choice(choice_radix.size(), 0);
    do {
        std::set<int> keep = {0};
        for (std::size_t m = 1; m < order.size(); ++m)
            keep.insert(t.slots_of_site[static_cast<std::size_t>(order[m])]
                                       [static_cast<std::size_t>(
                                           choice[m - 1])]);
        ComplexMatrix reduced = partial_trace(t.op, t.block_dims, keep);
        rep.partial_trace_error = std::max(rep.partial_trace_error,
                                           max_abs_diff(reduced, rho));
    } while (next_tuple(choice, choice_radix));

    Rng rng(seed);
    const std::size_t slots = t.block_dims.size();
    std::vector<ComplexMatrix> eyes;
    eyes.reserve(slots);
    for (std::size_t sl = 0; sl < slots; ++sl)
        eyes.push_back(ComplexMatrix::identity(
            static_cast<std::size_t>(t.block_dims[sl])));

    for (int trial = 0; trial < trials; ++trial) {
        Rng sub = rng.fork(static_cast<std::uint64_t>(trial));
        std::vector<ComplexMatrix> obs;
        obs.reserve(order.size());
        for (std::size_t m = 0; m < order.size(); ++m)
            obs.push_back(random_hermitian(
                sub, t.site_dims[static_cast<std::size_t>(order[m])]));

        std::vector<const ComplexMatrix*> site_factors(order.size());
        for (std::size_t m = 0; m < order.size(); ++m)
            site_factors[m] = &obs[m];
        const cd direct = trace_contract(rho, perm_dims, site_factors);

        std::fill(choice.begin(), choice.end(), 0);
        do {
            std::vector<const ComplexMatrix*> slot_factors(slots);
            for (std::size_t sl = 0; sl < slots; ++sl)
                slot_factors[sl] = &eyes[sl];
            slot_factors[0] = &obs[0];
            for (std::size_t m = 1; m < order.size(); ++m) {
                const auto site = static_cast<std::size_t>(order[m]);
                const int slot =
                    t.slots_of_site[site][static_cast<std::size_t>(
                        choice[m - 1])];
                slot_factors[static_cast<std::size_t>(slot)] = &obs[m];
            }
            const cd dilated = trace_contract(t.op, t.block_dims,
                                              slot_factors);
            rep.dilation_error = std::max(rep.dilation_error,
                                          std::abs(dilated - direct));
        } while (next_tuple(choice, choice_radix));
    }
    return rep;
}

namespace {

CoveringEstimate pair_sum(std::span<const double> beta,
                          const std::vector<std::vector<int>>& tuples,
                          double bound) {
    double ssq = 0.0;
    for (double b : beta) {
        if (b < 0.0)
            throw Error::validation("covering_estimate: weights must be "
                                    "nonnegative");
        ssq += b * b;
    }
    if (std::abs(ssq - 1.0) > 1e-10)
        throw Error::validation("covering_estimate: weight squares sum to " +
                                std::to_string(ssq) + ", expected 1");

    CoveringEstimate out;
    out.theorem_bound = bound;
    for (std::size_t a = 0; a < beta.size(); ++a) {
        if (beta[a] == 0.0) continue;
        for (std::size_t b = 0; b < beta.size(); ++b) {
            if (beta[b] == 0.0) continue;
            int hamming = 0;
            for (std::size_t m = 0; m < tuples[a].size(); ++m)
                hamming += tuples[a][m] != tuples[b][m];
            out.estimate += beta[a] * beta[b] * std::ldexp(1.0, hamming);
        }
    }
    if (out.estimate > out.theorem_bound + 1e-9)
        throw Error::validation("covering estimate " +
                                std::to_string(out.estimate) +
                                " exceeds its bound " +
                                std::to_string(out.theorem_bound));
    return out;
}

} // namespace

CoveringEstimate covering_estimate(std::span<const double> beta, int d,
                                   int N) {
    if (d < 1 || N < 1)
        throw Error::validation("covering_estimate: d and N must be >= 1");
    double expect = 1.0;
    double bound  = 1.0;
    for (int m = 1; m < N; ++m) {
        expect *= static_cast<double>(d);
        bound *= 2.0 * static_cast<double>(d) - 1.0;
    }
    if (expect > 1e7) {
        char n[32];
        if (expect < 1e15)
            std::snprintf(n, sizeof n, "%.0f", expect);
        else
            std::snprintf(n, sizeof n, "%.6g", expect);
        throw Error::budget("covering table of " + std::string(n) +
                            " entries exceeds budget");
    }
    if (static_cast<double>(beta.size()) != expect)
        throw Error::validation(
            "covering_estimate: expected " +
            std::to_string(static_cast<long long>(expect)) +
            " weights, got " + std::to_string(beta.size()));

    std::vector<int> radix(static_cast<std::size_t>(N - 1), d);
    std::vector<std::vector<int>> tuples;
    tuples.reserve(beta.size());
    std::vector<int> t(radix.size(), 0);
    do {
        tuples.push_back(t);
    } while (next_tuple(t, radix));
    return pair_sum(beta, tuples, bound);
}

CoveringEstimate covering_estimate(const PureDecomposition& dec) {
    return pair_sum(dec.beta, dec.tuples,
                    covering_bound(dec.dims, dec.pivot));
}

double covering_bound(const DimVector& dims, int pivot) {
    require_site(dims, pivot);
    double p = 1.0;
    for (std::size_t n = 0; n < dims.size(); ++n)
        if (static_cast<int>(n) != pivot)
            p *= 2.0 * static_cast<double>(dims[n]) - 1.0;
    return p;
}

std::vector<cd> ghz_state(int d, int parties) {
    if (d < 1 || parties < 1)
        throw Error::validation("ghz_state: d and parties must be >= 1");
    // |j...j> flattens to j * (1 + d + ... + d^{N-1}).
    std::size_t dim = 1, repunit = 0;
    for (int n = 0; n < parties; ++n) {
        repunit = repunit * static_cast<std::size_t>(d) + 1;
        dim *= static_cast<std::size_t>(d);
        if (dim > kSourceOpDimCap)
            throw Error::budget("ghz_state dimension exceeds " +
                                std::to_string(kSourceOpDimCap));
    }
    std::vector<cd> psi(dim, cd(0.0));
    const double amp = 1.0 / std::sqrt(static_cast<double>(d));
    for (int j = 0; j < d; ++j)
        psi[static_cast<std::size_t>(j) * repunit] = amp;
    return psi;
}

std::vector<cd> uniform_superposition(int d, int parties) {
    if (d < 1 || parties < 1)
        throw Error::validation("uniform_superposition: d and parties must "
                                "be >= 1");
    std::size_t dim = 1;
    for (int n = 0; n < parties; ++n) {
        dim *= static_cast<std::size_t>(d);
        if (dim > kSourceOpDimCap)
            throw Error::budget("uniform_superposition dimension exceeds " +
                                std::to_string(kSourceOpDimCap));
    }
    return std::vector<cd>(dim, cd(1.0 / std::sqrt(static_cast<double>(dim)),
                                   0.0));
}

} // namespace bellbound
