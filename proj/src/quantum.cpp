#include "bellbound/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>

#include "bellbound/errors.hpp"
#include "bellbound/kernels.hpp"

namespace bellbound {

namespace {

std::vector<cd> eig_column(const EigResult& e, std::size_t k) {
    const std::size_t n = e.eigenvectors.rows();
    std::vector<cd> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = e.eigenvectors.at(i, k);
    return v;
}

double real_trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    return trace_product(a, b).real();
}

} // namespace

void QuantumModel::require_shape(const BellScenario& sc) const {
    sc.validate();
    const auto parties = static_cast<std::size_t>(sc.parties());
    if (dims.size() != parties)
        throw Error::validation("model covers " + std::to_string(dims.size()) +
                                " sites, scenario has " +
                                std::to_string(parties) + " parties");
    dims.require_matches(rho.rows(), "state");
    if (!rho.is_square())
        throw Error::validation("state must be square");
    if (povms.size() != parties)
        throw Error::validation("model needs one POVM list per party");
    for (std::size_t n = 0; n < parties; ++n) {
        if (povms[n].size() != static_cast<std::size_t>(sc.settings[n]))
            throw Error::validation("party " + std::to_string(n) + " needs " +
                                    std::to_string(sc.settings[n]) +
                                    " measurements, has " +
                                    std::to_string(povms[n].size()));
        for (const Povm& povm : povms[n]) {
            if (povm.outcomes() != sc.outcomes[n])
                throw Error::validation("party " + std::to_string(n) +
                                        " measurement has wrong outcome "
                                        "count");
            for (const ComplexMatrix& m : povm.elements)
                if (m.rows() != static_cast<std::size_t>(dims[n]) ||
                    !m.is_square())
                    throw Error::validation(
                        "party " + std::to_string(n) +
                        " measurement operator has wrong dimension");
        }
    }
}

void QuantumModel::validate(const BellScenario& sc, double tol,
                            bool projective) const {
    require_shape(sc);
    if (rho.hermiticity_error() > tol)
        throw Error::validation("state is not Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > tol ||
        std::abs(rho.trace().imag()) > tol)
        throw Error::validation("state trace differs from 1 by " +
                                std::to_string(std::abs(rho.trace().real() -
                                                        1.0)));
    {
        EigResult e = hermitian_eig(rho, tol);
        if (e.eigenvalues.back() < -tol)
            throw Error::validation("state has negative eigenvalue " +
                                    std::to_string(e.eigenvalues.back()));
    }
    const double proj_tol = std::max(tol, kTol.spectral);
    for (std::size_t n = 0; n < povms.size(); ++n) {
        for (std::size_t s = 0; s < povms[n].size(); ++s) {
            const Povm& povm = povms[n][s];
            ComplexMatrix sum(povm.elements[0].rows(),
                              povm.elements[0].cols());
            for (const ComplexMatrix& m : povm.elements) {
                if (m.hermiticity_error() > tol)
                    throw Error::validation("measurement operator of party " +
                                            std::to_string(n) +
                                            " is not Hermitian");
                EigResult e = hermitian_eig(m, tol);
                if (e.eigenvalues.back() < -tol)
                    throw Error::validation("measurement operator of party " +
                                            std::to_string(n) +
                                            " has negative eigenvalue " +
                                            std::to_string(
                                                e.eigenvalues.back()));
                sum += m;
            }
            sum -= ComplexMatrix::identity(sum.rows());
            if (sum.max_abs() > tol)
                throw Error::validation(
                    "measurement " + std::to_string(s) + " of party " +
                    std::to_string(n) + " sums off identity by " +
                    std::to_string(sum.max_abs()));
            if (projective) {
                for (std::size_t a = 0; a < povm.elements.size(); ++a) {
                    for (std::size_t b = a; b < povm.elements.size(); ++b) {
                        ComplexMatrix prod = matmul(povm.elements[a],
                                                    povm.elements[b]);
                        if (a == b) prod -= povm.elements[a];
                        if (prod.max_abs() > proj_tol)
                            throw Error::validation(
                                a == b
                                    ? "measurement operator of party " +
                                          std::to_string(n) +
                                          " is not idempotent"
                                    : "measurement operators of party " +
                                          std::to_string(n) +
                                          " are not orthogonal");
                    }
                }
            }
        }
    }
}

Behavior quantum_behavior(const BellScenario& sc, const QuantumModel& m) {
    m.require_shape(sc);
    const auto parties = static_cast<std::size_t>(sc.parties());
    Behavior p(sc);
    std::vector<const ComplexMatrix*> factors(parties);
    std::vector<int> s(parties, 0);
    std::size_t s_flat = 0;
    do {
        std::vector<int> lam(parties, 0);
        std::size_t lam_flat = 0;
        do {
            for (std::size_t n = 0; n < parties; ++n)
                factors[n] = &m.povms[n][static_cast<std::size_t>(s[n])]
                                  .elements[static_cast<std::size_t>(lam[n])];
            p.at(s_flat, lam_flat) =
                trace_contract(m.rho, m.dims, factors).real();
            ++lam_flat;
        } while (next_tuple(lam, sc.outcomes));
        ++s_flat;
    } while (next_tuple(s, sc.settings));
    return p;
}

ComplexMatrix bell_operator(const BellFunctional& f, const QuantumModel& m) {
    const BellScenario& sc = f.scenario();
    m.require_shape(sc);
    const auto parties = static_cast<std::size_t>(sc.parties());
    const std::size_t dim = m.dims.product();

    ComplexMatrix b(dim, dim);
    std::vector<const ComplexMatrix*> factors(parties);
    std::vector<int> s(parties, 0);
    std::size_t s_flat = 0;
    do {
        std::vector<int> lam(parties, 0);
        std::size_t lam_flat = 0;
        do {
            const double c = f.at(s_flat, lam_flat);
            if (c != 0.0) {
                for (std::size_t n = 0; n < parties; ++n)
                    factors[n] =
                        &m.povms[n][static_cast<std::size_t>(s[n])]
                             .elements[static_cast<std::size_t>(lam[n])];
                ComplexMatrix term = kron_all(factors);
                simd::axpy(b.size(), cd(c, 0.0), term.data().data(),
                           b.data().data());
            }
            ++lam_flat;
        } while (next_tuple(lam, sc.outcomes));
        ++s_flat;
    } while (next_tuple(s, sc.settings));
    return b;
}

Povm random_projective_povm(Rng& rng, int dim, int outcomes) {
    if (dim < 1 || outcomes < 1)
        throw Error::validation("random_projective_povm: dim and outcomes "
                                "must be >= 1");
    ComplexMatrix u = random_unitary(rng, dim);
    Povm povm;
    povm.elements.assign(static_cast<std::size_t>(outcomes),
                         ComplexMatrix(static_cast<std::size_t>(dim),
                                       static_cast<std::size_t>(dim)));
    std::vector<cd> col(static_cast<std::size_t>(dim));
    for (int j = 0; j < dim; ++j) {
        for (int i = 0; i < dim; ++i)
            col[static_cast<std::size_t>(i)] =
                u.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        povm.elements[static_cast<std::size_t>(j % outcomes)] +=
            ComplexMatrix::outer(col, col);
    }
    return povm;
}

QuantumModel random_model(const BellScenario& sc, const DimVector& dims,
                          Rng& rng) {
    sc.validate();
    if (dims.size() != static_cast<std::size_t>(sc.parties()))
        throw Error::validation("random_model: one local dimension per party "
                                "required");
    QuantumModel m;
    m.dims = dims;
    std::vector<cd> psi = random_pure_state(rng,
                                            static_cast<int>(dims.product()));
    m.rho = ComplexMatrix::outer(psi, psi);
    m.povms.resize(static_cast<std::size_t>(sc.parties()));
    for (std::size_t n = 0; n < m.povms.size(); ++n)
        for (int s = 0; s < sc.settings[n]; ++s)
            m.povms[n].push_back(
                random_projective_povm(rng, dims[n], sc.outcomes[n]));
    return m;
}

namespace {

// sum_a Re tr[M_a g_a] for the candidate measurement.
double povm_score(const Povm& povm, const std::vector<ComplexMatrix>& g) {
    double v = 0.0;
    for (std::size_t a = 0; a < g.size(); ++a)
        v += real_trace_product(povm.elements[a], g[a]);
    return v;
}

Povm povm_from_groups(const std::vector<std::vector<std::vector<cd>>>& groups,
                      std::size_t dim) {
    Povm povm;
    povm.elements.assign(groups.size(), ComplexMatrix(dim, dim));
    for (std::size_t a = 0; a < groups.size(); ++a)
        for (const std::vector<cd>& v : groups[a])
            povm.elements[a] += ComplexMatrix::outer(v, v);
    return povm;
}

// Exact optimum over two-outcome measurements: the projector onto the
// nonnegative eigenspace of g_0 - g_1.
Povm best_two_outcome(const std::vector<ComplexMatrix>& g) {
    ComplexMatrix d = g[0];
    d -= g[1];
    EigResult e = hermitian_eig(d);
    const std::size_t dim = d.rows();
    Povm povm;
    povm.elements.assign(2, ComplexMatrix(dim, dim));
    for (std::size_t k = 0; k < e.eigenvalues.size(); ++k) {
        std::vector<cd> v = eig_column(e, k);
        povm.elements[e.eigenvalues[k] >= 0.0 ? 0 : 1] +=
            ComplexMatrix::outer(v, v);
    }
    return povm;
}

// Projective ascent for three or more outcomes: seed an orthonormal basis
// from a weighted combination of the g_a, assign each basis vector greedily,
// then exchange vectors between outcome pairs via the exact two-outcome step
// on their joint span until no pair improves.
Povm best_multi_outcome(const std::vector<ComplexMatrix>& g) {
    const std::size_t k   = g.size();
    const std::size_t dim = g[0].rows();

    ComplexMatrix h(dim, dim);
    for (std::size_t a = 0; a < k; ++a) {
        ComplexMatrix t = g[a];
        t *= cd(static_cast<double>(a + 1), 0.0);
        h += t;
    }
    EigResult basis = hermitian_eig(h);

    std::vector<std::vector<std::vector<cd>>> groups(k);
    for (std::size_t i = 0; i < dim; ++i) {
        std::vector<cd> v = eig_column(basis, i);
        std::size_t best  = 0;
        double best_val   = -std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < k; ++a) {
            std::vector<cd> gv = bellbound::apply(g[a], v);
            const double val   = inner(v, gv).real();
            if (val > best_val) {
                best_val = val;
                best     = a;
            }
        }
        groups[best].push_back(std::move(v));
    }

    double scale = 0.0;
    for (const ComplexMatrix& m : g) scale = std::max(scale, m.max_abs());
    const double gain_floor = 1e-13 * std::max(1.0, scale);

    bool improved  = true;
    std::size_t it = 0;
    while (improved && it++ < 4 * k * k) {
        improved = false;
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t b = a + 1; b < k; ++b) {
                const std::size_t r = groups[a].size() + groups[b].size();
                if (r == 0) continue;

                ComplexMatrix u(dim, r);
                std::size_t col = 0;
                for (const auto* grp : {&groups[a], &groups[b]})
                    for (const std::vector<cd>& v : *grp) {
                        for (std::size_t i = 0; i < dim; ++i)
                            u.at(i, col) = v[i];
                        ++col;
                    }

                ComplexMatrix diff = g[a];
                diff -= g[b];
                ComplexMatrix compressed =
                    matmul(matmul(u.adjoint(), diff), u);
                EigResult e = hermitian_eig(compressed);

                double before = 0.0;
                for (const std::vector<cd>& v : groups[a])
                    before += inner(v, bellbound::apply(g[a], v)).real();
                for (const std::vector<cd>& v : groups[b])
                    before += inner(v, bellbound::apply(g[b], v)).real();

                std::vector<std::vector<cd>> new_a, new_b;
                double after = 0.0;
                for (std::size_t i = 0; i < r; ++i) {
                    std::vector<cd> w = eig_column(e, i);
                    std::vector<cd> lifted = bellbound::apply(u, w);
                    const bool to_a = e.eigenvalues[i] >= 0.0;
                    after += inner(lifted,
                                   bellbound::apply(g[to_a ? a : b], lifted)).real();
                    (to_a ? new_a : new_b).push_back(std::move(lifted));
                }
                if (after > before + gain_floor) {
                    groups[a] = std::move(new_a);
                    groups[b] = std::move(new_b);
                    improved  = true;
                }
            }
        }
    }
    return povm_from_groups(groups, dim);
}

Povm maximize_povm(const std::vector<ComplexMatrix>& g) {
    return g.size() == 2 ? best_two_outcome(g) : best_multi_outcome(g);
}

// G_{t,a} for party n: the operator on site n whose pairing tr[M g] gives
// the objective contribution of assigning M to (setting t, outcome a) while
// everything else stays fixed.
std::vector<ComplexMatrix> partial_g(const BellFunctional& f,
                                     const QuantumModel& m, std::size_t n,
                                     int t) {
    const BellScenario& sc = f.scenario();
    const auto parties     = static_cast<std::size_t>(sc.parties());
    const std::size_t dim  = m.dims.product();
    const auto dn          = static_cast<std::size_t>(m.dims[n]);
    const auto outcomes_n  = static_cast<std::size_t>(sc.outcomes[n]);

    ComplexMatrix eye_n = ComplexMatrix::identity(dn);
    std::vector<const ComplexMatrix*> factors(parties);
    factors[n] = &eye_n;

    std::vector<ComplexMatrix> k_sum(outcomes_n, ComplexMatrix(dim, dim));
    std::vector<int> s(parties, 0);
    std::size_t s_flat = 0;
    do {
        if (s[n] == t) {
            std::vector<int> lam(parties, 0);
            std::size_t lam_flat = 0;
            do {
                const double c = f.at(s_flat, lam_flat);
                if (c != 0.0) {
                    for (std::size_t p = 0; p < parties; ++p)
                        if (p != n)
                            factors[p] =
                                &m.povms[p][static_cast<std::size_t>(s[p])]
                                     .elements[static_cast<std::size_t>(
                                         lam[p])];
                    ComplexMatrix term = kron_all(factors);
                    simd::axpy(k_sum[static_cast<std::size_t>(lam[n])].size(),
                               cd(c, 0.0), term.data().data(),
                               k_sum[static_cast<std::size_t>(lam[n])]
                                   .data()
                                   .data());
                }
                ++lam_flat;
            } while (next_tuple(lam, sc.outcomes));
        }
        ++s_flat;
    } while (next_tuple(s, sc.settings));

    std::vector<ComplexMatrix> g;
    g.reserve(outcomes_n);
    for (std::size_t a = 0; a < outcomes_n; ++a)
        g.push_back(partial_trace(matmul(m.rho, k_sum[a]), m.dims,
                                  {static_cast<int>(n)}));
    return g;
}

struct RestartResult {
    double value   = 0.0;
    QuantumModel model;
    int iterations = 0;
    bool converged = false;
    std::vector<double> trajectory;
};

RestartResult single_restart(const BellFunctional& f, const DimVector& dims,
                             const SeesawOptions& opt, Rng rng) {
    const BellScenario& sc = f.scenario();
    QuantumModel m = random_model(sc, dims, rng);

    RestartResult res;
    double prev = -std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < opt.max_iters; ++iter) {
        EigResult e = hermitian_eig(bell_operator(f, m));
        std::vector<cd> top = eig_column(e, 0);
        m.rho = ComplexMatrix::outer(top, top);
        const double value = e.eigenvalues[0];
        if (!std::isfinite(value))
            throw Error::validation("see-saw objective became non-finite");
        res.trajectory.push_back(value);

        res.iterations = iter + 1;
        if (value - prev <= opt.obj_tol * std::max(1.0, std::abs(value)) &&
            iter > 0) {
            res.converged = true;
            break;
        }
        prev = value;

        for (std::size_t n = 0; n < static_cast<std::size_t>(sc.parties());
             ++n) {
            for (int t = 0; t < sc.settings[n]; ++t) {
                std::vector<ComplexMatrix> g = partial_g(f, m, n, t);
                Povm candidate = maximize_povm(g);
                // Exact steps cannot lose, but roundoff can; keep the
                // better of old and new so the sweep stays monotone.
                if (povm_score(candidate, g) >=
                    povm_score(m.povms[n][static_cast<std::size_t>(t)], g))
                    m.povms[n][static_cast<std::size_t>(t)] =
                        std::move(candidate);
            }
        }
    }

    // Re-anchor the state on the final measurements so the reported value
    // equals tr[rho B] of the reported model.
    EigResult e = hermitian_eig(bell_operator(f, m));
    std::vector<cd> top = eig_column(e, 0);
    m.rho     = ComplexMatrix::outer(top, top);
    res.value = e.eigenvalues[0];
    if (res.trajectory.empty() || res.value != res.trajectory.back())
        res.trajectory.push_back(res.value);
    res.model = std::move(m);
    return res;
}

} // namespace

int env_thread_cap() {
    if (const char* s = std::getenv("BELLBOUND_THREADS")) {
        const int v = std::atoi(s);
        if (v >= 1) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

ViolationReport seesaw(const BellFunctional& f, const DimVector& dims,
                       const SeesawOptions& opt) {
    f.scenario().validate();
    if (dims.size() != static_cast<std::size_t>(f.scenario().parties()))
        throw Error::validation("seesaw: one local dimension per party "
                                "required");
    for (std::size_t n = 0; n < dims.size(); ++n)
        if (dims[n] < 1)
            throw Error::validation("seesaw: local dimensions must be >= 1");
    if (opt.restarts < 1 || opt.max_iters < 1)
        throw Error::validation("seesaw: restarts and max_iters must be "
                                ">= 1");

    ViolationReport out;
    out.lhv = lhv_constants(f);
    if (out.lhv.lhv_norm == 0.0)
        throw Error::validation("seesaw: degenerate functional, every "
                                "deterministic strategy scores 0");

    const Rng base(opt.seed);
    std::vector<RestartResult> results(
        static_cast<std::size_t>(opt.restarts));
    const int threads = std::min(env_thread_cap(), opt.restarts);

    auto run_slice = [&](int first) {
        for (int r = first; r < opt.restarts; r += threads)
            results[static_cast<std::size_t>(r)] = single_restart(
                f, dims, opt, base.fork(static_cast<std::uint64_t>(r)));
    };
    if (threads == 1) {
        run_slice(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) pool.emplace_back(run_slice, t);
        for (std::thread& th : pool) th.join();
    }

    // Ties resolve to the lowest restart index, so the answer does not
    // depend on the thread count.
    std::size_t best = 0;
    for (std::size_t r = 1; r < results.size(); ++r)
        if (results[r].value > results[best].value) best = r;

    out.quantum_value = results[best].value;
    out.lhv_norm      = out.lhv.lhv_norm;
    out.ratio         = std::abs(out.quantum_value) / out.lhv_norm;
    out.model         = std::move(results[best].model);
    out.iterations    = results[best].iterations;
    out.restarts      = opt.restarts;
    out.converged     = results[best].converged;
    out.trajectory    = std::move(results[best].trajectory);
    return out;
}

double violation_ratio(const BellFunctional& f, const QuantumModel& m) {
    const LhvConstants lhv = lhv_constants(f);
    if (lhv.lhv_norm == 0.0)
        throw Error::validation("violation_ratio: degenerate functional, "
                                "every deterministic strategy scores 0");
    return std::abs(bell_value(f, quantum_behavior(f.scenario(), m))) /
           lhv.lhv_norm;
}

Envelope quantum_envelope(double lhv_sup, double lhv_inf, double upsilon) {
    if (lhv_sup < lhv_inf)
        throw Error::validation("quantum_envelope: sup below inf");
    if (upsilon < 1.0)
        throw Error::validation("quantum_envelope: the violation ratio is "
                                "never below 1");
    const double spread = 0.5 * (upsilon - 1.0) * (lhv_sup - lhv_inf);
    return {lhv_inf - spread, lhv_sup + spread};
}

Envelope quantum_envelope(const BellFunctional& f, double upsilon) {
    const LhvConstants lhv = lhv_constants(f);
    return quantum_envelope(lhv.sup, lhv.inf, upsilon);
}

double grid_oracle_chsh(int resolution) {
    if (resolution < 8)
        throw Error::validation("grid_oracle_chsh: resolution must be >= 8");
    const auto r = static_cast<std::size_t>(resolution);
    std::vector<double> corr(r);
    for (std::size_t k = 0; k < r; ++k)
        corr[k] = -std::cos(2.0 * 3.14159265358979323846 *
                            static_cast<double>(k) / static_cast<double>(r));

    // With delta = b0 - b1 fixed, the two Alice terms decouple:
    //   max_x corr[x] + corr[x+delta]  and  max_y corr[y] - corr[y+delta].
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t delta = 0; delta < r; ++delta) {
        double m0 = -std::numeric_limits<double>::infinity();
        double m1 = -std::numeric_limits<double>::infinity();
        for (std::size_t x = 0; x < r; ++x) {
            const double shifted = corr[(x + delta) % r];
            m0 = std::max(m0, corr[x] + shifted);
            m1 = std::max(m1, corr[x] - shifted);
        }
        best = std::max(best, m0 + m1);
    }
    return best;
}

} // namespace bellbound
