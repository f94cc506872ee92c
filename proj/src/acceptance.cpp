#include "bellbound/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <utility>

#include "bellbound/bounds.hpp"
#include "bellbound/errors.hpp"
#include "bellbound/quantum.hpp"
#include "bellbound/rng.hpp"
#include "bellbound/scenario.hpp"
#include "bellbound/source_operator.hpp"
#include "bellbound/tensor_ops.hpp"

namespace bellbound {

namespace {

constexpr double kRoot2 = 1.41421356237309504880;

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

template <typename Body>
CheckResult timed(std::string name, std::string suite, double limit,
                  Body&& body) {
    CheckResult r;
    r.name  = std::move(name);
    r.suite = std::move(suite);
    r.limit = limit;
    const auto t0 = std::chrono::steady_clock::now();
    std::ostringstream detail;
    r.passed = body(detail);
    r.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (r.seconds >= limit) {
        r.passed = false;
        detail << " [over time budget]";
    }
    r.detail = detail.str();
    return r;
}

// See-saw outcomes accumulated for the catalog-consistency check.
struct RatioRecord {
    std::string label;
    double ratio = 0.0;
    BoundQuery query;
};

CheckResult chsh_attainability(std::vector<RatioRecord>& records) {
    return timed("chsh_attainability", "attainability", 10.0,
                 [&](std::ostringstream& out) {
        const BellFunctional f = chsh_functional();
        const LhvConstants lhv = lhv_constants(f);
        bool ok = lhv.sup == 2.0 && lhv.inf == -2.0;
        out << "sup=" << fmt(lhv.sup) << " inf=" << fmt(lhv.inf);

        DimVector dims;
        dims.dims = {2, 2};
        const ViolationReport rep = seesaw(f, dims);
        const double target       = 2.0 * kRoot2;
        ok = ok && std::abs(rep.quantum_value - target) <= 1e-6;
        out << " qvalue=" << fmt(rep.quantum_value);

        const double grid = grid_oracle_chsh(360);
        ok = ok && std::abs(rep.quantum_value - grid) <= 1e-3;
        out << " grid360=" << fmt(grid);

        const double bound = corollary_projective(2, 2, 2);
        ok = ok && std::abs(rep.ratio - bound) <= 1e-6;
        out << " ratio=" << fmt(rep.ratio) << " bound=" << fmt(bound);

        BoundQuery q;
        q.d = 2;
        q.N = 2;
        q.settings          = 2;
        q.measurement_class = MeasurementClass::projective;
        records.push_back({"chsh", rep.ratio, q});
        return ok;
    });
}

CheckResult mermin_klyshko_attainability(std::vector<RatioRecord>& records) {
    return timed("mermin_klyshko_attainability", "attainability", 60.0,
                 [&](std::ostringstream& out) {
        const BellFunctional f = mermin_klyshko_functional(3);
        DimVector dims;
        dims.dims = {2, 2, 2};
        const ViolationReport rep = seesaw(f, dims);
        const bool ok = std::abs(rep.ratio - 2.0) <= 1e-5;
        out << "ratio=" << fmt(rep.ratio) << " restarts=" << rep.restarts
            << " lhv_norm=" << fmt(rep.lhv_norm);

        BoundQuery q;
        q.d = 2;
        q.N = 3;
        q.settings          = 2;
        q.measurement_class = MeasurementClass::projective;
        records.push_back({"mermin_klyshko(3)", rep.ratio, q});
        return ok;
    });
}

CheckResult source_operator_structure() {
    return timed("source_operator_structure", "structure", 120.0,
                 [&](std::ostringstream& out) {
        const Rng base(kDefaultSeed);
        double worst_trace = 0.0, worst_pt = 0.0, worst_dil = 0.0;
        for (int i = 0; i < 50; ++i) {
            const int d = 2 + (i % 2);
            const int n = 2 + ((i / 2) % 2);
            const int s = 1 + (i % 3);
            DimVector dims;
            dims.dims.assign(static_cast<std::size_t>(n), d);

            Rng sub = base.fork(static_cast<std::uint64_t>(1000 + i));
            const std::vector<cd> psi =
                random_pure_state(sub, static_cast<int>(dims.product()));
            const PureDecomposition dec = decompose_pure_state(psi, dims);
            const std::vector<int> settings(static_cast<std::size_t>(n - 1),
                                            s);
            const SourceOperator t = build_source_operator(dec, settings);

            const cd tr = t.op.trace();
            worst_trace = std::max({worst_trace, std::abs(tr.real() - 1.0),
                                    std::abs(tr.imag())});
            const DilationReport rep = verify_dilation(
                t, psi, 20, kDefaultSeed + static_cast<std::uint64_t>(i));
            worst_pt  = std::max(worst_pt, rep.partial_trace_error);
            worst_dil = std::max(worst_dil, rep.dilation_error);
        }
        out << "worst: trace=" << fmt(worst_trace)
            << " partial_trace=" << fmt(worst_pt)
            << " dilation=" << fmt(worst_dil);
        return worst_trace <= 1e-10 && worst_pt <= 1e-10 &&
               worst_dil <= 1e-9;
    });
}

CheckResult covering_estimate_chain() {
    return timed("covering_estimate_chain", "estimates", 10.0,
                 [&](std::ostringstream& out) {
        const Rng base(kDefaultSeed);
        bool ok           = true;
        double worst_gap  = 0.0; // max estimate - bound over random tables
        double worst_unif = 0.0;
        double worst_ghz  = 0.0;
        for (int i = 0; i < 100; ++i) {
            const int d = 2 + (i % 3);
            const int n = 2 + ((i / 3) % 3);
            std::size_t count = 1;
            for (int m = 1; m < n; ++m)
                count *= static_cast<std::size_t>(d);

            Rng sub = base.fork(static_cast<std::uint64_t>(2000 + i));
            std::vector<double> beta(count);
            double ssq = 0.0;
            for (double& b : beta) {
                b = std::abs(sub.next_gaussian());
                ssq += b * b;
            }
            const double inv = 1.0 / std::sqrt(ssq);
            for (double& b : beta) b *= inv;

            const CoveringEstimate ce = covering_estimate(beta, d, n);
            worst_gap = std::max(worst_gap, ce.estimate - ce.theorem_bound);
            ok = ok && ce.estimate <= ce.theorem_bound + 1e-9;
        }
        for (int d = 2; d <= 4; ++d) {
            for (int n = 2; n <= 4; ++n) {
                std::size_t count = 1;
                for (int m = 1; m < n; ++m)
                    count *= static_cast<std::size_t>(d);

                const std::vector<double> unif(
                    count, 1.0 / std::sqrt(static_cast<double>(count)));
                const CoveringEstimate cu = covering_estimate(unif, d, n);
                worst_unif = std::max(worst_unif, std::abs(cu.estimate -
                                                           cu.theorem_bound));

                // GHZ weights: equal-index diagonal only.
                std::vector<double> ghz(count, 0.0);
                std::size_t step = 0; // flat index stride of (j,j,...,j)
                std::size_t one  = 1;
                for (int m = 1; m < n; ++m) {
                    step += one;
                    one *= static_cast<std::size_t>(d);
                }
                for (int j = 0; j < d; ++j)
                    ghz[static_cast<std::size_t>(j) * step] =
                        1.0 / std::sqrt(static_cast<double>(d));
                const CoveringEstimate cg = covering_estimate(ghz, d, n);
                worst_ghz = std::max(worst_ghz,
                                     std::abs(cg.estimate -
                                              ghz_bound(d, n)));
            }
        }
        out << "worst: overshoot=" << fmt(worst_gap)
            << " uniform_gap=" << fmt(worst_unif)
            << " ghz_gap=" << fmt(worst_ghz);
        return ok && worst_unif <= 1e-10 && worst_ghz <= 1e-12;
    });
}

CheckResult flip_operator_facts() {
    return timed("flip_operator_facts", "estimates", 30.0,
                 [&](std::ostringstream& out) {
        bool ok          = true;
        double worst_tn  = 0.0;
        for (int d = 2; d <= 6; ++d) {
            const ComplexMatrix v = flip_operator(d);
            const double tn       = trace_norm(v);
            worst_tn = std::max(worst_tn,
                                std::abs(tn - static_cast<double>(d * d)));

            DimVector dims;
            dims.dims = {d, d};
            const TensorPositivityReport rep =
                mc_tensor_positive(v, dims, 10000, kDefaultSeed);
            ok = ok &&
                 rep.verdict == TensorPositivity::no_violation_found;
        }
        out << "worst trace_norm gap=" << fmt(worst_tn)
            << (ok ? " no violations" : " violation reported");
        return ok && worst_tn <= 1e-12;
    });
}

CheckResult bound_improvement_grid() {
    return timed("bound_improvement_grid", "catalog", 1.0,
                 [&](std::ostringstream& out) {
        bool ok           = true;
        double worst_marg = std::numeric_limits<double>::infinity();
        for (int d = 2; d <= 10; ++d) {
            for (int n = 3; n <= 6; ++n) {
                double pow2 = 1.0, dpow = 1.0, twod = 1.0;
                for (int m = 1; m < n; ++m) {
                    pow2 *= 2.0;
                    dpow *= static_cast<double>(d);
                    twod *= 2.0 * static_cast<double>(d);
                }
                const double d1   = pow2 * dpow - pow2 + 1.0;
                const double d2   = twod;
                const double ours = theorem1(d, n);
                ok = ok && ours < std::min(d1, d2);
                worst_marg = std::min(worst_marg, std::min(d1, d2) - ours);
            }
        }
        out << "min margin over grid=" << fmt(worst_marg);
        return ok;
    });
}

CheckResult envelope_arithmetic() {
    return timed("envelope_arithmetic", "catalog", 1.0,
                 [&](std::ostringstream& out) {
        const Envelope chsh = quantum_envelope(chsh_functional(), kRoot2);
        const double gap    = std::abs(chsh.upper - 2.0 * kRoot2);
        const Envelope zg   = quantum_envelope(2.0, 1.0, 3.0);
        out << "chsh_upper=" << fmt(chsh.upper)
            << " zg_lower=" << fmt(zg.lower);
        return gap <= 1e-12 && zg.lower == 0.0;
    });
}

CheckResult seesaw_catalog_consistency(
    const std::vector<RatioRecord>& records) {
    return timed("seesaw_catalog_consistency", "attainability", 5.0,
                 [&](std::ostringstream& out) {
        bool ok = !records.empty();
        for (const RatioRecord& r : records) {
            const BoundReport rep = best_known(r.query);
            ok = ok && r.ratio <= rep.best + 1e-6;
            out << r.label << ": ratio=" << fmt(r.ratio)
                << " best=" << fmt(rep.best) << " (" << rep.best_label
                << ") ";
        }
        return ok;
    });
}

} // namespace

std::vector<CheckResult> run_acceptance(const std::string& suite) {
    const bool all = suite == "all";
    if (!all && suite != "attainability" && suite != "structure" &&
        suite != "estimates" && suite != "catalog")
        throw Error::validation("unknown suite '" + suite +
                                "'; expected attainability, structure, "
                                "estimates, catalog, or all");

    std::vector<CheckResult> out;
    if (all || suite == "attainability") {
        std::vector<RatioRecord> records;
        out.push_back(chsh_attainability(records));
        out.push_back(mermin_klyshko_attainability(records));
        out.push_back(seesaw_catalog_consistency(records));
    }
    if (all || suite == "structure")
        out.push_back(source_operator_structure());
    if (all || suite == "estimates") {
        out.push_back(covering_estimate_chain());
        out.push_back(flip_operator_facts());
    }
    if (all || suite == "catalog") {
        out.push_back(bound_improvement_grid());
        out.push_back(envelope_arithmetic());
    }
    return out;
}

} // namespace bellbound
