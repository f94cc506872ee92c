#include "bellbound/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bellbound/errors.hpp"

namespace bellbound {

namespace {

void require_dn(int d, int N, const char* what) {
    if (d < 2)
        throw Error::validation(std::string(what) +
                                ": local dimension must be >= 2");
    if (N < 2)
        throw Error::validation(std::string(what) +
                                ": party count must be >= 2");
}

double dpow(double base, int exp) {
    double p = 1.0;
    for (int k = 0; k < exp; ++k) p *= base;
    return p;
}

std::optional<long long> ipow(long long base, int exp) {
    long long p = 1;
    for (int k = 0; k < exp; ++k) {
        if (p > std::numeric_limits<long long>::max() / base)
            return std::nullopt;
        p *= base;
    }
    return p;
}

std::optional<long long> exact_of(double v) {
    if (v > 9e15) return std::nullopt; // past contiguous integer doubles
    const double r = std::nearbyint(v);
    if (v == r) return static_cast<long long>(r);
    return std::nullopt;
}

BoundEntry entry(std::string label, double value, std::string applicability,
                 std::string citation) {
    BoundEntry e;
    e.label         = std::move(label);
    e.value         = value;
    e.exact         = exact_of(value);
    e.applicability = std::move(applicability);
    e.citation      = std::move(citation);
    return e;
}

} // namespace

double theorem1(int d, int N) {
    require_dn(d, N, "theorem1");
    return dpow(2.0 * d - 1.0, N - 1);
}

double ghz_bound(int d, int N) {
    require_dn(d, N, "ghz_bound");
    return dpow(2.0, N - 1) * (d - 1) + 1.0;
}

double corollary_generalized(int d, int S, int N) {
    require_dn(d, N, "corollary_generalized");
    if (S < 1)
        throw Error::validation("corollary_generalized: setting count must "
                                "be >= 1");
    return dpow(2.0 * std::min(d, S) - 1.0, N - 1);
}

double corollary_projective(int d, int S, int N) {
    require_dn(d, N, "corollary_projective");
    if (S < 1)
        throw Error::validation("corollary_projective: setting count must "
                                "be >= 1");
    if (S == 1) return 1.0; // single setting admits an LHV model
    if (S == 2)
        return std::min(std::pow(static_cast<double>(d), 0.5 * (N - 1)),
                        dpow(3.0, N - 1));
    return std::min(std::pow(static_cast<double>(d), 0.5 * S * (N - 1)),
                    corollary_generalized(d, S, N));
}

std::vector<BoundEntry> prior_bounds(int d, int N) {
    require_dn(d, N, "prior_bounds");
    std::vector<BoundEntry> out;
    if (N == 2) {
        out.push_back(entry("prior_a1", 2.0 * d - 1.0, "two parties",
                            "earlier two-party estimate, dimension-linear"));
        out.push_back(entry("prior_a2", 2.0 * d, "two parties",
                            "earlier two-party estimate, weaker constant"));
    }
    {
        BoundEntry b;
        b.label         = "prior_b";
        b.applicability = "two parties, large d";
        b.citation      = "order d/sqrt(ln d) with an unspecified universal "
                          "constant; descriptive only";
        out.push_back(std::move(b));
    }
    out.push_back(entry("prior_c", ghz_bound(d, N), "GHZ-type states",
                        "earlier GHZ-state estimate"));
    out.push_back(entry("prior_d1",
                        dpow(2.0, N - 1) * dpow(d, N - 1) -
                            dpow(2.0, N - 1) + 1.0,
                        "any state",
                        "earlier multipartite estimate, exponential in N"));
    out.push_back(entry("prior_d2", dpow(2.0 * d, N - 1), "any state",
                        "earlier multipartite product estimate"));
    return out;
}

void BoundQuery::validate() const {
    require_dn(d, N, "bound query");
    if (settings && *settings < 1)
        throw Error::validation("bound query: setting count must be >= 1 "
                                "when given");
}

BoundReport best_known(const BoundQuery& q) {
    q.validate();
    BoundReport rep;
    rep.entries.push_back(entry(
        "theorem1", theorem1(q.d, q.N), "any settings, any state",
        "covering-norm estimate of the source-operator dilation"));
    if (q.state_class == StateClass::ghz)
        rep.entries.push_back(entry("ghz_bound", ghz_bound(q.d, q.N),
                                    "GHZ-type states",
                                    "sharpened pair-sum for GHZ weights"));
    if (q.settings) {
        rep.entries.push_back(
            entry("corollary_generalized",
                  corollary_generalized(q.d, *q.settings, q.N),
                  "fixed setting count",
                  "setting-count collapse of the dilation bound"));
        if (q.measurement_class == MeasurementClass::projective)
            rep.entries.push_back(
                entry("corollary_projective",
                      corollary_projective(q.d, *q.settings, q.N),
                      "fixed setting count, projective measurements",
                      "projective-measurement refinement"));
    }
    for (BoundEntry& e : prior_bounds(q.d, q.N)) {
        // The GHZ-only prior row competes only when the query is GHZ.
        if (e.label == "prior_c" && q.state_class != StateClass::ghz)
            continue;
        rep.entries.push_back(std::move(e));
    }

    rep.best = std::numeric_limits<double>::infinity();
    for (const BoundEntry& e : rep.entries)
        if (e.value && *e.value < rep.best) {
            rep.best       = *e.value;
            rep.best_label = e.label;
        }
    return rep;
}

} // namespace bellbound
