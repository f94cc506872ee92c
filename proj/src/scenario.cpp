#include "bellbound/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <string>

#include "bellbound/errors.hpp"

namespace bellbound {

namespace {

// Counts are tracked in double so the fault message can report totals that
// would overflow size_t; whole numbers print without a fractional tail.
std::string count_string(double exact) {
    char buf[32];
    if (exact < 1e15 && exact == std::floor(exact))
        std::snprintf(buf, sizeof buf, "%.0f", exact);
    else
        std::snprintf(buf, sizeof buf, "%.6g", exact);
    return buf;
}

// Product with an explicit ceiling so absurd scenarios fault instead of
// overflowing size_t. The fault message carries the full count.
std::size_t checked_product(std::span<const int> radix, std::size_t cap,
                            const char* what) {
    double exact = 1.0;
    for (int r : radix) exact *= static_cast<double>(r);
    std::size_t p = 1;
    for (int r : radix) {
        if (r <= 0)
            throw Error::validation(std::string(what) + ": radix must be >= 1");
        if (p > cap / static_cast<std::size_t>(r))
            throw Error::budget(std::string(what) + " of " +
                                count_string(exact) + " exceeds budget of " +
                                std::to_string(cap));
        p *= static_cast<std::size_t>(r);
    }
    return p;
}

} // namespace

void BellScenario::validate() const {
    if (settings.empty())
        throw Error::validation("scenario needs at least one party");
    if (settings.size() != outcomes.size())
        throw Error::validation("scenario settings/outcomes length mismatch: " +
                                std::to_string(settings.size()) + " vs " +
                                std::to_string(outcomes.size()));
    for (std::size_t n = 0; n < settings.size(); ++n) {
        if (settings[n] < 1)
            throw Error::validation("party " + std::to_string(n) +
                                    " needs at least one setting");
        if (outcomes[n] < 2)
            throw Error::validation("party " + std::to_string(n) +
                                    " needs at least two outcomes");
    }
}

BellScenario uniform_scenario(int parties, int settings, int outcomes) {
    if (parties < 1)
        throw Error::validation("uniform_scenario: parties must be >= 1");
    BellScenario sc;
    sc.settings.assign(static_cast<std::size_t>(parties), settings);
    sc.outcomes.assign(static_cast<std::size_t>(parties), outcomes);
    sc.validate();
    return sc;
}

ScenarioTable::ScenarioTable(BellScenario sc) : sc_(std::move(sc)) {
    sc_.validate();
    s_span_   = checked_product(sc_.settings, kLhvStrategyBudget,
                                "setting tuple count");
    lam_span_ = checked_product(sc_.outcomes, kLhvStrategyBudget,
                                "outcome tuple count");
    if (s_span_ > kLhvStrategyBudget / lam_span_)
        throw Error::budget("scenario table exceeds budget of " +
                            std::to_string(kLhvStrategyBudget) + " entries");
    v_.assign(s_span_ * lam_span_, 0.0);
}

double ScenarioTable::at(std::span<const int> s,
                         std::span<const int> lam) const {
    return at(flatten(s, sc_.settings), flatten(lam, sc_.outcomes));
}

double& ScenarioTable::at(std::span<const int> s, std::span<const int> lam) {
    return at(flatten(s, sc_.settings), flatten(lam, sc_.outcomes));
}

double ScenarioTable::max_abs() const {
    double m = 0.0;
    for (double x : v_) m = std::max(m, std::abs(x));
    return m;
}

double bell_value(const BellFunctional& f, const Behavior& p) {
    if (!(f.scenario() == p.scenario()))
        throw Error::validation("bell_value: functional and behavior live on "
                                "different scenarios");
    return std::transform_reduce(f.values().begin(), f.values().end(),
                                 p.values().begin(), 0.0);
}

Behavior deterministic_behavior(const BellScenario& sc,
                                const DeterministicStrategy& strategy) {
    sc.validate();
    if (strategy.size() != static_cast<std::size_t>(sc.parties()))
        throw Error::validation("strategy party count mismatch");
    for (std::size_t n = 0; n < strategy.size(); ++n) {
        if (strategy[n].size() != static_cast<std::size_t>(sc.settings[n]))
            throw Error::validation("strategy of party " + std::to_string(n) +
                                    " covers the wrong number of settings");
        for (int lam : strategy[n])
            if (lam < 0 || lam >= sc.outcomes[n])
                throw Error::validation("strategy of party " +
                                        std::to_string(n) +
                                        " names an out-of-range outcome");
    }

    Behavior p(sc);
    std::vector<int> s(strategy.size(), 0);
    std::size_t s_flat = 0;
    do {
        std::size_t lam_flat = 0;
        for (std::size_t n = 0; n < strategy.size(); ++n)
            lam_flat = lam_flat * static_cast<std::size_t>(sc.outcomes[n]) +
                       static_cast<std::size_t>(
                           strategy[n][static_cast<std::size_t>(s[n])]);
        p.at(s_flat, lam_flat) = 1.0;
        ++s_flat;
    } while (next_tuple(s, sc.settings));
    return p;
}

LhvConstants lhv_constants(const BellFunctional& f,
                           std::size_t max_strategies) {
    const BellScenario& sc = f.scenario();
    const auto parties     = static_cast<std::size_t>(sc.parties());

    // One digit per (party, setting) slot; party n contributes settings[n]
    // digits of radix outcomes[n].
    std::vector<int> radix;
    std::vector<std::size_t> offset(parties);
    for (std::size_t n = 0; n < parties; ++n) {
        offset[n] = radix.size();
        radix.insert(radix.end(), static_cast<std::size_t>(sc.settings[n]),
                     sc.outcomes[n]);
    }
    const std::size_t total =
        checked_product(radix, max_strategies, "deterministic strategy count");

    LhvConstants out;
    out.strategies = total;
    out.sup        = -std::numeric_limits<double>::infinity();
    out.inf        = std::numeric_limits<double>::infinity();

    std::vector<int> digits(radix.size(), 0);
    std::vector<int> s(parties, 0);
    std::vector<int> best_sup, best_inf;
    do {
        double val = 0.0;
        std::fill(s.begin(), s.end(), 0);
        std::size_t s_flat = 0;
        do {
            std::size_t lam_flat = 0;
            for (std::size_t n = 0; n < parties; ++n)
                lam_flat =
                    lam_flat * static_cast<std::size_t>(sc.outcomes[n]) +
                    static_cast<std::size_t>(
                        digits[offset[n] + static_cast<std::size_t>(s[n])]);
            val += f.at(s_flat, lam_flat);
            ++s_flat;
        } while (next_tuple(s, sc.settings));

        if (val > out.sup) {
            out.sup  = val;
            best_sup = digits;
        }
        if (val < out.inf) {
            out.inf  = val;
            best_inf = digits;
        }
    } while (next_tuple(digits, radix));

    out.lhv_norm = std::max(std::abs(out.sup), std::abs(out.inf));

    auto unpack = [&](const std::vector<int>& d) {
        DeterministicStrategy st(parties);
        for (std::size_t n = 0; n < parties; ++n)
            st[n].assign(
                d.begin() + static_cast<std::ptrdiff_t>(offset[n]),
                d.begin() + static_cast<std::ptrdiff_t>(
                                offset[n] +
                                static_cast<std::size_t>(sc.settings[n])));
        return st;
    };
    out.arg_sup = unpack(best_sup);
    out.arg_inf = unpack(best_inf);
    return out;
}

NonsignalingReport is_nonsignaling(const Behavior& p, double tol) {
    const BellScenario& sc = p.scenario();
    NonsignalingReport rep;

    for (std::size_t s = 0; s < p.setting_tuples(); ++s) {
        double sum = 0.0;
        for (std::size_t lam = 0; lam < p.outcome_tuples(); ++lam) {
            double v = p.at(s, lam);
            sum += v;
            rep.worst_negative = std::max(rep.worst_negative, -v);
        }
        rep.worst_normalization =
            std::max(rep.worst_normalization, std::abs(sum - 1.0));
    }

    // For every proper site subset: the marginal over the subset must not
    // react to the settings chosen outside it.
    const auto parties = static_cast<std::size_t>(sc.parties());
    std::vector<int> s_full(parties), lam_full(parties);
    for (std::size_t mask = 1; mask + 1 < (std::size_t(1) << parties);
         ++mask) {
        std::vector<std::size_t> in, out;
        for (std::size_t n = 0; n < parties; ++n)
            ((mask >> n) & 1 ? in : out).push_back(n);

        std::vector<int> s_in_radix, lam_in_radix, s_out_radix, lam_out_radix;
        for (std::size_t n : in) {
            s_in_radix.push_back(sc.settings[n]);
            lam_in_radix.push_back(sc.outcomes[n]);
        }
        for (std::size_t n : out) {
            s_out_radix.push_back(sc.settings[n]);
            lam_out_radix.push_back(sc.outcomes[n]);
        }

        std::vector<int> s_in(in.size(), 0);
        do {
            std::vector<int> lam_in(in.size(), 0);
            do {
                double ref     = 0.0;
                bool have_ref  = false;
                std::vector<int> s_out(out.size(), 0);
                do {
                    double marg = 0.0;
                    std::vector<int> lam_out(out.size(), 0);
                    do {
                        for (std::size_t k = 0; k < in.size(); ++k) {
                            s_full[in[k]]   = s_in[k];
                            lam_full[in[k]] = lam_in[k];
                        }
                        for (std::size_t k = 0; k < out.size(); ++k) {
                            s_full[out[k]]   = s_out[k];
                            lam_full[out[k]] = lam_out[k];
                        }
                        marg += p.at(s_full, lam_full);
                    } while (next_tuple(lam_out, lam_out_radix));
                    if (!have_ref) {
                        ref      = marg;
                        have_ref = true;
                    } else {
                        rep.worst_marginal = std::max(rep.worst_marginal,
                                                      std::abs(marg - ref));
                    }
                } while (next_tuple(s_out, s_out_radix));
            } while (next_tuple(lam_in, lam_in_radix));
        } while (next_tuple(s_in, s_in_radix));
    }

    rep.ok = rep.worst_normalization <= tol && rep.worst_negative <= tol &&
             rep.worst_marginal <= tol;
    if (!rep.ok) {
        if (rep.worst_marginal > tol)
            rep.detail = "a subset marginal shifts by " +
                         std::to_string(rep.worst_marginal) +
                         " under a remote setting change";
        else if (rep.worst_normalization > tol)
            rep.detail = "normalization off by " +
                         std::to_string(rep.worst_normalization);
        else
            rep.detail = "negative probability of magnitude " +
                         std::to_string(rep.worst_negative);
    }
    return rep;
}

double correlation_function(const Behavior& p, std::span<const int> s,
                            std::span<const int> sites,
                            const std::vector<std::vector<double>>& relabel) {
    const BellScenario& sc = p.scenario();
    const auto parties     = static_cast<std::size_t>(sc.parties());
    if (s.size() != parties)
        throw Error::validation("correlation_function: setting tuple length "
                                "mismatch");
    if (sites.empty())
        throw Error::validation("correlation_function: empty site set");
    if (relabel.size() != sites.size())
        throw Error::validation("correlation_function: one relabeling per "
                                "selected site required");
    std::vector<bool> selected(parties, false);
    for (std::size_t k = 0; k < sites.size(); ++k) {
        const int n = sites[k];
        if (n < 0 || static_cast<std::size_t>(n) >= parties)
            throw Error::validation("correlation_function: site out of "
                                    "range");
        if (selected[static_cast<std::size_t>(n)])
            throw Error::validation("correlation_function: duplicate site");
        selected[static_cast<std::size_t>(n)] = true;
        if (relabel[k].size() !=
            static_cast<std::size_t>(
                sc.outcomes[static_cast<std::size_t>(n)]))
            throw Error::validation("correlation_function: relabeling of "
                                    "site " + std::to_string(n) +
                                    " has the wrong length");
    }

    const std::size_t s_flat = flatten(s, sc.settings);
    double sum = 0.0;
    std::vector<int> lam(parties, 0);
    std::size_t lam_flat = 0;
    do {
        double prod = 1.0;
        for (std::size_t k = 0; k < sites.size(); ++k)
            prod *= relabel[k][static_cast<std::size_t>(
                lam[static_cast<std::size_t>(sites[k])])];
        sum += prod * p.at(s_flat, lam_flat);
        ++lam_flat;
    } while (next_tuple(lam, sc.outcomes));
    return sum;
}

double correlation_function(const Behavior& p, std::span<const int> s) {
    const BellScenario& sc = p.scenario();
    std::vector<int> sites;
    std::vector<std::vector<double>> relabel;
    for (int n = 0; n < sc.parties(); ++n) {
        if (sc.outcomes[static_cast<std::size_t>(n)] != 2)
            throw Error::validation("correlation_function: +-1 relabeling "
                                    "requires two outcomes per party");
        sites.push_back(n);
        relabel.push_back({1.0, -1.0});
    }
    return correlation_function(p, s, sites, relabel);
}

BellFunctional from_correlation_coeffs(const BellScenario& sc,
                                       std::span<const double> c) {
    sc.validate();
    for (int d : sc.outcomes)
        if (d != 2)
            throw Error::validation("from_correlation_coeffs requires two "
                                    "outcomes per party");
    BellFunctional f(sc);
    if (c.size() != f.setting_tuples())
        throw Error::validation("from_correlation_coeffs: expected " +
                                std::to_string(f.setting_tuples()) +
                                " coefficients, got " +
                                std::to_string(c.size()));
    std::vector<int> lam(sc.outcomes.size(), 0);
    std::size_t lam_flat = 0;
    do {
        int parity = 0;
        for (int l : lam) parity ^= l;
        const double sign = parity ? -1.0 : 1.0;
        for (std::size_t s = 0; s < f.setting_tuples(); ++s)
            f.at(s, lam_flat) = sign * c[s];
        ++lam_flat;
    } while (next_tuple(lam, sc.outcomes));
    return f;
}

BellFunctional chsh_functional() {
    const double c[] = {1.0, 1.0, 1.0, -1.0};
    return from_correlation_coeffs(uniform_scenario(2, 2, 2), c);
}

BellFunctional mermin_klyshko_functional(int parties) {
    if (parties < 2)
        throw Error::validation("mermin_klyshko_functional: parties must be "
                                ">= 2");
    // Correlation coefficients of F_n over n-bit setting tuples (bit 0 =
    // unprimed). The flip F -> F' is index complement.
    std::vector<double> f = {1.0, 0.0};
    for (int n = 1; n < parties; ++n) {
        const std::size_t mask = f.size() - 1;
        std::vector<double> g(2 * f.size());
        for (std::size_t i = 0; i < f.size(); ++i) {
            const double fp = f[mask ^ i];
            g[2 * i]     = 0.5 * (f[i] + fp);
            g[2 * i + 1] = 0.5 * (f[i] - fp);
        }
        f = std::move(g);
    }
    for (double& x : f) x *= 2.0;
    return from_correlation_coeffs(uniform_scenario(parties, 2, 2), f);
}

BellFunctional builtin_functional(const std::string& name) {
    if (name == "chsh") return chsh_functional();
    const std::string head = "mermin_klyshko(";
    if (name.size() > head.size() + 1 && name.compare(0, head.size(), head) ==
        0 && name.back() == ')') {
        const std::string digits =
            name.substr(head.size(), name.size() - head.size() - 1);
        if (!digits.empty() &&
            digits.find_first_not_of("0123456789") == std::string::npos)
            return mermin_klyshko_functional(std::stoi(digits));
    }
    throw Error::validation("unknown builtin functional '" + name +
                            "'; expected chsh or mermin_klyshko(N)");
}

} // namespace bellbound
