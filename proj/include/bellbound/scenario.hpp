#pragma once

#include <span>
#include <string>
#include <vector>

#include "bellbound/multi_index.hpp"

namespace bellbound {

// Measurement scenario: party n chooses among settings[n] inputs and
// observes one of outcomes[n] results. Settings and outcomes are 0-based.
struct BellScenario {
    std::vector<int> settings;
    std::vector<int> outcomes;

    int parties() const noexcept { return static_cast<int>(settings.size()); }
    std::size_t setting_tuples() const { return radix_product(settings); }
    std::size_t outcome_tuples() const { return radix_product(outcomes); }

    // Faults (validation) unless parties >= 1, settings >= 1, outcomes >= 2
    // and the two lists have equal length. Single-party scenarios are
    // permitted for diagnostics even though Bell scenarios proper start at
    // two parties.
    void validate() const;

    bool operator==(const BellScenario&) const = default;
};

BellScenario uniform_scenario(int parties, int settings, int outcomes);

// Dense real table over (setting tuple, outcome tuple) pairs. Flat layout:
// row-major, outcome index fastest, both flattened with flatten().
class ScenarioTable {
  public:
    ScenarioTable() = default;
    explicit ScenarioTable(BellScenario sc);

    const BellScenario& scenario() const noexcept { return sc_; }
    std::size_t setting_tuples() const noexcept { return s_span_; }
    std::size_t outcome_tuples() const noexcept { return lam_span_; }

    double at(std::size_t s_flat, std::size_t lam_flat) const {
        return v_[s_flat * lam_span_ + lam_flat];
    }
    double& at(std::size_t s_flat, std::size_t lam_flat) {
        return v_[s_flat * lam_span_ + lam_flat];
    }
    double at(std::span<const int> s, std::span<const int> lam) const;
    double& at(std::span<const int> s, std::span<const int> lam);

    const std::vector<double>& values() const noexcept { return v_; }
    std::vector<double>& values() noexcept { return v_; }

    double max_abs() const;

  private:
    BellScenario sc_;
    std::size_t s_span_   = 0;
    std::size_t lam_span_ = 0;
    std::vector<double> v_;
};

// Real linear form on behaviors: value = sum_{s,lam} coeff(s,lam) P(lam|s).
struct BellFunctional : ScenarioTable {
    using ScenarioTable::ScenarioTable;
};

// Conditional probability table P(lam|s).
struct Behavior : ScenarioTable {
    using ScenarioTable::ScenarioTable;
};

double bell_value(const BellFunctional& f, const Behavior& p);

// One local response function per party: strategy[n][setting] = outcome.
using DeterministicStrategy = std::vector<std::vector<int>>;

Behavior deterministic_behavior(const BellScenario& sc,
                                const DeterministicStrategy& strategy);

// Extremes of the functional over local deterministic strategies. lhv_norm
// is max(|sup|, |inf|), the scale every violation ratio is measured against.
struct LhvConstants {
    double sup      = 0.0;
    double inf      = 0.0;
    double lhv_norm = 0.0;
    std::size_t strategies = 0; // number of strategies enumerated
    DeterministicStrategy arg_sup;
    DeterministicStrategy arg_inf;
};

inline constexpr std::size_t kLhvStrategyBudget = 100'000'000;

// Exhaustive enumeration; faults (budget) if the strategy count exceeds
// max_strategies. The arg strategies are the first attained in odometer
// order.
LhvConstants lhv_constants(const BellFunctional& f,
                           std::size_t max_strategies = kLhvStrategyBudget);

struct NonsignalingReport {
    bool ok = false;
    double worst_normalization = 0.0; // max_s |sum_lam P(lam|s) - 1|
    double worst_negative      = 0.0; // max_{s,lam} max(0, -P(lam|s))
    double worst_marginal      = 0.0; // max marginal discrepancy over all
                                      // site subsets and setting pairs
    std::string detail;               // empty when ok
};

// Checks, for every proper site subset, that the marginal over the subset is
// independent of the settings chosen outside it, plus normalization and
// nonnegativity of the tables.
NonsignalingReport is_nonsignaling(const Behavior& p, double tol);

// Expectation of prod_{i} relabel[i][lam_{sites[i]}] under P(.|s): the
// correlation function of the selected sites with real-relabeled outcomes.
double correlation_function(const Behavior& p, std::span<const int> s,
                            std::span<const int> sites,
                            const std::vector<std::vector<double>>& relabel);

// All sites, binary outcomes relabeled 0 -> +1, 1 -> -1.
double correlation_function(const Behavior& p, std::span<const int> s);

// Functional with coeff(s,lam) = c[flatten(s)] * prod_n (lam_n==0 ? +1 : -1),
// so bell_value(f,p) = sum_s c_s <s>. Binary outcomes only.
BellFunctional from_correlation_coeffs(const BellScenario& sc,
                                       std::span<const double> c);

// Two-party two-setting correlation functional with coefficients
// (+1,+1,+1,-1); deterministic extremes +/-2.
BellFunctional chsh_functional();

// N-party two-setting full-correlation family defined by the recursion
//   F_1 = A_0,  F_{n+1} = (F_n (B + B') + F_n' (B - B')) / 2,
// scaled by 2 so the deterministic extreme is 2 for every N and the N=2
// member coincides with chsh_functional().
BellFunctional mermin_klyshko_functional(int parties);

// Name dispatch: "chsh" or "mermin_klyshko(N)". Unknown names fault.
BellFunctional builtin_functional(const std::string& name);

} // namespace bellbound
