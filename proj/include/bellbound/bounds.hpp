#pragma once

#include <optional>
#include <string>
#include <vector>

namespace bellbound {

// (2d-1)^(N-1): ceiling on the violation ratio any N-partite functional on
// d-dimensional sites can reach, whatever the setting counts.
double theorem1(int d, int N);

// 2^(N-1)(d-1)+1: the sharper ceiling available for GHZ-type states.
double ghz_bound(int d, int N);

// (2 min{d,S} - 1)^(N-1): the setting count collapses the effective
// dimension when S < d.
double corollary_generalized(int d, int S, int N);

// Projective-measurement refinement:
//   S = 2 -> min{d^((N-1)/2), 3^(N-1)}
//   S >= 3 -> min{d^(S(N-1)/2), (2 min{d,S} - 1)^(N-1)}
// A single setting per site admits a local deterministic model, so S = 1
// returns 1 exactly.
double corollary_projective(int d, int S, int N);

// One row of a bound comparison. Entries without a value are descriptive
// (their constant is not pinned down) and never participate in minima.
struct BoundEntry {
    std::string label;
    std::optional<double> value;
    std::optional<long long> exact; // set when value is integral and fits
    std::string applicability;
    std::string citation; // how the bound arises
};

// The pre-existing estimates a new bound is measured against.
std::vector<BoundEntry> prior_bounds(int d, int N);

enum class MeasurementClass { generalized, projective };
enum class StateClass { arbitrary, ghz };

struct BoundQuery {
    int d = 2;
    int N = 2;
    std::optional<int> settings; // absent = unbounded
    MeasurementClass measurement_class = MeasurementClass::generalized;
    StateClass state_class             = StateClass::arbitrary;

    void validate() const;
};

struct BoundReport {
    std::vector<BoundEntry> entries;
    double best = 0.0; // min over valued entries
    std::string best_label;
};

// Collates every bound applicable to the query; best = the smallest.
BoundReport best_known(const BoundQuery& q);

} // namespace bellbound
