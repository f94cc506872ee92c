#pragma once

#include <string>

#include "json.hpp"

#include "bellbound/complex_matrix.hpp"
#include "bellbound/quantum.hpp"
#include "bellbound/scenario.hpp"

namespace bellbound {

using ordered_json = nlohmann::ordered_json;

// Matrices travel as {"rows": n, "cols": m, "re": [...], "im": [...]},
// row-major. `where` names the field in fault messages.
ordered_json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const ordered_json& j,
                               const std::string& where);

// Functionals: {"scenario": {"parties": N, "settings": [...],
// "outcomes": [...]}, "coeffs": [{"s": [...], "lam": [...], "c": x}, ...]}.
// Tuples absent from the list carry coefficient 0; duplicates fault.
// Behaviors are identical with "p" entries.
ordered_json functional_to_json(const BellFunctional& f);
BellFunctional functional_from_json(const ordered_json& j);
ordered_json behavior_to_json(const Behavior& p);
Behavior behavior_from_json(const ordered_json& j);

// Models: {"dims": [...], "rho": matrix,
// "povms": [party][setting][outcome] -> matrix}.
ordered_json model_to_json(const QuantumModel& m);
QuantumModel model_from_json(const ordered_json& j);

// Parses a file, converting parse errors (with their line/column
// diagnostics) and missing files into validation faults.
ordered_json load_json_file(const std::string& path);

} // namespace bellbound
