#include "bellbound/json_io.hpp"

#include <fstream>
#include <set>
#include <utility>
#include <vector>

#include "bellbound/errors.hpp"
#include "bellbound/multi_index.hpp"

namespace bellbound {

namespace {

const ordered_json& field(const ordered_json& j, const char* key,
                          const std::string& where) {
    if (!j.is_object())
        throw Error::validation(where + ": expected an object");
    auto it = j.find(key);
    if (it == j.end())
        throw Error::validation(where + ": missing field '" + key + "'");
    return *it;
}

int as_int(const ordered_json& j, const std::string& where) {
    if (!j.is_number_integer())
        throw Error::validation(where + ": expected an integer");
    return j.get<int>();
}

double as_double(const ordered_json& j, const std::string& where) {
    if (!j.is_number())
        throw Error::validation(where + ": expected a number");
    return j.get<double>();
}

std::vector<int> as_int_array(const ordered_json& j,
                              const std::string& where) {
    if (!j.is_array())
        throw Error::validation(where + ": expected an array");
    std::vector<int> out;
    out.reserve(j.size());
    for (std::size_t k = 0; k < j.size(); ++k)
        out.push_back(as_int(j[k], where + "[" + std::to_string(k) + "]"));
    return out;
}

ordered_json scenario_to_json(const BellScenario& sc) {
    ordered_json j;
    j["parties"]  = sc.parties();
    j["settings"] = sc.settings;
    j["outcomes"] = sc.outcomes;
    return j;
}

BellScenario scenario_from_json(const ordered_json& j,
                                const std::string& where) {
    BellScenario sc;
    const int parties = as_int(field(j, "parties", where),
                               where + ".parties");
    sc.settings = as_int_array(field(j, "settings", where),
                               where + ".settings");
    sc.outcomes = as_int_array(field(j, "outcomes", where),
                               where + ".outcomes");
    if (parties < 0 ||
        sc.settings.size() != static_cast<std::size_t>(parties) ||
        sc.outcomes.size() != static_cast<std::size_t>(parties))
        throw Error::validation(where + ": settings/outcomes must list one "
                                        "entry per party");
    sc.validate();
    return sc;
}

template <typename Table>
ordered_json table_to_json(const Table& t, const char* value_key) {
    const BellScenario& sc = t.scenario();
    ordered_json j;
    j["scenario"] = scenario_to_json(sc);
    ordered_json entries = ordered_json::array();
    std::vector<int> s(static_cast<std::size_t>(sc.parties()), 0);
    std::size_t s_flat = 0;
    do {
        std::vector<int> lam(static_cast<std::size_t>(sc.parties()), 0);
        std::size_t lam_flat = 0;
        do {
            const double v = t.at(s_flat, lam_flat);
            if (v != 0.0) {
                ordered_json e;
                e["s"]       = s;
                e["lam"]     = lam;
                e[value_key] = v;
                entries.push_back(std::move(e));
            }
            ++lam_flat;
        } while (next_tuple(lam, sc.outcomes));
        ++s_flat;
    } while (next_tuple(s, sc.settings));
    j["coeffs"] = std::move(entries);
    return j;
}

template <typename Table>
Table table_from_json(const ordered_json& j, const char* value_key,
                      const std::string& what) {
    const BellScenario sc =
        scenario_from_json(field(j, "scenario", what), what + ".scenario");
    Table t(sc);

    const ordered_json& entries = field(j, "coeffs", what);
    if (!entries.is_array())
        throw Error::validation(what + ".coeffs: expected an array");
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (std::size_t k = 0; k < entries.size(); ++k) {
        const std::string where = what + ".coeffs[" + std::to_string(k) + "]";
        const ordered_json& e   = entries[k];
        const std::vector<int> s =
            as_int_array(field(e, "s", where), where + ".s");
        const std::vector<int> lam =
            as_int_array(field(e, "lam", where), where + ".lam");
        if (s.size() != static_cast<std::size_t>(sc.parties()))
            throw Error::validation(where + ".s: expected one setting per "
                                            "party");
        if (lam.size() != static_cast<std::size_t>(sc.parties()))
            throw Error::validation(where + ".lam: expected one outcome per "
                                            "party");
        for (std::size_t n = 0; n < s.size(); ++n) {
            if (s[n] < 0 || s[n] >= sc.settings[n])
                throw Error::validation(where + ".s[" + std::to_string(n) +
                                        "]: setting out of range");
            if (lam[n] < 0 || lam[n] >= sc.outcomes[n])
                throw Error::validation(where + ".lam[" + std::to_string(n) +
                                        "]: outcome out of range");
        }
        const std::size_t s_flat   = flatten(s, sc.settings);
        const std::size_t lam_flat = flatten(lam, sc.outcomes);
        if (!seen.insert({s_flat, lam_flat}).second)
            throw Error::validation(where + ": duplicate index tuple");
        t.at(s_flat, lam_flat) =
            as_double(field(e, value_key, where),
                      where + "." + value_key);
    }
    return t;
}

} // namespace

ordered_json matrix_to_json(const ComplexMatrix& m) {
    ordered_json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    ordered_json re = ordered_json::array();
    ordered_json im = ordered_json::array();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t k = 0; k < m.cols(); ++k) {
            re.push_back(m.at(i, k).real());
            im.push_back(m.at(i, k).imag());
        }
    j["re"] = std::move(re);
    j["im"] = std::move(im);
    return j;
}

ComplexMatrix matrix_from_json(const ordered_json& j,
                               const std::string& where) {
    const int rows = as_int(field(j, "rows", where), where + ".rows");
    const int cols = as_int(field(j, "cols", where), where + ".cols");
    if (rows < 1 || cols < 1)
        throw Error::validation(where + ": rows and cols must be >= 1");
    const ordered_json& re = field(j, "re", where);
    const ordered_json& im = field(j, "im", where);
    const auto count = static_cast<std::size_t>(rows) *
                       static_cast<std::size_t>(cols);
    if (!re.is_array() || re.size() != count)
        throw Error::validation(where + ".re: expected " +
                                std::to_string(count) + " numbers");
    if (!im.is_array() || im.size() != count)
        throw Error::validation(where + ".im: expected " +
                                std::to_string(count) + " numbers");
    ComplexMatrix m(static_cast<std::size_t>(rows),
                    static_cast<std::size_t>(cols));
    for (std::size_t k = 0; k < count; ++k)
        m.data()[k] = cd(as_double(re[k], where + ".re[" +
                                             std::to_string(k) + "]"),
                         as_double(im[k], where + ".im[" +
                                             std::to_string(k) + "]"));
    return m;
}

ordered_json functional_to_json(const BellFunctional& f) {
    return table_to_json(f, "c");
}

BellFunctional functional_from_json(const ordered_json& j) {
    return table_from_json<BellFunctional>(j, "c", "functional");
}

ordered_json behavior_to_json(const Behavior& p) {
    return table_to_json(p, "p");
}

Behavior behavior_from_json(const ordered_json& j) {
    return table_from_json<Behavior>(j, "p", "behavior");
}

ordered_json model_to_json(const QuantumModel& m) {
    ordered_json j;
    j["dims"] = m.dims.dims;
    j["rho"]  = matrix_to_json(m.rho);
    ordered_json parties = ordered_json::array();
    for (const auto& per_setting : m.povms) {
        ordered_json settings = ordered_json::array();
        for (const Povm& povm : per_setting) {
            ordered_json elements = ordered_json::array();
            for (const ComplexMatrix& e : povm.elements)
                elements.push_back(matrix_to_json(e));
            settings.push_back(std::move(elements));
        }
        parties.push_back(std::move(settings));
    }
    j["povms"] = std::move(parties);
    return j;
}

QuantumModel model_from_json(const ordered_json& j) {
    QuantumModel m;
    m.dims.dims = as_int_array(field(j, "dims", "model"), "model.dims");
    for (int d : m.dims.dims)
        if (d < 1)
            throw Error::validation("model.dims: entries must be >= 1");
    m.rho = matrix_from_json(field(j, "rho", "model"), "model.rho");

    const ordered_json& parties = field(j, "povms", "model");
    if (!parties.is_array())
        throw Error::validation("model.povms: expected an array");
    for (std::size_t n = 0; n < parties.size(); ++n) {
        const std::string pw = "model.povms[" + std::to_string(n) + "]";
        if (!parties[n].is_array())
            throw Error::validation(pw + ": expected an array");
        std::vector<Povm> per_setting;
        for (std::size_t s = 0; s < parties[n].size(); ++s) {
            const std::string sw = pw + "[" + std::to_string(s) + "]";
            if (!parties[n][s].is_array() || parties[n][s].empty())
                throw Error::validation(sw + ": expected a nonempty array "
                                             "of matrices");
            Povm povm;
            for (std::size_t a = 0; a < parties[n][s].size(); ++a)
                povm.elements.push_back(matrix_from_json(
                    parties[n][s][a],
                    sw + "[" + std::to_string(a) + "]"));
            per_setting.push_back(std::move(povm));
        }
        m.povms.push_back(std::move(per_setting));
    }
    return m;
}

ordered_json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error::validation("cannot open '" + path + "'");
    try {
        return ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error::validation("'" + path + "': " + e.what());
    }
}

} // namespace bellbound
