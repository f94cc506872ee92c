#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "bellbound/errors.hpp"
#include "bellbound/json_io.hpp"
#include "bellbound/quantum.hpp"
#include "bellbound/rng.hpp"
#include "bellbound/scenario.hpp"
#include "bellbound/tensor_ops.hpp"

using namespace bellbound;

TEST_CASE("matrices round-trip exactly") {
    Rng rng(kDefaultSeed);
    const auto m    = random_hermitian(rng, 3);
    const auto j    = matrix_to_json(m);
    const auto back = matrix_from_json(j, "m");
    CHECK(back.rows() == m.rows());
    CHECK(back.cols() == m.cols());
    CHECK(max_abs_diff(m, back) == 0.0);
}

TEST_CASE("matrix parsing faults carry the field path") {
    ordered_json j;
    j["rows"] = 2;
    j["cols"] = 2;
    j["re"]   = {1.0, 0.0, 0.0};
    j["im"]   = {0.0, 0.0, 0.0, 0.0};
    CHECK_THROWS_WITH_AS((void)matrix_from_json(j, "state"),
                         doctest::Contains("state"), Error);

    ordered_json missing;
    missing["rows"] = 2;
    CHECK_THROWS_AS((void)matrix_from_json(missing, "state"), Error);
}

TEST_CASE("functionals round-trip and zero entries are omitted") {
    const auto f    = chsh_functional();
    const auto j    = functional_to_json(f);
    const auto back = functional_from_json(j);
    CHECK(back.scenario() == f.scenario());
    for (std::size_t i = 0; i < f.values().size(); ++i)
        CHECK(back.values()[i] == f.values()[i]);

    // CHSH in correlation form has 16 nonzero coefficient entries over
    // binary outcomes; each coefficient is +-1, never 0.
    CHECK(j["coeffs"].size() == 16);

    BellFunctional sparse(BellScenario{{1, 1}, {2, 2}});
    sparse.at(std::vector<int>{0, 0}, std::vector<int>{1, 0}) = 2.5;
    const auto js = functional_to_json(sparse);
    CHECK(js["coeffs"].size() == 1);
    const auto sback = functional_from_json(js);
    CHECK(sback.at(std::vector<int>{0, 0}, std::vector<int>{1, 0}) == 2.5);
    CHECK(sback.at(std::vector<int>{0, 0}, std::vector<int>{0, 0}) == 0.0);
}

TEST_CASE("behaviors round-trip with p entries") {
    BellScenario sc{{2, 2}, {2, 2}};
    Rng rng(7);
    Behavior p(sc);
    for (auto& v : p.values()) v = rng.next_uniform();
    const auto j    = behavior_to_json(p);
    const auto back = behavior_from_json(j);
    for (std::size_t i = 0; i < p.values().size(); ++i)
        CHECK(back.values()[i] == p.values()[i]);
    // Behavior entries carry "p" values rather than "c" coefficients.
    REQUIRE(j["coeffs"].size() > 0);
    CHECK(j["coeffs"][0].contains("p"));
    CHECK_FALSE(j["coeffs"][0].contains("c"));
}

TEST_CASE("duplicate tuples fault") {
    auto j = functional_to_json(chsh_functional());
    j["coeffs"].push_back(j["coeffs"][0]);
    CHECK_THROWS_WITH_AS((void)functional_from_json(j),
                         doctest::Contains("duplicate"), Error);
}

TEST_CASE("out-of-range tuples fault with the entry path") {
    auto j = functional_to_json(chsh_functional());
    j["coeffs"][3]["s"][0] = 5;
    CHECK_THROWS_WITH_AS((void)functional_from_json(j),
                         doctest::Contains("coeffs[3]"), Error);

    auto k = functional_to_json(chsh_functional());
    k["coeffs"][2]["lam"][1] = -1;
    CHECK_THROWS_AS((void)functional_from_json(k), Error);
}

TEST_CASE("scenario field errors are validation faults") {
    ordered_json j;
    j["scenario"] = {{"parties", 2},
                     {"settings", {2, 2}},
                     {"outcomes", {2}}};
    j["coeffs"]   = ordered_json::array();
    CHECK_THROWS_AS((void)functional_from_json(j), Error);

    ordered_json mismatch;
    mismatch["scenario"] = {{"parties", 3},
                            {"settings", {2, 2}},
                            {"outcomes", {2, 2}}};
    mismatch["coeffs"]   = ordered_json::array();
    CHECK_THROWS_AS((void)functional_from_json(mismatch), Error);
}

TEST_CASE("models round-trip") {
    BellScenario sc{{2, 2}, {2, 2}};
    Rng rng(11);
    const auto m    = random_model(sc, DimVector{2, 2}, rng);
    const auto j    = model_to_json(m);
    const auto back = model_from_json(j);
    CHECK(back.dims.dims == m.dims.dims);
    CHECK(max_abs_diff(back.rho, m.rho) == 0.0);
    REQUIRE(back.povms.size() == m.povms.size());
    for (std::size_t n = 0; n < m.povms.size(); ++n) {
        REQUIRE(back.povms[n].size() == m.povms[n].size());
        for (std::size_t s = 0; s < m.povms[n].size(); ++s)
            for (std::size_t a = 0; a < m.povms[n][s].elements.size(); ++a)
                CHECK(max_abs_diff(back.povms[n][s].elements[a],
                                   m.povms[n][s].elements[a]) == 0.0);
    }
    back.validate(sc);
}

TEST_CASE("model parsing faults name the offending element") {
    BellScenario sc{{2, 2}, {2, 2}};
    Rng rng(13);
    auto j = model_to_json(random_model(sc, DimVector{2, 2}, rng));
    j["povms"][1][0][1]["re"] = {1.0};
    CHECK_THROWS_WITH_AS((void)model_from_json(j),
                         doctest::Contains("povms[1][0][1]"), Error);
}

TEST_CASE("load_json_file reports parse diagnostics and missing files") {
    CHECK_THROWS_WITH_AS((void)load_json_file("/nonexistent/nope.json"),
                         doctest::Contains("cannot open"), Error);

    const std::string path = "/tmp/bellbound_bad_json_test.json";
    {
        std::ofstream f(path);
        f << "{ \"a\": [1, 2,\n, 3] }";
    }
    try {
        (void)load_json_file(path);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::validation);
        // nlohmann diagnostics carry the byte/line position of the error.
        CHECK(std::string(e.what()).find(path) != std::string::npos);
    }
}
