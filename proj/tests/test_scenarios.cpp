#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include <gaugelab/scenarios.hpp>
#include <json.hpp>

using namespace gaugelab;
using scenarios::Report;

namespace {

std::vector<std::string> claim_ids(const Report& rep) {
    std::vector<std::string> ids;
    for (const auto& c : rep.claims) ids.push_back(c.id);
    return ids;
}

const scenarios::Claim& claim(const Report& rep, const std::string& id) {
    for (const auto& c : rep.claims)
        if (c.id == id) return c;
    FAIL("missing claim: " << id);
    throw std::logic_error("unreachable");
}

void require_all_pass(const Report& rep) {
    for (const auto& c : rep.claims) {
        INFO(rep.scenario << " / " << c.id << ": measured " << c.measured);
        CHECK(c.pass);
    }
    REQUIRE(rep.all_pass());
}

// every produced claim id must be registered, in catalog order; fixture-match
// style claims drop out when the parameters differ from the committed run
void require_registered(const Report& rep, const std::vector<std::string>& skipped = {}) {
    const auto& info = scenarios::find_scenario(rep.scenario);
    std::vector<std::string> expected;
    for (const auto& id : info.claim_ids)
        if (std::find(skipped.begin(), skipped.end(), id) == skipped.end())
            expected.push_back(id);
    REQUIRE(claim_ids(rep) == expected);
}

}  // namespace

TEST_CASE("the catalog registers six scenarios with distinct names") {
    const auto& cat = scenarios::scenario_catalog();
    REQUIRE(cat.size() == 6);
    std::set<std::string> names;
    for (const auto& s : cat) {
        names.insert(s.name);
        CHECK_FALSE(s.summary.empty());
        CHECK_FALSE(s.defaults.empty());
        CHECK_FALSE(s.claim_ids.empty());
        REQUIRE(s.run != nullptr);
    }
    REQUIRE(names.size() == 6);
    REQUIRE_THROWS_AS(scenarios::find_scenario("no_such_scenario"), ConfigError);
    REQUIRE_THROWS_AS(scenarios::run_scenario("soft_coulomb_bound_states", {{"typo", "1"}}),
                      ConfigError);
}

TEST_CASE("soft_coulomb_bound_states passes at default parameters") {
    const Report rep = scenarios::run_scenario("soft_coulomb_bound_states");
    require_all_pass(rep);
    require_registered(rep);
    REQUIRE_FALSE(rep.seed.has_value());
    REQUIRE(claim(rep, "bound-count").measured >= 3.0);

    SECTION("reports are deterministic byte for byte") {
        const Report again = scenarios::run_scenario("soft_coulomb_bound_states");
        REQUIRE(rep.to_json_text() == again.to_json_text());
    }

    SECTION("the serialized report parses back with the committed schema") {
        const auto j = nlohmann::json::parse(rep.to_json_text());
        REQUIRE(j.at("schema_version").get<int>() == 1);
        REQUIRE(j.at("scenario").get<std::string>() == "soft_coulomb_bound_states");
        REQUIRE(j.at("seed").is_null());
        REQUIRE(j.at("all_pass").get<bool>());
        REQUIRE(j.at("params").size() ==
                scenarios::default_params("soft_coulomb_bound_states").size());
        REQUIRE(j.at("claims").size() == rep.claims.size());
        for (const auto& c : j.at("claims")) {
            REQUIRE(c.contains("id"));
            REQUIRE(c.contains("description"));
            REQUIRE(c.at("measured").is_number());
            REQUIRE(c.at("pass").is_boolean());
        }
    }

    SECTION("removing the attraction flips the bound-state claim honestly") {
        const Report off = scenarios::run_scenario("soft_coulomb_bound_states",
                                                   {{"kappa", "0"}, {"n", "256"}});
        REQUIRE_FALSE(off.all_pass());
        REQUIRE_FALSE(claim(off, "bound-count").pass);
        const auto ids = claim_ids(off);
        REQUIRE(std::find(ids.begin(), ids.end(), "fixture-match") == ids.end());
    }
}

TEST_CASE("yang_failure passes on a reduced grid") {
    const Report rep = scenarios::run_scenario("yang_failure",
                                               {{"n", "256"}, {"periodic_n", "128"}});
    require_all_pass(rep);
    require_registered(rep);
    REQUIRE(claim(rep, "yang-equals-free-kinetic").measured <= 1e-14);
}

TEST_CASE("hamiltonian_noninvariance passes at default parameters") {
    const Report rep = scenarios::run_scenario("hamiltonian_noninvariance");
    require_all_pass(rep);
    require_registered(rep);
    REQUIRE(rep.seed.has_value());
}

TEST_CASE("evolution_covariance passes on a reduced grid") {
    const Report rep = scenarios::run_scenario(
        "evolution_covariance",
        {{"nx", "16"}, {"ny", "16"}, {"dirac_n", "128"}, {"steps", "10"}});
    require_all_pass(rep);
    require_registered(rep, {"schrodinger-fixture", "dirac-fixture"});
    REQUIRE(claim(rep, "chi-zero-exact").measured == 0.0);
}

TEST_CASE("chen_invariance passes on a reduced grid") {
    const Report rep = scenarios::run_scenario("chen_invariance",
                                               {{"nx", "24"}, {"ny", "24"}, {"k", "4"}});
    require_all_pass(rep);
    require_registered(rep);
}

TEST_CASE("landau_gauge_pair passes on a reduced grid") {
    const Report rep = scenarios::run_scenario("landau_gauge_pair",
                                               {{"n", "16"}, {"length", "8"}});
    require_all_pass(rep);
    require_registered(rep, {"fixture-match"});
}
