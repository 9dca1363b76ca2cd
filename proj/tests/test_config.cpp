#include <doctest.h>

#include <stdexcept>

#include "bernwf/config_io.hpp"

using namespace bernwf;
using nlohmann::json;

namespace {

json full_config() {
    return json::parse(R"({
        "lambda0": 1.0,
        "lambda_atoms": [[0.4, 0.5]],
        "mu_atoms": [[0.25, 0.15], [-0.3, 0.1]],
        "nu_atoms": [[0.35, 0.2]],
        "theta_a": 0.4,
        "theta_A": 0.6,
        "selection": { "kappa": 3, "beta": [0.3, 0.2],
                       "p": [[0.0, 0.7, 1.0], [0.0, 0.4, 0.8, 1.0]] }
    })");
}

}  // namespace

TEST_CASE("loads a full model") {
    ModelParams p = model_from_json(full_config());
    CHECK(p.lambda0 == 1.0);
    REQUIRE(p.lambda_tail.atoms().size() == 1);
    CHECK(p.lambda_tail.atoms()[0].location == 0.4);
    CHECK(p.mu.atoms().size() == 2);
    CHECK(p.nu.mass() == doctest::Approx(0.2));
    CHECK(p.theta_a == 0.4);
    CHECK(p.sel.kappa == 3);
    CHECK(p.sel.p_at(3, 2) == 0.8);
}

TEST_CASE("round trip through json") {
    ModelParams p = model_from_json(full_config());
    json dumped = model_to_json(p);
    ModelParams q = model_from_json(dumped);
    CHECK(model_to_json(q) == dumped);
    CHECK(config_hash(dumped) == config_hash(model_to_json(q)));
    CHECK(config_hash(dumped).size() == 16);
}

TEST_CASE("unknown keys are hard errors with the key path") {
    json j = full_config();
    j["lambda_0"] = 2.0;
    CHECK_THROWS_WITH_AS(model_from_json(j), doctest::Contains("lambda_0"),
                         std::invalid_argument);

    json sel = full_config();
    sel["selection"]["betas"] = json::array();
    CHECK_THROWS_WITH_AS(model_from_json(sel), doctest::Contains("/selection/betas"),
                         std::invalid_argument);
}

TEST_CASE("support violations carry the measure path") {
    json j = full_config();
    j["mu_atoms"] = {{0.0, 1.0}};
    CHECK_THROWS_WITH_AS(model_from_json(j), doctest::Contains("/mu_atoms"),
                         std::invalid_argument);

    json k = full_config();
    k["lambda_atoms"] = {{1.5, 1.0}};
    CHECK_THROWS_AS(model_from_json(k), std::invalid_argument);
}

TEST_CASE("selection invariants are enforced at load") {
    json j = full_config();
    j["selection"]["p"][0][0] = 0.2;
    CHECK_THROWS_WITH_AS(model_from_json(j), doctest::Contains("p_0"), std::invalid_argument);
}

TEST_CASE("defaults: a bare lambda0 model") {
    ModelParams p = model_from_json(json::parse(R"({"lambda0": 2.5})"));
    CHECK(p.lambda0 == 2.5);
    CHECK(p.lambda_tail.empty());
    CHECK_FALSE(p.has_mutations());
    CHECK(p.sel.beta_total() == 0.0);
}
