#include <cmath>

#include <doctest.h>

#include "steering/config.hpp"
#include "steering/experiments.hpp"
#include "steering/verify.hpp"

using namespace steering;

namespace {

const char* kTwoBobConfig = R"({
  "state": "singlet",
  "alice": { "settings": [[1.5707963267948966, 0.0], [0.0, 0.0]] },
  "bobs": [
    { "settings": [[0.7853981633974483, 0.0], [2.356194490192345, 0.0]], "lambda": 0.74 },
    { "settings": [[0.7853981633974483, 0.0], [2.356194490192345, 0.0]], "lambda": 1.0 }
  ]
})";

}  // namespace

TEST_CASE("scenario parsing") {
    const Scenario scenario = parse_scenario(kTwoBobConfig);
    CHECK(scenario.setting_count() == 2);
    CHECK(scenario.chain_length() == 2);
    CHECK(scenario.bob(1).sharpness() == 0.74);
    CHECK(scenario.setting_weights()[0][0] == 0.5);
    const RunReport report = run_scenario(scenario);
    CHECK(std::abs(report.cffw_values[0].value - 2.10) <= 0.01);
}

TEST_CASE("scenario round-trips through serialization") {
    RandomScenarioSource source(83);
    for (int t = 0; t < 20; ++t) {
        const Scenario scenario = source.random_scenario();
        const Scenario replayed = parse_scenario(serialize_scenario(scenario));
        REQUIRE(replayed.chain_length() == scenario.chain_length());
        REQUIRE(replayed.setting_count() == scenario.setting_count());
        for (int m = 1; m <= scenario.chain_length(); ++m) {
            CHECK(replayed.bob(m).sharpness() == scenario.bob(m).sharpness());
            for (int i = 0; i < scenario.setting_count(); ++i) {
                CHECK(replayed.bob(m).settings()[i].theta() ==
                      scenario.bob(m).settings()[i].theta());
                CHECK(replayed.bob(m).settings()[i].phi() ==
                      scenario.bob(m).settings()[i].phi());
            }
        }
        // analytic tables agree bit for bit after the round trip
        for (int m = 1; m <= scenario.chain_length(); ++m)
            CHECK((correlation_table(replayed, m).entries -
                   correlation_table(scenario, m).entries)
                      .cwiseAbs()
                      .maxCoeff() == 0.0);
    }
}

TEST_CASE("explicit density matrices parse and validate") {
    // singlet written out as 16 (re, im) pairs
    std::string config = R"({"state": [)";
    const Eigen::Matrix4cd rho = singlet().matrix();
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            config += "[" + std::to_string(rho(r, c).real()) + "," +
                      std::to_string(rho(r, c).imag()) + "]";
            if (r != 3 || c != 3) config += ",";
        }
    config += R"(],
      "alice": { "settings": [[1.5707963267948966, 0.0], [0.0, 0.0]] },
      "bobs": [ { "settings": [[0.7853981633974483, 0.0], [2.356194490192345, 0.0]], "lambda": 1.0 } ]
    })";
    const Scenario scenario = parse_scenario(config);
    CHECK(std::abs(run_scenario(scenario).cffw_values[0].value - 2.0 * std::sqrt(2.0)) <= 1e-5);

    // non-physical matrix named in the error
    std::string bad = config;
    const std::size_t pos = bad.find("[0.5");
    REQUIRE(pos != std::string::npos);
    bad.replace(pos, 4, "[0.9");
    CHECK_THROWS_AS(parse_scenario(bad), ConfigError);
}

TEST_CASE("malformed configs raise ConfigError with context") {
    CHECK_THROWS_WITH_AS(parse_scenario("{"), doctest::Contains("parse error"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_scenario(R"({"state": "singlet"})"),
                         doctest::Contains("alice"), ConfigError);
    CHECK_THROWS_WITH_AS(
        parse_scenario(
            R"({"state": "singlet", "alice": {"settings": [[0,0],[1.5707963267948966,0]]}, "bobs": []})"),
        doctest::Contains("bobs"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_scenario(R"({"state": "bell", "alice": {"settings": [[0,0]]}})"),
                         doctest::Contains("state"), ConfigError);
}

TEST_CASE("problem parsing carries objective, constraints, freedom and budget") {
    std::string config = R"({
      "scenario": )" + std::string(kTwoBobConfig) +
                         R"(,
      "objective": { "kind": "cffw", "bob": 2 },
      "constraints": [ { "bob": 1, "value": 2.10 } ],
      "free": { "alice": false,
                "bobs": [ { "angles": true, "lambda": true },
                          { "angles": true, "lambda": false } ] },
      "budget": { "restarts": 5, "iterations": 120 },
      "seed": 77
    })";
    const ProblemConfig parsed = parse_problem(config);
    CHECK(parsed.problem.objective.kind == InequalityKind::Cffw);
    CHECK(parsed.problem.objective.bob_index == 2);
    REQUIRE(parsed.problem.constraints.size() == 1);
    CHECK(parsed.problem.constraints[0].target == 2.10);
    CHECK(parsed.problem.constraints[0].kind == InequalityKind::Cffw);
    CHECK(!parsed.problem.free_bobs[1].lambda);
    CHECK(parsed.budget.restarts == 5);
    CHECK(parsed.budget.iterations == 120);
    CHECK(parsed.seed == 77);

    const OptimizationResult result = maximize(parsed.problem, parsed.budget, parsed.seed);
    CHECK(result.argmax.has_value());
    const std::string serialized = serialize_result(result);
    CHECK(serialized.find("best_value") != std::string::npos);
    CHECK(serialized.find("argmax") != std::string::npos);
}

TEST_CASE("weights survive serialization") {
    Scenario biased(singlet(),
                    AliceConfig({direction_from_angles(1.5707963267948966, 0),
                                 direction_from_angles(0, 0)}),
                    {BobConfig({direction_from_angles(0.5, 0.25),
                                direction_from_angles(2.0, 1.0)},
                               0.8)},
                    {{0.25, 0.75}});
    const Scenario replayed = parse_scenario(serialize_scenario(biased));
    CHECK(replayed.setting_weights()[0][0] == 0.25);
    CHECK(replayed.setting_weights()[0][1] == 0.75);
}
