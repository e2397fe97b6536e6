#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "steering/correlation.hpp"
#include "steering/experiments.hpp"
#include "steering/verify.hpp"

using namespace steering;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Averaged two-Bob correlation written out longhand: for each first-Bob
// setting, -lambda2 [ F1 (y2.x) + (1-F1)(y1.x)(y2.y1) ], weighted by the
// setting probabilities. Independent check for the matrix recursion.
double averaged_second_bob_correlation(const Scenario& scenario, int j, int k) {
    const double lambda1 = scenario.bob(1).sharpness();
    const double lambda2 = scenario.bob(2).sharpness();
    const double f1 = std::sqrt(1.0 - lambda1 * lambda1);
    const Eigen::Vector3d x = scenario.alice().settings()[j].unit_vector();
    const Eigen::Vector3d y2 = scenario.bob(2).settings()[k].unit_vector();
    double sum = 0.0;
    for (int i = 0; i < scenario.setting_count(); ++i) {
        const Eigen::Vector3d y1 = scenario.bob(1).settings()[i].unit_vector();
        sum += scenario.setting_weights()[0][i] *
               (-lambda2) * (f1 * y2.dot(x) + (1.0 - f1) * y1.dot(x) * y2.dot(y1));
    }
    return sum;
}

}  // namespace

TEST_CASE("bloch correlation matrix") {
    SUBCASE("singlet gives exactly -I") {
        const CorrelationMatrixState T = bloch_correlation_matrix(singlet());
        CHECK((T + Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("matches the trace formula and stays contractive on random states") {
        RandomScenarioSource source(3);
        for (int t = 0; t < 50; ++t) {
            const TwoQubitState rho = source.random_state();
            const CorrelationMatrixState T = bloch_correlation_matrix(rho);
            for (int u = 0; u < 3; ++u)
                for (int v = 0; v < 3; ++v) {
                    Eigen::Vector3d eu = Eigen::Vector3d::Zero(), ev = Eigen::Vector3d::Zero();
                    eu(u) = 1;
                    ev(v) = 1;
                    CHECK(std::abs(T(u, v) - rho.correlator(eu, ev)) <= 1e-12);
                }
            CHECK(T.jacobiSvd().singularValues()(0) <= 1.0 + 1e-9);
        }
    }
}

TEST_CASE("decohere_average") {
    const CorrelationMatrixState minus_identity = -Eigen::Matrix3d::Identity();

    SUBCASE("vanishing sharpness leaves T untouched") {
        const BobConfig bob({direction_from_angles(0.7, 0.3), direction_from_angles(1.9, 4.0)},
                            1e-12);
        const CorrelationMatrixState after =
            decohere_average(minus_identity, bob, {0.5, 0.5});
        CHECK((after - minus_identity).cwiseAbs().maxCoeff() <= 1e-15);
    }

    SUBCASE("sharp single direction keeps only the measured axis") {
        const BobConfig bob({direction_from_angles(0, 0), direction_from_angles(0, 0)}, 1.0);
        const CorrelationMatrixState after =
            decohere_average(minus_identity, bob, {0.5, 0.5});
        Eigen::Matrix3d expected = Eigen::Matrix3d::Zero();
        expected(2, 2) = -1.0;
        CHECK((after - expected).cwiseAbs().maxCoeff() <= 1e-15);
    }

    SUBCASE("two x-z plane directions at lambda = 0.74 match the longhand average") {
        Scenario scenario = two_setting_scenario({0.74, 1.0});
        const CorrelationTable table = correlation_table(scenario, 2);
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                CHECK(std::abs(table.entries(j, k) -
                               averaged_second_bob_correlation(scenario, j, k)) <= 1e-13);
        // and the brute-force engine agrees
        const CorrelationTable oracle = oracle_correlation_table(scenario, 2);
        CHECK((table.entries - oracle.entries).cwiseAbs().maxCoeff() <= 1e-10);
    }

    SUBCASE("linearity in T") {
        RandomScenarioSource source(7);
        for (int t = 0; t < 50; ++t) {
            const Scenario scenario = source.random_scenario(2, 1);
            const BobConfig& bob = scenario.bob(1);
            Eigen::Matrix3d t1, t2;
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c) {
                    t1(r, c) = 2.0 * source.uniform() - 1.0;
                    t2(r, c) = 2.0 * source.uniform() - 1.0;
                }
            const double alpha = 2.0 * source.uniform() - 1.0;
            const double beta = 2.0 * source.uniform() - 1.0;
            const CorrelationMatrixState combined =
                decohere_average(alpha * t1 + beta * t2, bob, {0.5, 0.5});
            const CorrelationMatrixState split =
                alpha * decohere_average(t1, bob, {0.5, 0.5}) +
                beta * decohere_average(t2, bob, {0.5, 0.5});
            CHECK((combined - split).cwiseAbs().maxCoeff() <= 1e-12);
        }
    }

    SUBCASE("largest singular value never grows") {
        RandomScenarioSource source(9);
        for (int t = 0; t < 40; ++t) {
            const Scenario scenario = source.random_scenario();
            CorrelationMatrixState T = bloch_correlation_matrix(scenario.state());
            double previous = T.jacobiSvd().singularValues()(0);
            for (int m = 1; m <= scenario.chain_length(); ++m) {
                T = decohere_average(T, scenario.bob(m), scenario.setting_weights()[m - 1]);
                const double current = T.jacobiSvd().singularValues()(0);
                CHECK(current <= previous + 1e-12);
                previous = current;
            }
        }
    }

    SUBCASE("weight mismatch rejected") {
        const BobConfig bob({direction_from_angles(0.7, 0.3), direction_from_angles(1.9, 4.0)},
                            0.8);
        CHECK_THROWS_AS(decohere_average(minus_identity, bob, {1.0}), std::invalid_argument);
    }
}

TEST_CASE("correlation_table") {
    SUBCASE("single sharp aligned Bob reproduces the raw correlator") {
        Scenario scenario(singlet(),
                          AliceConfig({direction_from_angles(0, 0),
                                       direction_from_angles(kPi / 2, 0)}),
                          {BobConfig({direction_from_angles(0, 0),
                                      direction_from_angles(kPi / 2, 0)},
                                     1.0)});
        const CorrelationTable table = correlation_table(scenario, 1);
        CHECK(table.entries(0, 0) == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(table.entries(0, 1) == doctest::Approx(0.0));  // orthogonal pair
        CHECK(table.entries(1, 0) == doctest::Approx(0.0));
    }

    SUBCASE("first-Bob table is -lambda1 x.y") {
        RandomScenarioSource source(13);
        for (int t = 0; t < 50; ++t) {
            const Scenario scenario = source.random_scenario(2, 1);
            const CorrelationTable table = correlation_table(scenario, 1);
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k) {
                    const double expected =
                        -scenario.bob(1).sharpness() *
                        scenario.alice().settings()[j].unit_vector().dot(
                            scenario.bob(1).settings()[k].unit_vector());
                    CHECK(std::abs(table.entries(j, k) - expected) <= 1e-13);
                }
        }
    }

    SUBCASE("index validation") {
        Scenario scenario = two_setting_scenario({0.9});
        CHECK_THROWS_AS(correlation_table(scenario, 0), std::invalid_argument);
        CHECK_THROWS_AS(correlation_table(scenario, 2), std::invalid_argument);
    }
}

TEST_CASE("conditioned table exposes the pre-average correlation") {
    Scenario scenario = two_setting_scenario({0.74, 1.0});
    const double f1 = std::sqrt(1.0 - 0.74 * 0.74);
    for (int i = 0; i < 2; ++i) {
        const CorrelationTable table = correlation_table_conditioned(scenario, 2, {i});
        const Eigen::Vector3d y1 = scenario.bob(1).settings()[i].unit_vector();
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) {
                const Eigen::Vector3d x = scenario.alice().settings()[j].unit_vector();
                const Eigen::Vector3d y2 = scenario.bob(2).settings()[k].unit_vector();
                const double expected =
                    -(f1 * y2.dot(x) + (1.0 - f1) * y1.dot(x) * y2.dot(y1));
                CHECK(std::abs(table.entries(j, k) - expected) <= 1e-13);
            }
    }
    // averaging the conditioned tables reproduces the unconditioned one
    const CorrelationTable averaged = correlation_table(scenario, 2);
    const CorrelationTable c0 = correlation_table_conditioned(scenario, 2, {0});
    const CorrelationTable c1 = correlation_table_conditioned(scenario, 2, {1});
    CHECK((averaged.entries - 0.5 * (c0.entries + c1.entries)).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("analytic tables match the brute-force engine on random scenarios") {
    RandomScenarioSource source(19);
    double worst = 0.0;
    for (int t = 0; t < 60; ++t) {
        const Scenario scenario = source.random_scenario();
        for (int m = 1; m <= scenario.chain_length(); ++m) {
            const CorrelationTable analytic = correlation_table(scenario, m);
            const CorrelationTable oracle = oracle_correlation_table(scenario, m);
            worst = std::max(worst, (analytic.entries - oracle.entries).cwiseAbs().maxCoeff());
            CHECK(analytic.entries.cwiseAbs().maxCoeff() <= 1.0 + 1e-9);
        }
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("attenuation along the canonical chain is monotone in earlier sharpness") {
    // Measured axes coincide with the decoherence eigenaxes here, so every
    // entry's magnitude shrinks as an earlier Bob measures more sharply.
    double previous = 1.0;
    for (double lambda1 : {0.2, 0.5, 0.8, 0.99}) {
        Scenario scenario = two_setting_scenario({lambda1, 1.0});
        const double entry = std::abs(correlation_table(scenario, 2).entries(0, 0));
        CHECK(entry <= previous + 1e-12);
        previous = entry;
    }
    double previous_f = 2.0;
    for (double lambda1 : {0.2, 0.5, 0.8, 0.99}) {
        Scenario scenario = three_setting_scenario({lambda1, 1.0});
        const double entry = std::abs(correlation_table(scenario, 2).entries(1, 1));
        CHECK(entry <= previous_f + 1e-12);
        previous_f = entry;
    }
}

TEST_CASE("a sharp first Bob destroys the transverse correlations") {
    // identical sharp settings: Bob 2 works on the fully decohered T
    const RunReport report = run_scenario(two_setting_scenario({1.0, 1.0}));
    CHECK(report.cffw_values[1].value < report.cffw_values[0].value);
    CHECK(report.cffw_values[0].value == doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(report.cffw_values[1].value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(!report.cffw_values[1].violated);
}

TEST_CASE("table CSV round-trips through parsing") {
    Scenario scenario = two_setting_scenario({0.74, 1.0});
    const CorrelationTable table = correlation_table(scenario, 2);
    const std::string csv = table.to_csv();
    double values[4];
    CHECK(std::sscanf(csv.c_str(), "%lf,%lf\n%lf,%lf", &values[0], &values[1], &values[2],
                      &values[3]) == 4);
    CHECK(values[0] == table.entries(0, 0));
    CHECK(values[3] == table.entries(1, 1));
}
