#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "steering/density.hpp"
#include "steering/experiments.hpp"
#include "steering/verify.hpp"

using namespace steering;

namespace {

constexpr double kPi = 3.14159265358979323846;

Scenario one_bob_scenario(double theta_a, double theta_b, double lambda) {
    return Scenario(singlet(),
                    AliceConfig({direction_from_angles(theta_a, 0),
                                 direction_from_angles(theta_a + kPi / 2, 0)}),
                    {BobConfig({direction_from_angles(theta_b, 0),
                                direction_from_angles(theta_b + kPi / 2, 0)},
                               lambda)});
}

}  // namespace

TEST_CASE("singlet state") {
    const TwoQubitState psi = singlet();

    SUBCASE("anticorrelation along z, none across x-y") {
        CHECK(psi.correlator(Eigen::Vector3d::UnitZ(), Eigen::Vector3d::UnitZ()) ==
              doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(psi.correlator(Eigen::Vector3d::UnitX(), Eigen::Vector3d::UnitY()) ==
              doctest::Approx(0.0));
    }

    SUBCASE("correlator is -u.v for random axes") {
        RandomScenarioSource source(11);
        for (int t = 0; t < 200; ++t) {
            const Eigen::Vector3d u = source.random_direction().unit_vector();
            const Eigen::Vector3d v = source.random_direction().unit_vector();
            CHECK(std::abs(psi.correlator(u, v) + u.dot(v)) <= 1e-12);
        }
    }

    SUBCASE("both marginals are maximally mixed") {
        CHECK((psi.partial_trace_alice() - 0.5 * Eigen::Matrix2cd::Identity())
                  .cwiseAbs()
                  .maxCoeff() <= 1e-12);
        CHECK((psi.partial_trace_bob() - 0.5 * Eigen::Matrix2cd::Identity())
                  .cwiseAbs()
                  .maxCoeff() <= 1e-12);
    }
}

TEST_CASE("TwoQubitState validation") {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity() * 0.25;
    CHECK_NOTHROW(TwoQubitState{m});

    m(0, 1) = Complex(0.1, 0.2);  // not Hermitian
    CHECK_THROWS_AS(TwoQubitState{m}, std::runtime_error);

    m = Eigen::Matrix4cd::Identity() * 0.3;  // trace 1.2
    CHECK_THROWS_AS(TwoQubitState{m}, std::runtime_error);

    m = Eigen::Matrix4cd::Identity() * 0.25;
    m(0, 0) = 0.75;
    m(1, 1) = -0.25;  // negative eigenvalue
    CHECK_THROWS_AS(TwoQubitState{m}, std::runtime_error);
}

TEST_CASE("unsharp effects") {
    SUBCASE("sharp limit is the projector") {
        const Eigen::Matrix2cd e = effect(direction_from_angles(0, 0), 1.0, +1).matrix();
        Eigen::Matrix2cd expected = Eigen::Matrix2cd::Zero();
        expected(0, 0) = 1.0;
        CHECK((e - expected).cwiseAbs().maxCoeff() <= 1e-15);
    }
    SUBCASE("direct substitution at lambda = 0.5") {
        const Eigen::Matrix2cd e = effect(direction_from_angles(0, 0), 0.5, +1).matrix();
        CHECK(e(0, 0).real() == doctest::Approx(0.75).epsilon(1e-15));
        CHECK(e(1, 1).real() == doctest::Approx(0.25).epsilon(1e-15));
        CHECK(std::abs(e(0, 1)) <= 1e-15);
    }
    SUBCASE("eigenvalues are (1 +- lambda)/2") {
        const Eigen::Matrix2cd e = effect(direction_from_angles(1.1, 0.3), 0.74, -1).matrix();
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(e, Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues()(0) == doctest::Approx(0.13).epsilon(1e-12));
        CHECK(es.eigenvalues()(1) == doctest::Approx(0.87).epsilon(1e-12));
    }
    SUBCASE("the two effects of a setting sum to the identity") {
        RandomScenarioSource source(17);
        for (int t = 0; t < 100; ++t) {
            const Direction d = source.random_direction();
            const double lambda = source.random_lambda();
            const Eigen::Matrix2cd sum =
                effect(d, lambda, +1).matrix() + effect(d, lambda, -1).matrix();
            CHECK((sum - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() <= 1e-12);
        }
    }
    SUBCASE("range errors") {
        CHECK_THROWS_AS(effect(direction_from_angles(0, 0), 0.0, +1), std::invalid_argument);
        CHECK_THROWS_AS(effect(direction_from_angles(0, 0), 1.1, +1), std::invalid_argument);
        CHECK_THROWS_AS(effect(direction_from_angles(0, 0), 0.5, 2), std::invalid_argument);
    }
}

TEST_CASE("joint_distribution") {
    SUBCASE("sharp aligned measurements anticorrelate perfectly") {
        Scenario scenario(singlet(),
                          AliceConfig({direction_from_angles(0, 0),
                                       direction_from_angles(kPi / 2, 0)}),
                          {BobConfig({direction_from_angles(0, 0),
                                      direction_from_angles(kPi / 2, 0)},
                                     1.0)});
        const OutcomeDistribution dist = joint_distribution(scenario, 0, {0});
        CHECK(dist.probability({+1, -1}) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(dist.probability({+1, +1}) == doctest::Approx(0.0));
        CHECK(dist.probability({-1, +1}) == doctest::Approx(0.5).epsilon(1e-12));
    }

    SUBCASE("nearly trivial first measurement leaves a fresh singlet for Bob 2") {
        Scenario scenario(singlet(),
                          AliceConfig({direction_from_angles(kPi / 2, 0),
                                       direction_from_angles(0, 0)}),
                          {BobConfig({direction_from_angles(kPi / 3, 0.7),
                                      direction_from_angles(2.2, 0.1)},
                                     1e-8),
                           BobConfig({direction_from_angles(0.9, 0.2),
                                      direction_from_angles(1.9, 5.0)},
                                     0.83)});
        const OutcomeDistribution marg =
            marginal(joint_distribution(scenario, 0, {0, 0}), {0, 2});
        const Eigen::Vector3d x = scenario.alice().settings()[0].unit_vector();
        const Eigen::Vector3d y2 = scenario.bob(2).settings()[0].unit_vector();
        for (int a : {-1, +1})
            for (int b : {-1, +1}) {
                const double fresh = (1.0 - a * b * 0.83 * y2.dot(x)) / 4.0;
                CHECK(std::abs(marg.probability({a, b}) - fresh) <= 1e-7);
            }
    }

    SUBCASE("hand-evaluated two-Bob marginal at lambda1 = 0.8") {
        // x = z-axis, y1 = x-axis, y2 = z-axis: p(a, b2) = (1 - 0.6 a b2)/4
        Scenario scenario(singlet(),
                          AliceConfig({direction_from_angles(0, 0),
                                       direction_from_angles(kPi / 2, 0)}),
                          {BobConfig({direction_from_angles(kPi / 2, 0),
                                      direction_from_angles(0, 0)},
                                     0.8),
                           BobConfig({direction_from_angles(0, 0),
                                      direction_from_angles(kPi / 2, 0)},
                                     1.0)});
        const OutcomeDistribution marg =
            marginal(joint_distribution(scenario, 0, {0, 0}), {0, 2});
        CHECK(std::abs(marg.probability({+1, +1}) - 0.1) <= 1e-12);
        CHECK(std::abs(marg.probability({+1, -1}) - 0.4) <= 1e-12);
        CHECK(std::abs(marg.probability({-1, +1}) - 0.4) <= 1e-12);
        CHECK(std::abs(marg.probability({-1, -1}) - 0.1) <= 1e-12);
    }

    SUBCASE("normalization and nonnegativity on random chains") {
        RandomScenarioSource source(23);
        for (int t = 0; t < 40; ++t) {
            const Scenario scenario = source.random_scenario();
            std::vector<int> choices(scenario.chain_length(), 0);
            const OutcomeDistribution dist = joint_distribution(scenario, 0, choices);
            double sum = 0.0;
            for (std::size_t i = 0; i < dist.size(); ++i) {
                CHECK(dist.probability_at(i) >= -1e-12);
                sum += dist.probability_at(i);
            }
            CHECK(std::abs(sum - 1.0) <= 1e-10);
        }
    }

    SUBCASE("index validation") {
        Scenario scenario = one_bob_scenario(0.3, 0.9, 0.7);
        CHECK_THROWS_AS(joint_distribution(scenario, 2, {0}), std::invalid_argument);
        CHECK_THROWS_AS(joint_distribution(scenario, 0, {3}), std::invalid_argument);
        CHECK_THROWS_AS(joint_distribution(scenario, 0, {0, 0}), std::invalid_argument);
    }
}

TEST_CASE("closed-form two-Bob marginal reproduced to 1e-12") {
    CHECK(eq11_max_deviation(300, 31) <= 1e-12);
}

TEST_CASE("perturbed effect model breaks the closed-form check") {
    const double deviation =
        eq11_max_deviation(50, 31, [](const Direction& d, double lambda, int outcome) {
            return effect(d, lambda * lambda, outcome);  // deliberate mutation
        });
    CHECK(deviation > 1e-3);
}

TEST_CASE("marginals") {
    Scenario scenario(singlet(),
                      AliceConfig({direction_from_angles(kPi / 2, 0),
                                   direction_from_angles(0, 0)}),
                      {BobConfig({direction_from_angles(kPi / 4, 0),
                                  direction_from_angles(3 * kPi / 4, 0)},
                                 0.9),
                       BobConfig({direction_from_angles(kPi / 4, 0),
                                  direction_from_angles(3 * kPi / 4, 0)},
                                 1.0)});

    SUBCASE("marginal over Alice does not depend on her setting") {
        for (int y1 : {0, 1})
            for (int y2 : {0, 1}) {
                const OutcomeDistribution a0 =
                    marginal(joint_distribution(scenario, 0, {y1, y2}), {1, 2});
                const OutcomeDistribution a1 =
                    marginal(joint_distribution(scenario, 1, {y1, y2}), {1, 2});
                for (std::size_t i = 0; i < a0.size(); ++i)
                    CHECK(std::abs(a0.probability_at(i) - a1.probability_at(i)) <= 1e-10);
            }
    }

    SUBCASE("marginal over the last Bob does not depend on his setting") {
        for (int x : {0, 1})
            for (int y1 : {0, 1}) {
                const OutcomeDistribution b0 =
                    marginal(joint_distribution(scenario, x, {y1, 0}), {0, 1});
                const OutcomeDistribution b1 =
                    marginal(joint_distribution(scenario, x, {y1, 1}), {0, 1});
                for (std::size_t i = 0; i < b0.size(); ++i)
                    CHECK(std::abs(b0.probability_at(i) - b1.probability_at(i)) <= 1e-10);
            }
    }

    SUBCASE("marginal over the first Bob depends on his setting somewhere") {
        double witness = 0.0;
        RandomScenarioSource source(41);
        for (int t = 0; t < 20 && witness <= 0.01; ++t) {
            const Scenario random = source.random_scenario(2, 2);
            for (int x : {0, 1})
                for (int y2 : {0, 1}) {
                    const OutcomeDistribution m0 =
                        marginal(joint_distribution(random, x, {0, y2}), {0, 2});
                    const OutcomeDistribution m1 =
                        marginal(joint_distribution(random, x, {1, y2}), {0, 2});
                    for (std::size_t i = 0; i < m0.size(); ++i)
                        witness = std::max(
                            witness, std::abs(m0.probability_at(i) - m1.probability_at(i)));
                }
        }
        CHECK(witness > 0.01);
    }

    SUBCASE("validation") {
        const OutcomeDistribution dist = joint_distribution(scenario, 0, {0, 0});
        CHECK_THROWS_AS(marginal(dist, {}), std::invalid_argument);
        CHECK_THROWS_AS(marginal(dist, {3}), std::invalid_argument);
        CHECK_THROWS_AS(marginal(dist, {1, 1}), std::invalid_argument);
    }
}

TEST_CASE("signalling_report") {
    Scenario scenario(singlet(),
                      AliceConfig({direction_from_angles(kPi / 2, 0),
                                   direction_from_angles(0, 0)}),
                      {BobConfig({direction_from_angles(kPi / 4, 0),
                                  direction_from_angles(3 * kPi / 4, 0)},
                                 0.9),
                       BobConfig({direction_from_angles(kPi / 4, 0),
                                  direction_from_angles(3 * kPi / 4, 0)},
                                 1.0)});
    const SignallingReport report = signalling_report(scenario);
    CHECK(report.alice_marginal_max_deviation <= 1e-10);
    CHECK(report.last_bob_max_deviation <= 1e-10);
    CHECK(report.earlier_bob_witness > 0.0);

    CHECK_THROWS_AS(signalling_report(one_bob_scenario(0.2, 0.8, 0.9)), std::invalid_argument);
}

TEST_CASE("instrument completeness on random states") {
    RandomScenarioSource source(53);
    for (int t = 0; t < 100; ++t) {
        const TwoQubitState rho = source.random_state();
        const Direction dir = source.random_direction();
        const double lambda = source.random_lambda();
        Eigen::Matrix4cd total = Eigen::Matrix4cd::Zero();
        for (int outcome : {-1, +1}) {
            const Eigen::Matrix4cd k = on_bob(effect(dir, lambda, outcome).sqrt());
            total += k * rho.matrix() * k;
        }
        CHECK(std::abs(total.trace().real() - 1.0) <= 1e-12);
    }
}

TEST_CASE("distribution CSV uses 17 significant digits and fixed row order") {
    Scenario scenario = one_bob_scenario(0.0, kPi / 2, 0.9);
    const OutcomeDistribution dist = joint_distribution(scenario, 0, {0});
    const std::string csv = dist.to_csv();
    CHECK(csv.substr(0, 17) == "a,b1,probability\n");
    // rows in lexicographic order, -1 before +1
    double parsed[4];
    const int matched =
        std::sscanf(csv.c_str(), "a,b1,probability\n-1,-1,%lf\n-1,1,%lf\n1,-1,%lf\n1,1,%lf",
                    &parsed[0], &parsed[1], &parsed[2], &parsed[3]);
    CHECK(matched == 4);
    for (int i = 0; i < 4; ++i) CHECK(parsed[i] == dist.probability_at(i));
    CHECK(parsed[0] + parsed[1] + parsed[2] + parsed[3] == doctest::Approx(1.0).epsilon(1e-12));
}
