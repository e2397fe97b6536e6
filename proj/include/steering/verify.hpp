#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "steering/correlation.hpp"
#include "steering/density.hpp"

namespace steering {

/// Deterministic scenario generator for property checks. Alice's frame is a
/// random rotation, Bob directions are uniform on the sphere, sharpness
/// uniform in (0, 1].
class RandomScenarioSource {
  public:
    explicit RandomScenarioSource(std::uint64_t seed) : rng_(seed) {}

    double uniform();
    double random_lambda();
    Direction random_direction();
    Eigen::Matrix3d random_rotation();
    TwoQubitState random_state();  // Ginibre-style random density matrix
    Scenario random_scenario(int settings, int chain);
    Scenario random_scenario();  // settings in {2,3}, chain in 1..4

  private:
    std::mt19937_64 rng_;
};

/// Closed form for the Alice/Bob^2 marginal of a two-Bob chain on the
/// singlet; the brute-force engine must reproduce it exactly.
double two_bob_marginal_closed_form(int a, int b2, const Eigen::Vector3d& x,
                                    const Eigen::Vector3d& y1, const Eigen::Vector3d& y2,
                                    double lambda1, double lambda2);

/// Max deviation between the closed form above and the density-engine
/// marginal over random draws. The effect builder is a hook so tests can
/// check the comparison has teeth.
double eq11_max_deviation(int trials, std::uint64_t seed, const EffectBuilder& effects);
double eq11_max_deviation(int trials, std::uint64_t seed);

/// Brute-force counterpart of correlation_table: joint distributions from the
/// density engine, averaged over the earlier Bobs' setting choices.
CorrelationTable oracle_correlation_table(const Scenario& scenario, int bob_index);

struct PropertyCheck {
    std::string name;
    double statistic = 0.0;  // max deviation, or witness magnitude
    double threshold = 0.0;
    bool exceed = false;  // pass when statistic > threshold instead of <=
    bool pass = false;
    std::string note;
};

struct VerifyReport {
    std::vector<PropertyCheck> checks;
    bool ok() const;
    std::string to_text() const;
};

/// Cross-engine property suite: closed-form exactness, analytic-vs-oracle
/// equivalence (at the given tolerance), the no-signalling equalities and the
/// sequential signalling witness, instrument completeness, the averaged
/// channel identity, contractivity, homogeneity in the final sharpness, and
/// optimizer determinism under a fixed seed.
VerifyReport run_verification(double tolerance, int trials, std::uint64_t seed);

}  // namespace steering
