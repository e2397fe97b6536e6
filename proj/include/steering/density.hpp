#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "steering/direction.hpp"
#include "steering/scenario.hpp"
#include "steering/state.hpp"

namespace steering {

/// Validated 2x2 effect operator (eigenvalues in [0, 1]).
class QubitEffect {
  public:
    explicit QubitEffect(const Eigen::Matrix2cd& matrix);

    const Eigen::Matrix2cd& matrix() const { return m_; }
    Eigen::Matrix2cd sqrt() const;  // positive square root

  private:
    Eigen::Matrix2cd m_;
};

/// E^lambda_outcome = lambda P_outcome + (1 - lambda) I/2, with P_outcome the
/// projector onto the outcome eigenspace of direction.sigma. outcome is +1 or -1.
QubitEffect effect(const Direction& direction, double lambda, int outcome);

using EffectBuilder = std::function<QubitEffect(const Direction&, double, int)>;

/// Exact joint distribution over outcome tuples (Alice, Bob^1, ..., Bob^n),
/// outcomes in {-1, +1}. Entries are stored in lexicographic tuple order with
/// -1 before +1, so tables are comparable bit for bit.
class OutcomeDistribution {
  public:
    OutcomeDistribution(std::vector<std::string> observers, std::vector<double> probabilities);

    const std::vector<std::string>& observers() const { return observers_; }
    int observer_count() const { return static_cast<int>(observers_.size()); }
    std::size_t size() const { return probabilities_.size(); }

    double probability(const std::vector<int>& outcomes) const;
    double probability_at(std::size_t index) const { return probabilities_[index]; }
    std::vector<int> outcomes_at(std::size_t index) const;

    /// E[prod of listed observers' outcomes].
    double correlator(const std::vector<int>& observer_indices) const;

    /// CSV with one outcome column per observer plus the probability,
    /// 17 significant digits.
    std::string to_csv() const;

  private:
    std::vector<std::string> observers_;
    std::vector<double> probabilities_;
};

/// Measures Alice projectively along her chosen setting and runs the Bobs'
/// square-root (Lueders) instruments in chain order. One setting index per Bob.
OutcomeDistribution joint_distribution(const Scenario& scenario, int alice_choice,
                                       const std::vector<int>& bob_choices);

/// Same, with a pluggable effect constructor (test hook for perturbed models).
OutcomeDistribution joint_distribution(const Scenario& scenario, int alice_choice,
                                       const std::vector<int>& bob_choices,
                                       const EffectBuilder& effects);

/// Sums out every observer not listed in keep (indices into the observer list).
OutcomeDistribution marginal(const OutcomeDistribution& dist, const std::vector<int>& keep);

/// Signalling structure of a chain with at least two Bobs:
///   - marginals over Alice never depend on Alice's setting,
///   - marginals over the last Bob never depend on his setting,
///   - marginals over an earlier Bob generally do depend on his setting.
struct SignallingReport {
    double alice_marginal_max_deviation = 0.0;  // expected ~0
    double last_bob_max_deviation = 0.0;        // expected ~0
    double earlier_bob_witness = 0.0;           // expected > 0 for generic settings
};

SignallingReport signalling_report(const Scenario& scenario);

}  // namespace steering
