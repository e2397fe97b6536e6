#include "steering/density.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "steering/pauli.hpp"

namespace steering {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kEffectEigenTol = 1e-12;
constexpr double kDistributionSumTol = 1e-10;
constexpr double kNegativeProbabilityTol = -1e-12;

std::string format_probability(double p) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", p);
    return buf;
}

}  // namespace

QubitEffect::QubitEffect(const Eigen::Matrix2cd& matrix) : m_(matrix) {
    if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol)
        throw std::runtime_error("QubitEffect: matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(m_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kEffectEigenTol ||
        es.eigenvalues().maxCoeff() > 1.0 + kEffectEigenTol)
        throw std::runtime_error("QubitEffect: eigenvalues not in [0, 1]");
}

Eigen::Matrix2cd QubitEffect::sqrt() const {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(m_);
    const Eigen::Vector2d clipped = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * clipped.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
}

QubitEffect effect(const Direction& direction, double lambda, int outcome) {
    if (outcome != 1 && outcome != -1)
        throw std::invalid_argument("effect: outcome must be +1 or -1");
    weak_equivalents(lambda);  // range check on lambda
    const Eigen::Matrix2cd projector =
        0.5 * (Eigen::Matrix2cd::Identity() + double(outcome) * pauli_vector(direction.unit_vector()));
    return QubitEffect(lambda * projector + (1.0 - lambda) * 0.5 * Eigen::Matrix2cd::Identity());
}

OutcomeDistribution::OutcomeDistribution(std::vector<std::string> observers,
                                         std::vector<double> probabilities)
    : observers_(std::move(observers)), probabilities_(std::move(probabilities)) {
    if (observers_.empty()) throw std::invalid_argument("OutcomeDistribution: no observers");
    if (probabilities_.size() != (std::size_t{1} << observers_.size()))
        throw std::invalid_argument("OutcomeDistribution: table size must be 2^observers");
    double sum = 0.0;
    for (double p : probabilities_) {
        if (p < kNegativeProbabilityTol)
            throw std::runtime_error("OutcomeDistribution: negative probability");
        sum += p;
    }
    if (std::abs(sum - 1.0) > kDistributionSumTol)
        throw std::runtime_error("OutcomeDistribution: probabilities do not sum to 1");
}

double OutcomeDistribution::probability(const std::vector<int>& outcomes) const {
    if (outcomes.size() != observers_.size())
        throw std::invalid_argument("OutcomeDistribution: outcome tuple length mismatch");
    std::size_t index = 0;
    for (int o : outcomes) {
        if (o != 1 && o != -1)
            throw std::invalid_argument("OutcomeDistribution: outcomes are +1 or -1");
        index = (index << 1) | static_cast<std::size_t>((o + 1) / 2);
    }
    return probabilities_[index];
}

std::vector<int> OutcomeDistribution::outcomes_at(std::size_t index) const {
    const int n = observer_count();
    std::vector<int> out(n);
    for (int i = 0; i < n; ++i) out[i] = ((index >> (n - 1 - i)) & 1) ? 1 : -1;
    return out;
}

double OutcomeDistribution::correlator(const std::vector<int>& observer_indices) const {
    double sum = 0.0;
    for (std::size_t idx = 0; idx < probabilities_.size(); ++idx) {
        int sign = 1;
        for (int obs : observer_indices) {
            if (obs < 0 || obs >= observer_count())
                throw std::invalid_argument("OutcomeDistribution: observer index out of range");
            if (((idx >> (observer_count() - 1 - obs)) & 1) == 0) sign = -sign;
        }
        sum += sign * probabilities_[idx];
    }
    return sum;
}

std::string OutcomeDistribution::to_csv() const {
    std::string out;
    for (int i = 0; i < observer_count(); ++i) {
        out += (i == 0) ? "a" : ("b" + std::to_string(i));
        out += ',';
    }
    out += "probability\n";
    for (std::size_t idx = 0; idx < probabilities_.size(); ++idx) {
        const std::vector<int> tuple = outcomes_at(idx);
        for (int o : tuple) out += (o > 0 ? "1," : "-1,");
        out += format_probability(probabilities_[idx]);
        out += '\n';
    }
    return out;
}

OutcomeDistribution joint_distribution(const Scenario& scenario, int alice_choice,
                                       const std::vector<int>& bob_choices) {
    return joint_distribution(scenario, alice_choice, bob_choices,
                              [](const Direction& d, double lambda, int outcome) {
                                  return effect(d, lambda, outcome);
                              });
}

OutcomeDistribution joint_distribution(const Scenario& scenario, int alice_choice,
                                       const std::vector<int>& bob_choices,
                                       const EffectBuilder& effects) {
    const int n = scenario.setting_count();
    const int chain = scenario.chain_length();
    if (alice_choice < 0 || alice_choice >= n)
        throw std::invalid_argument("joint_distribution: Alice setting index out of range");
    if (static_cast<int>(bob_choices.size()) != chain)
        throw std::invalid_argument("joint_distribution: one setting index per Bob required");
    for (int c : bob_choices)
        if (c < 0 || c >= n)
            throw std::invalid_argument("joint_distribution: Bob setting index out of range");

    // Unnormalized branch states indexed by the Bob outcome bits, -1 first.
    std::vector<Eigen::Matrix4cd> branches{scenario.state().matrix()};
    for (int m = 0; m < chain; ++m) {
        const BobConfig& bob = scenario.bobs()[m];
        const Direction& dir = bob.settings()[bob_choices[m]];
        const Eigen::Matrix4cd k_minus =
            on_bob(effects(dir, bob.sharpness(), -1).sqrt());
        const Eigen::Matrix4cd k_plus = on_bob(effects(dir, bob.sharpness(), +1).sqrt());
        std::vector<Eigen::Matrix4cd> next;
        next.reserve(branches.size() * 2);
        for (const Eigen::Matrix4cd& rho : branches) {
            next.push_back(k_minus * rho * k_minus);
            next.push_back(k_plus * rho * k_plus);
        }
        branches = std::move(next);
    }

    const Eigen::Matrix4cd alice_plus =
        on_alice(0.5 * (Eigen::Matrix2cd::Identity() +
                        pauli_vector(scenario.alice().settings()[alice_choice].unit_vector())));

    std::vector<double> table(std::size_t{1} << (chain + 1), 0.0);
    for (std::size_t b = 0; b < branches.size(); ++b) {
        const double p_plus = (alice_plus * branches[b]).trace().real();
        const double p_total = branches[b].trace().real();
        table[(std::size_t{1} << chain) | b] = p_plus;  // a = +1
        table[b] = p_total - p_plus;                    // a = -1
    }

    std::vector<std::string> observers{"Alice"};
    for (int m = 1; m <= chain; ++m) observers.push_back("Bob" + std::to_string(m));
    return OutcomeDistribution(std::move(observers), std::move(table));
}

OutcomeDistribution marginal(const OutcomeDistribution& dist, const std::vector<int>& keep) {
    if (keep.empty()) throw std::invalid_argument("marginal: keep set must be nonempty");
    std::vector<bool> seen(dist.observer_count(), false);
    for (int k : keep) {
        if (k < 0 || k >= dist.observer_count())
            throw std::invalid_argument("marginal: observer index out of range");
        if (seen[k]) throw std::invalid_argument("marginal: duplicate observer index");
        seen[k] = true;
    }
    std::vector<int> kept_sorted;
    for (int i = 0; i < dist.observer_count(); ++i)
        if (seen[i]) kept_sorted.push_back(i);

    const int total = dist.observer_count();
    const int kept = static_cast<int>(kept_sorted.size());
    std::vector<double> table(std::size_t{1} << kept, 0.0);
    for (std::size_t idx = 0; idx < dist.size(); ++idx) {
        std::size_t out_idx = 0;
        for (int i = 0; i < kept; ++i) {
            const int bit = (idx >> (total - 1 - kept_sorted[i])) & 1;
            out_idx = (out_idx << 1) | static_cast<std::size_t>(bit);
        }
        table[out_idx] += dist.probability_at(idx);
    }
    std::vector<std::string> observers;
    for (int i : kept_sorted) observers.push_back(dist.observers()[i]);
    return OutcomeDistribution(std::move(observers), std::move(table));
}

namespace {

// Enumerates every assignment of setting indices to the listed observers.
bool next_combo(std::vector<int>& combo, int base) {
    for (int i = static_cast<int>(combo.size()) - 1; i >= 0; --i) {
        if (++combo[i] < base) return true;
        combo[i] = 0;
    }
    return false;
}

double max_table_deviation(const OutcomeDistribution& a, const OutcomeDistribution& b) {
    double dev = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        dev = std::max(dev, std::abs(a.probability_at(i) - b.probability_at(i)));
    return dev;
}

}  // namespace

SignallingReport signalling_report(const Scenario& scenario) {
    const int n = scenario.setting_count();
    const int chain = scenario.chain_length();
    if (chain < 2)
        throw std::invalid_argument("signalling_report: needs a chain of at least two Bobs");

    SignallingReport report;
    std::vector<int> combo(chain, 0);

    // Marginal over Alice must not depend on her setting.
    do {
        std::vector<int> keep_bobs(chain);
        for (int i = 0; i < chain; ++i) keep_bobs[i] = i + 1;
        OutcomeDistribution ref = marginal(joint_distribution(scenario, 0, combo), keep_bobs);
        for (int x = 1; x < n; ++x) {
            OutcomeDistribution other =
                marginal(joint_distribution(scenario, x, combo), keep_bobs);
            report.alice_marginal_max_deviation =
                std::max(report.alice_marginal_max_deviation, max_table_deviation(ref, other));
        }
    } while (next_combo(combo, n));

    // Marginal over the last Bob must not depend on his setting; marginals over
    // earlier Bobs are allowed to depend on theirs (sequential signalling).
    for (int dropped = 1; dropped <= chain; ++dropped) {
        std::vector<int> keep;
        for (int i = 0; i <= chain; ++i)
            if (i != dropped) keep.push_back(i);

        double deviation = 0.0;
        std::vector<int> others(chain - 1, 0);
        do {
            for (int x = 0; x < n; ++x) {
                std::vector<int> choices(chain);
                int pos = 0;
                for (int i = 0; i < chain; ++i)
                    if (i != dropped - 1) choices[i] = others[pos++];
                choices[dropped - 1] = 0;
                OutcomeDistribution ref = marginal(joint_distribution(scenario, x, choices), keep);
                for (int y = 1; y < n; ++y) {
                    choices[dropped - 1] = y;
                    OutcomeDistribution other =
                        marginal(joint_distribution(scenario, x, choices), keep);
                    deviation = std::max(deviation, max_table_deviation(ref, other));
                }
            }
        } while (next_combo(others, n));

        if (dropped == chain)
            report.last_bob_max_deviation = deviation;
        else
            report.earlier_bob_witness = std::max(report.earlier_bob_witness, deviation);
    }

    return report;
}

}  // namespace steering
