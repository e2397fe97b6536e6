#include "steering/scenario.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace steering {

namespace {

constexpr double kGramTol = 1e-9;
constexpr double kWeightSumTol = 1e-12;

}  // namespace

AliceConfig::AliceConfig(std::vector<Direction> settings) : settings_(std::move(settings)) {
    const int n = static_cast<int>(settings_.size());
    if (n < 2) throw std::invalid_argument("AliceConfig: needs at least two settings");
    if (n > 3) return;  // mutual orthogonality has no solution in R^3 beyond a triad
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double dot = settings_[i].unit_vector().dot(settings_[j].unit_vector());
            if (std::abs(dot) > kGramTol)
                throw std::invalid_argument(
                    "AliceConfig: settings " + std::to_string(i) + " and " + std::to_string(j) +
                    " are not orthogonal (dot = " + std::to_string(dot) + ")");
        }
}

BobConfig::BobConfig(std::vector<Direction> settings, double sharpness)
    : settings_(std::move(settings)), sharpness_(sharpness) {
    if (settings_.empty()) throw std::invalid_argument("BobConfig: needs at least one setting");
    weak_equivalents(sharpness_);  // range check
}

double BobConfig::quality_factor() const {
    return std::sqrt(1.0 - sharpness_ * sharpness_);
}

Scenario::Scenario(TwoQubitState state, AliceConfig alice, std::vector<BobConfig> bobs)
    : state_(std::move(state)), alice_(std::move(alice)), bobs_(std::move(bobs)) {
    setting_weights_.reserve(bobs_.size());
    for (const BobConfig& bob : bobs_)
        setting_weights_.emplace_back(bob.setting_count(), 1.0 / bob.setting_count());
    validate();
}

Scenario::Scenario(TwoQubitState state, AliceConfig alice, std::vector<BobConfig> bobs,
                   std::vector<std::vector<double>> setting_weights)
    : state_(std::move(state)),
      alice_(std::move(alice)),
      bobs_(std::move(bobs)),
      setting_weights_(std::move(setting_weights)) {
    validate();
}

const BobConfig& Scenario::bob(int index) const {
    if (index < 1 || index > chain_length())
        throw std::invalid_argument("Scenario: Bob index out of range");
    return bobs_[index - 1];
}

void Scenario::validate() const {
    if (bobs_.empty()) throw std::invalid_argument("Scenario: chain of Bobs is empty");
    for (const BobConfig& bob : bobs_)
        if (bob.setting_count() != alice_.setting_count())
            throw std::invalid_argument(
                "Scenario: every Bob must have the same number of settings as Alice");
    if (setting_weights_.size() != bobs_.size())
        throw std::invalid_argument("Scenario: one weight vector per Bob required");
    for (std::size_t i = 0; i < setting_weights_.size(); ++i) {
        const std::vector<double>& w = setting_weights_[i];
        if (static_cast<int>(w.size()) != bobs_[i].setting_count())
            throw std::invalid_argument("Scenario: weight vector length mismatch");
        double sum = 0.0;
        for (double x : w) {
            if (!(x >= 0.0)) throw std::invalid_argument("Scenario: negative setting weight");
            sum += x;
        }
        if (std::abs(sum - 1.0) > kWeightSumTol)
            throw std::invalid_argument("Scenario: setting weights must sum to 1");
    }
}

}  // namespace steering
