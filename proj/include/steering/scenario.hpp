#pragma once

#include <vector>

#include "steering/direction.hpp"
#include "steering/state.hpp"

namespace steering {

/// Alice's measurement directions. For two or three settings the directions
/// must be mutually orthogonal Bloch vectors (Gram off-diagonals below 1e-9);
/// with more settings orthogonality is impossible in R^3 and is not checked.
class AliceConfig {
  public:
    explicit AliceConfig(std::vector<Direction> settings);

    const std::vector<Direction>& settings() const { return settings_; }
    int setting_count() const { return static_cast<int>(settings_.size()); }

  private:
    std::vector<Direction> settings_;
};

/// One Bob in the chain: his measurement directions and a single sharpness
/// shared by all of his settings.
class BobConfig {
  public:
    BobConfig(std::vector<Direction> settings, double sharpness);

    const std::vector<Direction>& settings() const { return settings_; }
    int setting_count() const { return static_cast<int>(settings_.size()); }
    double sharpness() const { return sharpness_; }
    double quality_factor() const;

  private:
    std::vector<Direction> settings_;
    double sharpness_;
};

/// Shared state, Alice, and the ordered chain of Bobs, plus the probability
/// each Bob picks each of his settings (uniform unless stated otherwise).
class Scenario {
  public:
    Scenario(TwoQubitState state, AliceConfig alice, std::vector<BobConfig> bobs);
    Scenario(TwoQubitState state, AliceConfig alice, std::vector<BobConfig> bobs,
             std::vector<std::vector<double>> setting_weights);

    const TwoQubitState& state() const { return state_; }
    const AliceConfig& alice() const { return alice_; }
    const std::vector<BobConfig>& bobs() const { return bobs_; }
    const BobConfig& bob(int index) const;  // 1-based, matching Bob^1..Bob^n
    const std::vector<std::vector<double>>& setting_weights() const { return setting_weights_; }

    int setting_count() const { return alice_.setting_count(); }
    int chain_length() const { return static_cast<int>(bobs_.size()); }

  private:
    void validate() const;

    TwoQubitState state_;
    AliceConfig alice_;
    std::vector<BobConfig> bobs_;
    std::vector<std::vector<double>> setting_weights_;
};

}  // namespace steering
