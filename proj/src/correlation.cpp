#include "steering/correlation.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "steering/pauli.hpp"

namespace steering {

CorrelationMatrixState bloch_correlation_matrix(const TwoQubitState& state) {
    CorrelationMatrixState T;
    for (int u = 0; u < 3; ++u)
        for (int v = 0; v < 3; ++v)
            T(u, v) = (state.matrix() * kron2(pauli(u), pauli(v))).trace().real();
    return T;
}

CorrelationMatrixState decohere_average(const CorrelationMatrixState& T, const BobConfig& bob,
                                        const std::vector<double>& weights) {
    if (static_cast<int>(weights.size()) != bob.setting_count())
        throw std::invalid_argument("decohere_average: one weight per setting required");
    const double F = bob.quality_factor();
    Eigen::Matrix3d average_projector = Eigen::Matrix3d::Zero();
    for (int i = 0; i < bob.setting_count(); ++i) {
        const Eigen::Vector3d n = bob.settings()[i].unit_vector();
        average_projector += weights[i] * (n * n.transpose());
    }
    return T * (F * Eigen::Matrix3d::Identity() + (1.0 - F) * average_projector);
}

CorrelationMatrixState decohere_single(const CorrelationMatrixState& T, const Direction& direction,
                                       double lambda) {
    const double F = weak_equivalents(lambda).first;
    const Eigen::Vector3d n = direction.unit_vector();
    return T * (F * Eigen::Matrix3d::Identity() + (1.0 - F) * (n * n.transpose()));
}

std::string CorrelationTable::to_csv() const {
    std::string out;
    char buf[40];
    for (int j = 0; j < entries.rows(); ++j) {
        for (int k = 0; k < entries.cols(); ++k) {
            std::snprintf(buf, sizeof(buf), "%.17g", entries(j, k));
            out += buf;
            out += (k + 1 < entries.cols()) ? "," : "\n";
        }
    }
    return out;
}

namespace {

CorrelationTable table_from(const Scenario& scenario, int bob_index,
                            const CorrelationMatrixState& T) {
    const int n = scenario.setting_count();
    const BobConfig& bob = scenario.bob(bob_index);
    CorrelationTable table;
    table.bob_index = bob_index;
    table.entries.resize(n, n);
    for (int j = 0; j < n; ++j) {
        const Eigen::Vector3d x = scenario.alice().settings()[j].unit_vector();
        for (int k = 0; k < n; ++k)
            table.entries(j, k) = bob.sharpness() * x.dot(T * bob.settings()[k].unit_vector());
    }
    return table;
}

}  // namespace

CorrelationTable correlation_table(const Scenario& scenario, int bob_index) {
    if (bob_index < 1 || bob_index > scenario.chain_length())
        throw std::invalid_argument("correlation_table: Bob index out of range");
    CorrelationMatrixState T = bloch_correlation_matrix(scenario.state());
    for (int m = 1; m < bob_index; ++m)
        T = decohere_average(T, scenario.bob(m), scenario.setting_weights()[m - 1]);
    return table_from(scenario, bob_index, T);
}

CorrelationTable correlation_table_conditioned(const Scenario& scenario, int bob_index,
                                               const std::vector<int>& earlier_choices) {
    if (bob_index < 1 || bob_index > scenario.chain_length())
        throw std::invalid_argument("correlation_table_conditioned: Bob index out of range");
    if (static_cast<int>(earlier_choices.size()) != bob_index - 1)
        throw std::invalid_argument(
            "correlation_table_conditioned: one choice per earlier Bob required");
    CorrelationMatrixState T = bloch_correlation_matrix(scenario.state());
    for (int m = 1; m < bob_index; ++m) {
        const BobConfig& bob = scenario.bob(m);
        const int choice = earlier_choices[m - 1];
        if (choice < 0 || choice >= bob.setting_count())
            throw std::invalid_argument("correlation_table_conditioned: setting index out of range");
        T = decohere_single(T, bob.settings()[choice], bob.sharpness());
    }
    return table_from(scenario, bob_index, T);
}

}  // namespace steering
