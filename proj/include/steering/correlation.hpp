#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "steering/scenario.hpp"

namespace steering {

/// 3x3 Bloch correlation matrix T with <(u.sigma)(x)(v.sigma)> = u^T T v.
/// The singlet gives T = -I. Singular values never exceed 1 for physical
/// states and only shrink along the chain.
using CorrelationMatrixState = Eigen::Matrix3d;

/// T extracted from a density matrix: T_uv = tr(rho sigma_u (x) sigma_v).
CorrelationMatrixState bloch_correlation_matrix(const TwoQubitState& state);

/// Outcome-averaged action of one Bob's unsharp instrument on T, averaged over
/// his setting choices: T' = sum_i w_i [F T + (1-F) T n_i n_i^T], linear in T.
CorrelationMatrixState decohere_average(const CorrelationMatrixState& T, const BobConfig& bob,
                                        const std::vector<double>& weights);

/// Single-setting version (no averaging): T' = F T + (1-F) T n n^T.
CorrelationMatrixState decohere_single(const CorrelationMatrixState& T, const Direction& direction,
                                       double lambda);

/// Averaged correlations between Alice and one Bob in the chain:
/// entries[j][k] = E[a * b] for Alice setting j and Bob setting k, averaged
/// uniformly (or per scenario weights) over the earlier Bobs' choices.
struct CorrelationTable {
    int bob_index = 1;  // 1-based
    Eigen::MatrixXd entries;

    std::string to_csv() const;  // rows = Alice setting, columns = Bob setting
};

/// Closed-form table for Bob number bob_index (1-based): decoheres T through
/// Bobs 1..bob_index-1, then C[j][k] = lambda_m * x_j^T T y_k.
CorrelationTable correlation_table(const Scenario& scenario, int bob_index);

/// Table conditioned on explicit setting choices for the earlier Bobs instead
/// of the unbiased average. Exposed for cross-checks; no inequality uses it.
CorrelationTable correlation_table_conditioned(const Scenario& scenario, int bob_index,
                                               const std::vector<int>& earlier_choices);

}  // namespace steering
