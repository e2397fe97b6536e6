#pragma once

#include <string>

#include "steering/correlation.hpp"

namespace steering {

enum class InequalityKind { Cffw, Cjwr };

std::string to_string(InequalityKind kind);

/// Result of evaluating a steering functional on one Bob's correlation table.
struct SteeringEvaluation {
    InequalityKind kind = InequalityKind::Cffw;
    int settings = 2;  // n for CJWR(n); always 2 for CFFW
    int bob_index = 1;
    double value = 0.0;
    double bound = 2.0;
    bool violated = false;
};

/// Two-settings steering analogue of CHSH, classical bound 2:
///   S = sqrt((C00+C01)^2 + (C10+C11)^2) + sqrt((C00-C01)^2 + (C10-C11)^2),
/// first index Alice, second index Bob.
SteeringEvaluation cffw(const CorrelationTable& table);

/// n-settings linear steering functional, classical bound 1:
///   F = (1/sqrt(n)) |sum_i C[i][i]|.
SteeringEvaluation cjwr(const CorrelationTable& table);

SteeringEvaluation evaluate(InequalityKind kind, const CorrelationTable& table);

}  // namespace steering
