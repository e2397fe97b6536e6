#include "steering/inequalities.hpp"

#include <cmath>
#include <stdexcept>

namespace steering {

namespace {

// Rounding slack on the strict violation threshold.
constexpr double kViolationSlack = 1e-12;

}  // namespace

std::string to_string(InequalityKind kind) {
    return kind == InequalityKind::Cffw ? "cffw" : "cjwr";
}

SteeringEvaluation cffw(const CorrelationTable& table) {
    if (table.entries.rows() != 2 || table.entries.cols() != 2)
        throw std::invalid_argument("cffw: table must be 2x2");
    const Eigen::MatrixXd& c = table.entries;
    const double s = std::hypot(c(0, 0) + c(0, 1), c(1, 0) + c(1, 1)) +
                     std::hypot(c(0, 0) - c(0, 1), c(1, 0) - c(1, 1));
    SteeringEvaluation eval;
    eval.kind = InequalityKind::Cffw;
    eval.settings = 2;
    eval.bob_index = table.bob_index;
    eval.value = s;
    eval.bound = 2.0;
    eval.violated = s > eval.bound + kViolationSlack;
    return eval;
}

SteeringEvaluation cjwr(const CorrelationTable& table) {
    const int n = static_cast<int>(table.entries.rows());
    if (table.entries.cols() != n || n < 2)
        throw std::invalid_argument("cjwr: table must be square, n >= 2");
    const double f = std::abs(table.entries.trace()) / std::sqrt(double(n));
    SteeringEvaluation eval;
    eval.kind = InequalityKind::Cjwr;
    eval.settings = n;
    eval.bob_index = table.bob_index;
    eval.value = f;
    eval.bound = 1.0;
    eval.violated = f > eval.bound + kViolationSlack;
    return eval;
}

SteeringEvaluation evaluate(InequalityKind kind, const CorrelationTable& table) {
    return kind == InequalityKind::Cffw ? cffw(table) : cjwr(table);
}

}  // namespace steering
