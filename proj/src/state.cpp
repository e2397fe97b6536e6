#include "steering/state.hpp"

#include <stdexcept>

namespace steering {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kTraceTol = 1e-12;
constexpr double kEigenvalueFloor = -1e-10;

}  // namespace

TwoQubitState::TwoQubitState(const Eigen::Matrix4cd& rho) : rho_(rho) {
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol)
        throw std::runtime_error("TwoQubitState: matrix is not Hermitian");
    const Complex tr = rho.trace();
    if (std::abs(tr - Complex(1.0, 0.0)) > kTraceTol)
        throw std::runtime_error("TwoQubitState: trace is not 1");
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < kEigenvalueFloor)
        throw std::runtime_error("TwoQubitState: matrix is not positive semidefinite");
}

double TwoQubitState::correlator(const Eigen::Vector3d& u, const Eigen::Vector3d& v) const {
    return (rho_ * kron2(pauli_vector(u), pauli_vector(v))).trace().real();
}

Eigen::Matrix2cd TwoQubitState::partial_trace_alice() const {
    Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
    for (int a = 0; a < 2; ++a)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) out(i, j) += rho_(2 * a + i, 2 * a + j);
    return out;
}

Eigen::Matrix2cd TwoQubitState::partial_trace_bob() const {
    Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
    for (int b = 0; b < 2; ++b)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) out(i, j) += rho_(2 * i + b, 2 * j + b);
    return out;
}

TwoQubitState singlet() {
    // (|01> - |10>)/sqrt(2) written out so every entry is an exact double
    Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
    rho(1, 1) = 0.5;
    rho(2, 2) = 0.5;
    rho(1, 2) = -0.5;
    rho(2, 1) = -0.5;
    return TwoQubitState(rho);
}

}  // namespace steering
