#pragma once

#include <Eigen/Dense>

#include "steering/pauli.hpp"

namespace steering {

/// Validated two-qubit density matrix (Alice (x) Bob ordering).
/// Construction enforces unit trace and hermiticity to 1e-12 and
/// eigenvalues >= -1e-10.
class TwoQubitState {
  public:
    explicit TwoQubitState(const Eigen::Matrix4cd& rho);

    const Eigen::Matrix4cd& matrix() const { return rho_; }

    /// tr(rho (u.sigma (x) v.sigma)).
    double correlator(const Eigen::Vector3d& u, const Eigen::Vector3d& v) const;

    Eigen::Matrix2cd partial_trace_alice() const;  // reduced state of Bob's qubit
    Eigen::Matrix2cd partial_trace_bob() const;    // reduced state of Alice's qubit

  private:
    Eigen::Matrix4cd rho_;
};

/// Projector onto (|01> - |10>)/sqrt(2).
TwoQubitState singlet();

}  // namespace steering
