#pragma once

#include <complex>

#include <Eigen/Dense>

namespace steering {

using Complex = std::complex<double>;

// First tensor factor is Alice's qubit, second is the Bobs' qubit.
// Basis order |00>, |01>, |10>, |11>.

inline const Eigen::Matrix2cd& pauli_x() {
    static const Eigen::Matrix2cd m = (Eigen::Matrix2cd() << Complex(0, 0), Complex(1, 0),
                                       Complex(1, 0), Complex(0, 0))
                                          .finished();
    return m;
}

inline const Eigen::Matrix2cd& pauli_y() {
    static const Eigen::Matrix2cd m = (Eigen::Matrix2cd() << Complex(0, 0), Complex(0, -1),
                                       Complex(0, 1), Complex(0, 0))
                                          .finished();
    return m;
}

inline const Eigen::Matrix2cd& pauli_z() {
    static const Eigen::Matrix2cd m = (Eigen::Matrix2cd() << Complex(1, 0), Complex(0, 0),
                                       Complex(0, 0), Complex(-1, 0))
                                          .finished();
    return m;
}

inline const Eigen::Matrix2cd& pauli(int axis) {
    switch (axis) {
        case 0: return pauli_x();
        case 1: return pauli_y();
        default: return pauli_z();
    }
}

/// n.sigma for a unit vector n.
inline Eigen::Matrix2cd pauli_vector(const Eigen::Vector3d& n) {
    return n.x() * pauli_x() + n.y() * pauli_y() + n.z() * pauli_z();
}

/// Kronecker product, row-major qubit ordering (Alice (x) Bob).
inline Eigen::Matrix4cd kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    Eigen::Matrix4cd out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

/// Operator acting on Alice's qubit only.
inline Eigen::Matrix4cd on_alice(const Eigen::Matrix2cd& a) {
    return kron2(a, Eigen::Matrix2cd::Identity());
}

/// Operator acting on the Bobs' qubit only.
inline Eigen::Matrix4cd on_bob(const Eigen::Matrix2cd& b) {
    return kron2(Eigen::Matrix2cd::Identity(), b);
}

}  // namespace steering
