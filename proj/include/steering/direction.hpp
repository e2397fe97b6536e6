#pragma once

#include <utility>

#include <Eigen/Dense>

namespace steering {

/// A measurement axis on the Bloch sphere, stored canonically:
/// theta in [0, pi], phi in [0, 2*pi), and phi = 0 at the poles.
class Direction {
  public:
    Direction() : theta_(0.0), phi_(0.0) {}
    Direction(double theta, double phi);

    double theta() const { return theta_; }
    double phi() const { return phi_; }

    Eigen::Vector3d unit_vector() const;

  private:
    double theta_;
    double phi_;
};

/// Canonicalizes arbitrary finite angles onto the sphere.
/// Throws std::invalid_argument on non-finite input.
Direction direction_from_angles(double theta, double phi);

/// Inverse of unit_vector, up to normalization of the input.
Direction direction_from_unit_vector(const Eigen::Vector3d& v);

/// Quality factor F = sqrt(1 - lambda^2) and precision G = lambda of the
/// optimal-pointer weak measurement equivalent to sharpness lambda.
/// Requires 0 < lambda <= 1.
std::pair<double, double> weak_equivalents(double lambda);

/// A measurement axis together with the sharpness of the measurement.
class UnsharpSetting {
  public:
    UnsharpSetting(Direction direction, double sharpness);

    const Direction& direction() const { return direction_; }
    double sharpness() const { return sharpness_; }
    double quality_factor() const;  // F = sqrt(1 - lambda^2)
    double precision() const { return sharpness_; }

  private:
    Direction direction_;
    double sharpness_;
};

}  // namespace steering
