#include "steering/direction.hpp"

#include <cmath>
#include <stdexcept>

namespace steering {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kPoleTol = 1e-15;

}  // namespace

Direction::Direction(double theta, double phi) : theta_(theta), phi_(phi) {}

Eigen::Vector3d Direction::unit_vector() const {
    const double st = std::sin(theta_);
    return {st * std::cos(phi_), st * std::sin(phi_), std::cos(theta_)};
}

Direction direction_from_angles(double theta, double phi) {
    if (!std::isfinite(theta) || !std::isfinite(phi))
        throw std::invalid_argument("direction_from_angles: angles must be finite");

    double t = std::fmod(theta, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    if (t > kPi) {  // fold through the south pole, azimuth flips
        t = kTwoPi - t;
        phi += kPi;
    }
    double p = std::fmod(phi, kTwoPi);
    if (p < 0.0) p += kTwoPi;

    if (t < kPoleTol) {
        t = 0.0;
        p = 0.0;
    } else if (t > kPi - kPoleTol) {
        t = kPi;
        p = 0.0;
    }
    return Direction(t, p);
}

Direction direction_from_unit_vector(const Eigen::Vector3d& v) {
    const double norm = v.norm();
    if (!(norm > 0.0) || !std::isfinite(norm))
        throw std::invalid_argument("direction_from_unit_vector: zero or non-finite vector");
    const Eigen::Vector3d u = v / norm;
    const double theta = std::acos(std::clamp(u.z(), -1.0, 1.0));
    const double phi = std::atan2(u.y(), u.x());
    return direction_from_angles(theta, phi);
}

std::pair<double, double> weak_equivalents(double lambda) {
    if (!std::isfinite(lambda) || lambda <= 0.0 || lambda > 1.0)
        throw std::invalid_argument("weak_equivalents: sharpness must lie in (0, 1]");
    return {std::sqrt(1.0 - lambda * lambda), lambda};
}

UnsharpSetting::UnsharpSetting(Direction direction, double sharpness)
    : direction_(direction), sharpness_(sharpness) {
    weak_equivalents(sharpness);  // range check
}

double UnsharpSetting::quality_factor() const {
    return std::sqrt(1.0 - sharpness_ * sharpness_);
}

}  // namespace steering
