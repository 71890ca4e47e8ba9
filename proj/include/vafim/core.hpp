// SPDX-License-Identifier: Apache-2.0
//
// Shared scalar types, unit vectors and angle helpers.

#ifndef VAFIM_CORE_HPP
#define VAFIM_CORE_HPP

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

namespace vafim {

template <typename Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Vec4 = Eigen::Matrix<Scalar, 4, 1>;
template <typename Scalar>
using Mat2 = Eigen::Matrix<Scalar, 2, 2>;
template <typename Scalar>
using Mat3 = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar>
using Mat4 = Eigen::Matrix<Scalar, 4, 4>;

using Point2 = Vec2<double>;

/// Speed of light in vacuum [m/s], exact.
inline constexpr double kSpeedOfLight = 299792458.0;

/// u(theta) = [cos theta, sin theta]^T
template <typename Scalar>
Vec2<Scalar> unit(Scalar angle)
{
    using std::cos;
    using std::sin;
    return Vec2<Scalar>(cos(angle), sin(angle));
}

/// u_perp(theta) = u(theta - pi/2) = [sin theta, -cos theta]^T
template <typename Scalar>
Vec2<Scalar> unit_perp(Scalar angle)
{
    using std::cos;
    using std::sin;
    return Vec2<Scalar>(sin(angle), -cos(angle));
}

/// Wraps an angle into (-pi, pi].
template <typename Scalar>
Scalar wrap_angle(Scalar angle)
{
    using std::remainder;
    constexpr Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
    Scalar wrapped = remainder(angle, two_pi);
    if (wrapped <= -std::numbers::pi_v<Scalar>)
        wrapped += two_pi;
    return wrapped;
}

/// Four-quadrant direction of a planar vector.
template <typename Scalar>
Scalar angle_of(const Vec2<Scalar> &v)
{
    using std::atan2;
    return atan2(v.y(), v.x());
}

/// Undirected direction of an angle in degrees, reduced to [0, 180).
template <typename Scalar>
Scalar line_direction_degrees(Scalar angle)
{
    using std::fmod;
    Scalar deg = fmod(angle * Scalar(180) / std::numbers::pi_v<Scalar>, Scalar(180));
    if (deg < Scalar(0))
        deg += Scalar(180);
    if (deg >= Scalar(180))
        deg -= Scalar(180);
    return deg;
}

/// Smallest distance between two undirected directions given in degrees.
template <typename Scalar>
Scalar line_direction_distance_degrees(Scalar a, Scalar b)
{
    using std::abs;
    using std::fmod;
    Scalar diff = fmod(abs(a - b), Scalar(180));
    return diff > Scalar(90) ? Scalar(180) - diff : diff;
}

/// Per-path Fisher intensities of the delay, AOD and AOA after the path gain
/// has been eliminated and cross terms dropped.
template <typename Scalar = double>
struct DiagonalPathInfo
{
    Scalar delay = 0; // [s^-2]
    Scalar aod = 0;   // [rad^-2]
    Scalar aoa = 0;   // [rad^-2]
};

} // namespace vafim

#endif // VAFIM_CORE_HPP
