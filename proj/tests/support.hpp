// SPDX-License-Identifier: Apache-2.0
//
// Shared fixtures and independent oracles for the test executables.

#ifndef VAFIM_TESTS_SUPPORT_HPP
#define VAFIM_TESTS_SUPPORT_HPP

#include "vafim/analysis.hpp"
#include "vafim/config.hpp"

#include <string>

namespace vafim::testing {

inline std::string room_config_path()
{
    return std::string(VAFIM_SOURCE_DIR) + "/configs/room_scenario.toml";
}

inline Experiment room_experiment()
{
    return parse_config(read_text_file(room_config_path()));
}

inline double relative_error(const Eigen::MatrixXd &value, const Eigen::MatrixXd &reference)
{
    return (value - reference).norm() / reference.norm();
}

/// Reflection point by intersecting the segment VA -> rx with the wall line,
/// solved as a 2x2 linear system in (segment parameter, wall coordinate).
inline Point2 line_intersection(const Point2 &va, const Point2 &rx, const Point2 &wall_point, double wall_normal)
{
    const Point2 along(-std::sin(wall_normal), std::cos(wall_normal));
    Eigen::Matrix2d a;
    a.col(0) = rx - va;
    a.col(1) = -along;
    const Eigen::Vector2d st = a.colPivHouseholderQr().solve(wall_point - va);
    return va + st(0) * (rx - va);
}

/// Inverse of the (e, e) block of inv(m): the Schur complement keeping e^c,
/// computed through a full inverse.
inline Eigen::MatrixXd schur_by_inverse(const Eigen::MatrixXd &m, Eigen::Index keep)
{
    const Eigen::MatrixXd inv = m.inverse();
    return inv.topLeftCorner(keep, keep).inverse();
}

} // namespace vafim::testing

#endif // VAFIM_TESTS_SUPPORT_HPP
