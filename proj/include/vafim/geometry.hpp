// SPDX-License-Identifier: Apache-2.0
//
// Planar scene: antenna arrays, flat reflectors, virtual anchors and the
// per-path delay/angle geometry of LOS and single-bounce paths.

#ifndef VAFIM_GEOMETRY_HPP
#define VAFIM_GEOMETRY_HPP

#include "vafim/core.hpp"
#include "vafim/errors.hpp"

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

namespace vafim {

// ---------------------------------------------------------------------------
// Arrays
// ---------------------------------------------------------------------------

// Element offset from the array reference point, in the array's local frame.
struct ArrayElement
{
    double distance = 0.0; // [m]
    double angle = 0.0;    // [rad]
};

enum class ArrayKind
{
    ula,
    uca,
    custom
};

struct ArrayGeometry
{
    ArrayKind kind = ArrayKind::custom;
    std::vector<ArrayElement> elements;

    std::size_t size() const noexcept { return elements.size(); }

    // Local-frame Cartesian element position.
    Point2 element_position(std::size_t j) const
    {
        return elements[j].distance * unit(elements[j].angle);
    }

    // Largest distance between two elements [m].
    double max_dimension() const;

    static ArrayGeometry single();

    // n elements on the local y-axis, symmetric about the reference point, so
    // that broadside points along the array orientation.
    static ArrayGeometry ula(std::size_t n, double spacing);

    // n elements equally spaced on a circle; element 0 at local angle 0.
    static ArrayGeometry uca(std::size_t n, double radius);
};

// ---------------------------------------------------------------------------
// Reflectors and virtual anchors
// ---------------------------------------------------------------------------

// Infinite flat surface through `anchor` with normal u(normal_angle).
template <typename Scalar = double>
struct BasicReflector
{
    Vec2<Scalar> anchor = Vec2<Scalar>::Zero();
    Scalar normal_angle = 0;

    BasicReflector() = default;
    BasicReflector(const Vec2<Scalar> &point, Scalar angle) : anchor(point), normal_angle(wrap_angle(angle)) {}
};

using Reflector = BasicReflector<double>;

/// Mirror image of `point` across the reflector line.
template <typename Scalar>
Vec2<Scalar> virtual_anchor(const BasicReflector<Scalar> &reflector, const Vec2<Scalar> &point)
{
    const Vec2<Scalar> n = unit(reflector.normal_angle);
    return point + Scalar(2) * (reflector.anchor - point).dot(n) * n;
}

/// Specular point of incidence of the Tx -> reflector -> Rx path.
///
/// Throws Error(no_valid_reflection) unless both terminals lie strictly on the
/// same side of the reflector.
template <typename Scalar>
Vec2<Scalar> incidence_point(const Vec2<Scalar> &tx, const Vec2<Scalar> &rx, const BasicReflector<Scalar> &reflector)
{
    const Vec2<Scalar> n = unit(reflector.normal_angle);
    const Scalar side_tx = (tx - reflector.anchor).dot(n);
    const Scalar side_rx = (rx - reflector.anchor).dot(n);
    if (!(side_tx * side_rx > Scalar(0)))
        throw Error(ErrorCode::no_valid_reflection, "Tx and Rx are not strictly on the same side of the reflector");

    const Vec2<Scalar> va = virtual_anchor(reflector, tx);
    const Scalar side_va = -side_tx;
    const Scalar t = side_va / (side_va - side_rx);
    if (!(t > Scalar(0) && t < Scalar(1)))
        throw Error(ErrorCode::no_valid_reflection, "reflection point lies outside the VA-Rx segment");
    return va + t * (rx - va);
}

// ---------------------------------------------------------------------------
// Per-path geometry
// ---------------------------------------------------------------------------

template <typename Scalar = double>
struct PathGeometry
{
    std::size_t index = 0;
    bool is_los = true;
    std::optional<std::size_t> reflector; // 0-based reflector index for NLOS paths

    // NaN for the LOS path.
    Vec2<Scalar> virtual_anchor = Vec2<Scalar>::Constant(std::numeric_limits<Scalar>::quiet_NaN());
    Vec2<Scalar> incidence_point = Vec2<Scalar>::Constant(std::numeric_limits<Scalar>::quiet_NaN());

    Scalar length = 0;    // d_l [m]
    Scalar delay = 0;     // tau_l [s], includes the clock offset
    Scalar aod = 0;       // global AOD [rad]
    Scalar aoa = 0;       // global AOA [rad]
    Scalar local_aod = 0; // AOD in the Tx array frame
    Scalar local_aoa = 0; // AOA in the Rx array frame

    // Direction of the reflector normal pointing away from the Tx, i.e. of
    // p_VA - p_T. Satisfies reflector_angle = (aod + aoa)/2 mod pi.
    Scalar reflector_angle = 0;
    Scalar angle_difference = 0; // aoa - aod wrapped to (-pi, pi]

    Scalar tx_to_incidence = 0; // d_T,s [m]
    Scalar incidence_to_rx = 0; // d_R,s [m]
};

template <typename Scalar>
PathGeometry<Scalar> los_path(const Vec2<Scalar> &tx, Scalar tx_orientation, const Vec2<Scalar> &rx,
                              Scalar rx_orientation, Scalar clock_offset)
{
    constexpr Scalar pi = std::numbers::pi_v<Scalar>;
    PathGeometry<Scalar> g;
    g.is_los = true;
    g.length = (rx - tx).norm();
    if (!(g.length > Scalar(0)))
        throw Error(ErrorCode::zero_distance, "Tx and Rx coincide");
    g.delay = (g.length + clock_offset) / Scalar(kSpeedOfLight);
    g.aoa = angle_of(Vec2<Scalar>(tx - rx));
    g.aod = wrap_angle(g.aoa - pi);
    g.local_aod = wrap_angle(g.aod - tx_orientation);
    g.local_aoa = wrap_angle(g.aoa - rx_orientation);
    g.angle_difference = wrap_angle(g.aoa - g.aod);
    g.reflector_angle = std::numeric_limits<Scalar>::quiet_NaN();
    return g;
}

/// Single-bounce path generated by a virtual anchor. The reflector is the
/// perpendicular bisector of p_T and p_VA.
template <typename Scalar>
PathGeometry<Scalar> nlos_path(const Vec2<Scalar> &tx, Scalar tx_orientation, const Vec2<Scalar> &rx,
                               Scalar rx_orientation, Scalar clock_offset, const Vec2<Scalar> &va)
{
    PathGeometry<Scalar> g;
    g.is_los = false;
    g.virtual_anchor = va;

    const Vec2<Scalar> tx_to_va = va - tx;
    const Scalar va_distance = tx_to_va.norm();
    if (!(va_distance > Scalar(0)))
        throw Error(ErrorCode::zero_distance, "virtual anchor coincides with the Tx");
    const Vec2<Scalar> n = tx_to_va / va_distance;
    const Scalar side_rx = (rx - tx).dot(n) - va_distance / Scalar(2);
    if (!(side_rx < Scalar(0)))
        throw Error(ErrorCode::no_valid_reflection, "Rx is not on the Tx side of the reflector");

    const Scalar side_va = va_distance / Scalar(2);
    const Scalar t = side_va / (side_va - side_rx);
    g.incidence_point = va + t * (rx - va);

    g.length = (rx - va).norm();
    g.delay = (g.length + clock_offset) / Scalar(kSpeedOfLight);
    g.aoa = angle_of(Vec2<Scalar>(va - rx));
    g.reflector_angle = angle_of(tx_to_va);
    g.aod = wrap_angle(Scalar(2) * g.reflector_angle - g.aoa);
    g.local_aod = wrap_angle(g.aod - tx_orientation);
    g.local_aoa = wrap_angle(g.aoa - rx_orientation);
    g.angle_difference = wrap_angle(g.aoa - g.aod);
    g.tx_to_incidence = (g.incidence_point - tx).norm();
    g.incidence_to_rx = (rx - g.incidence_point).norm();
    return g;
}

// ---------------------------------------------------------------------------
// Measurement-consistent ambiguity locus
// ---------------------------------------------------------------------------

template <typename Scalar = double>
struct LocusPoint
{
    Vec2<Scalar> rx;
    Vec2<Scalar> virtual_anchor;
    Vec2<Scalar> incidence_point;
};

/// One member of the family of (p_R, p_VA, p_s) that reproduce the delay, AOD
/// and AOA of a single-bounce path, parametrized by the Tx-to-incidence
/// distance `lambda`. `clock_offset` is the (known) d_clk contained in `delay`.
template <typename Scalar>
LocusPoint<Scalar> locus_family(const Vec2<Scalar> &tx, Scalar delay, Scalar aod, Scalar aoa, Scalar lambda,
                                Scalar clock_offset = Scalar(0))
{
    using std::abs;
    using std::cos;
    const Scalar path_length = Scalar(kSpeedOfLight) * delay - clock_offset;
    if (!(lambda > Scalar(0) && lambda < path_length))
        throw Error(ErrorCode::lambda_out_of_range, "lambda must lie in (0, c*tau - d_clk)");
    const Scalar half_difference = wrap_angle(aoa - aod) / Scalar(2);
    const Scalar cos_half = cos(half_difference);
    if (abs(cos_half) < Scalar(1e-12))
        throw Error(ErrorCode::degenerate_geometry, "cos(delta_theta/2) = 0: grazing geometry");

    const Scalar normal = aoa - half_difference;
    LocusPoint<Scalar> point;
    point.virtual_anchor = tx + Scalar(2) * lambda * cos_half * unit(normal);
    point.rx = point.virtual_anchor - path_length * unit(aoa);
    point.incidence_point = tx + lambda * unit(aod);
    return point;
}

// ---------------------------------------------------------------------------
// Scenario
// ---------------------------------------------------------------------------

struct ActivePaths
{
    bool include_los = true;
    std::vector<std::size_t> reflectors; // 0-based, in path order
};

struct Scenario
{
    Point2 tx_position = Point2::Zero();
    double tx_orientation = 0.0;
    ArrayGeometry tx_array = ArrayGeometry::single();

    Point2 rx_position = Point2::Zero();
    double rx_orientation = 0.0; // alpha_R
    ArrayGeometry rx_array = ArrayGeometry::single();

    double clock_offset = 0.0; // d_clk = c * eps_clk [m]

    std::vector<Reflector> reflectors;
    ActivePaths paths;

    std::size_t path_count() const noexcept { return (paths.include_los ? 1u : 0u) + paths.reflectors.size(); }
    std::size_t nlos_count() const noexcept { return paths.reflectors.size(); }
};

/// Throws unless the scenario has at least one active path with valid indices.
void validate(const Scenario &scenario);

/// Geometry of active path `path_index` (LOS first when included, then the
/// active reflectors in order).
PathGeometry<double> path_geometry(const Scenario &scenario, std::size_t path_index);

std::vector<PathGeometry<double>> path_geometries(const Scenario &scenario);

/// Position-domain parameter vector [p_R, alpha_R, d_clk, p_VA,1, ...].
Eigen::VectorXd position_parameters(const Scenario &scenario);

/// Forward map from position parameters to the path geometry, the function
/// whose Jacobian the FIM transformation uses.
std::vector<PathGeometry<double>> paths_from_parameters(const Point2 &tx, double tx_orientation, bool include_los,
                                                        const Eigen::VectorXd &parameters);

/// Rigidly translates every point of the scene.
Scenario translated(const Scenario &scenario, const Point2 &offset);

} // namespace vafim

#endif // VAFIM_GEOMETRY_HPP
