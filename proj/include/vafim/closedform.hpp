// SPDX-License-Identifier: Apache-2.0
//
// Closed-form equivalent FIMs of LOS and single-bounce paths over
// (p_R,x, p_R,y, alpha_R, d_clk) in the asymptotically orthogonal regime,
// where each path contributes only its diagonal delay/AOD/AOA intensities.
//
// The VA of an NLOS path is eliminated analytically:
//
//   J_l = (1 / |J_VA,l|) Z_l M_l Z_l^T,   Z_l = [z_tau, z_aod, z_aoa]
//
// with the geometry entering through
//   A = tan(dtheta/2) / d_T,s      B = 1/d - 1/d_T,s
// and the prior through F, G, P, Q below. Two limits have simpler forms: a
// perfectly known VA behaves like a LOS path (rank 3), an unknown VA leaves a
// rank-1 term along the reflecting surface.

#ifndef VAFIM_CLOSEDFORM_HPP
#define VAFIM_CLOSEDFORM_HPP

#include "vafim/core.hpp"
#include "vafim/errors.hpp"
#include "vafim/geometry.hpp"
#include "vafim/priors.hpp"

#include <cmath>
#include <span>

namespace vafim {

template <typename Scalar = double>
struct ZVectors
{
    Vec4<Scalar> delay; // [-u(aoa); 0; 1]
    Vec4<Scalar> aod;   // [u_perp(aoa); 0; 0]
    Vec4<Scalar> aoa;   // [u_perp(aoa); -d; 0]

    Eigen::Matrix<Scalar, 4, 3> matrix() const
    {
        Eigen::Matrix<Scalar, 4, 3> z;
        z << delay, aod, aoa;
        return z;
    }
};

template <typename Scalar>
ZVectors<Scalar> z_vectors(const PathGeometry<Scalar> &path)
{
    const Vec2<Scalar> u = unit(path.aoa);
    const Vec2<Scalar> u_perp = unit_perp(path.aoa);
    ZVectors<Scalar> z;
    z.delay << -u, Scalar(0), Scalar(1);
    z.aod << u_perp, Scalar(0), Scalar(0);
    z.aoa << u_perp, -path.length, Scalar(0);
    return z;
}

template <typename Scalar = double>
struct MlMatrix
{
    Mat3<Scalar> m = Mat3<Scalar>::Zero();
    Scalar determinant = 0; // |J_VA,l|
    Scalar A = 0;
    Scalar B = 0;
    Scalar F = 0;
    Scalar G = 0;
    Scalar P = 0;
    Scalar Q = 0;
    Scalar angle_difference = 0;
};

namespace detail {

template <typename Scalar>
Scalar checked_half_angle_cos(const PathGeometry<Scalar> &path)
{
    using std::abs;
    using std::cos;
    if (path.is_los)
        throw Error(ErrorCode::invalid_argument, "closed-form VA elimination needs an NLOS path");
    if (!(path.length > Scalar(0)) || !(path.tx_to_incidence > Scalar(0)))
        throw Error(ErrorCode::zero_distance, "path and Tx-to-incidence distances must be positive");
    const Scalar cos_half = cos(path.angle_difference / Scalar(2));
    if (abs(cos_half) < Scalar(1e-12))
        throw Error(ErrorCode::degenerate_geometry, "cos(delta_theta/2) = 0: grazing geometry");
    return cos_half;
}

// (J_tau/c^2) z_tau z_tau^T + (J_aod/d^2) z_aod z_aod^T + (J_aoa/d^2) z_aoa z_aoa^T
template <typename Scalar>
Mat4<Scalar> direct_path_efim(const PathGeometry<Scalar> &path, const DiagonalPathInfo<Scalar> &info)
{
    const ZVectors<Scalar> z = z_vectors(path);
    const Scalar c = Scalar(kSpeedOfLight);
    const Scalar d2 = path.length * path.length;
    return info.delay / (c * c) * z.delay * z.delay.transpose() + info.aod / d2 * z.aod * z.aod.transpose() +
           info.aoa / d2 * z.aoa * z.aoa.transpose();
}

} // namespace detail

/// M_l, |J_VA,l| and the auxiliary constants for a finite VA prior.
template <typename Scalar>
MlMatrix<Scalar> m_matrix(const PathGeometry<Scalar> &path, const DiagonalPathInfo<Scalar> &info,
                          const VaPrior &prior)
{
    using std::tan;
    if (prior.kind != PriorKind::finite)
        throw Error(ErrorCode::invalid_argument, "M_l is defined for finite VA priors only");
    detail::checked_half_angle_cos(path);

    const Scalar c = Scalar(kSpeedOfLight);
    const Scalar d = path.length;
    const Scalar d2 = d * d;
    const Scalar sp = Scalar(prior.sigma_parallel);
    const Scalar ss = Scalar(prior.sigma_perp);
    const Scalar rho = Scalar(prior.rho);
    const Scalar one_m_rho2 = Scalar(1) - rho * rho;

    const Scalar j_tau = info.delay / (c * c); // J_tau / c^2
    const Scalar j_t = info.aod;
    const Scalar j_r = info.aoa / d2; // J_aoa / d^2

    MlMatrix<Scalar> r;
    r.angle_difference = path.angle_difference;
    r.A = tan(path.angle_difference / Scalar(2)) / path.tx_to_incidence;
    r.B = Scalar(1) / d - Scalar(1) / path.tx_to_incidence;
    r.F = j_r + Scalar(1) / (one_m_rho2 * ss * ss);
    r.G = Scalar(1) + Scalar(2) * rho * sp * ss * j_t * r.A * r.B;
    r.P = j_r + Scalar(1) / (ss * ss);
    r.Q = j_tau + Scalar(1) / (one_m_rho2 * sp * sp);

    const Scalar A = r.A, B = r.B, F = r.F, G = r.G, P = r.P, Q = r.Q;
    const Scalar inv_par = Scalar(1) / (one_m_rho2 * sp * sp);  // 1/((1-rho^2) s_par^2)
    const Scalar inv_perp = Scalar(1) / (one_m_rho2 * ss * ss); // 1/((1-rho^2) s_perp^2)
    const Scalar cross = rho / (one_m_rho2 * sp * ss);          // rho/((1-rho^2) s_par s_perp)

    Mat3<Scalar> &m = r.m;
    m(0, 0) = j_tau * (j_t * A * A * F + inv_par * (j_t * B * B + j_r + G / (ss * ss)));
    m(1, 1) = j_t / d2 * (j_tau * F + inv_par * P);
    m(2, 2) = j_r * (j_t * B * B * Q + inv_perp * (j_tau + j_t * A * A + G / (sp * sp)));
    m(0, 1) = m(1, 0) = j_tau * j_t / d * (A * F + B * cross);
    m(0, 2) = m(2, 0) = j_tau * j_r * (cross - j_t * A * B);
    // z_aod is +u_perp(aoa) while d(aod)/dp_R = -u_perp(aoa)/d, hence the sign.
    m(1, 2) = m(2, 1) = -j_t / d * j_r * (B * Q + A * cross);

    r.determinant =
        j_tau * (j_t * B * B + F) + (P + j_t * B * (B + Scalar(2) * rho * A * sp / ss)) * inv_par + j_t * A * A * F;
    return r;
}

/// EFIM of an NLOS path with a finite Gaussian VA prior.
template <typename Scalar>
Mat4<Scalar> nlos_efim(const PathGeometry<Scalar> &path, const DiagonalPathInfo<Scalar> &info, const VaPrior &prior)
{
    const MlMatrix<Scalar> ml = m_matrix(path, info, prior);
    const Eigen::Matrix<Scalar, 4, 3> z = z_vectors(path).matrix();
    return z * ml.m * z.transpose() / ml.determinant;
}

/// Perfectly known VA: the path acts as a LOS path from the VA.
template <typename Scalar>
Mat4<Scalar> nlos_efim_perfect_prior(const PathGeometry<Scalar> &path, const DiagonalPathInfo<Scalar> &info)
{
    return detail::direct_path_efim(path, info);
}

template <typename Scalar = double>
struct NoPriorResult
{
    Scalar intensity = 0; // j_l
    Vec4<Scalar> direction = Vec4<Scalar>::Zero(); // z_l

    Mat4<Scalar> matrix() const { return intensity * direction * direction.transpose(); }
};

/// Unknown VA: rank-1 EFIM j_l z_l z_l^T with position information along the
/// reflecting surface, u_perp(reflector_angle). All three measurements are
/// needed; if any intensity is zero the path contributes nothing.
template <typename Scalar>
NoPriorResult<Scalar> nlos_efim_no_prior(const PathGeometry<Scalar> &path, const DiagonalPathInfo<Scalar> &info)
{
    using std::sin;
    const Scalar cos_half = detail::checked_half_angle_cos(path);
    const Scalar c = Scalar(kSpeedOfLight);
    const Scalar d = path.length;
    const Scalar d_ts = path.tx_to_incidence;

    NoPriorResult<Scalar> r;
    r.direction << unit_perp(path.reflector_angle), -path.incidence_to_rx * cos_half,
        sin(path.angle_difference / Scalar(2));
    if (!(info.delay > Scalar(0) && info.aod > Scalar(0) && info.aoa > Scalar(0)))
        return r;

    using std::tan;
    const Scalar A = tan(path.angle_difference / Scalar(2)) / d_ts;
    const Scalar B = Scalar(1) / d - Scalar(1) / d_ts;
    const Scalar j_r = info.aoa / (d * d);
    // |J_VA,l| with every prior term removed.
    const Scalar determinant = info.delay / (c * c) * (info.aod * B * B + j_r) + info.aod * A * A * j_r;
    r.intensity = info.delay * info.aod * info.aoa /
                  (determinant * c * c * d * d * d_ts * d_ts * cos_half * cos_half);
    return r;
}

/// EFIM of the LOS path.
template <typename Scalar>
Mat4<Scalar> los_efim(const PathGeometry<Scalar> &path, const DiagonalPathInfo<Scalar> &info)
{
    if (!path.is_los)
        throw Error(ErrorCode::invalid_argument, "los_efim needs the LOS path");
    return detail::direct_path_efim(path, info);
}

/// NLOS EFIM for any prior kind.
template <typename Scalar>
Mat4<Scalar> nlos_efim_any(const PathGeometry<Scalar> &path, const DiagonalPathInfo<Scalar> &info,
                           const VaPrior &prior)
{
    switch (prior.kind)
    {
    case PriorKind::perfect:
        return nlos_efim_perfect_prior(path, info);
    case PriorKind::none:
        return nlos_efim_no_prior(path, info).matrix();
    case PriorKind::finite:
        break;
    }
    return nlos_efim(path, info, prior);
}

/// J_poc assembled from per-path closed forms plus the clock prior. A perfect
/// clock prior adds nothing here; remove d_clk with fix_parameters instead.
template <typename Scalar>
Mat4<Scalar> poc_efim_closed_form(std::span<const PathGeometry<Scalar>> paths,
                                  std::span<const DiagonalPathInfo<Scalar>> infos, const PriorSpec &priors)
{
    if (infos.size() != paths.size())
        throw Error(ErrorCode::invalid_argument, "one intensity triple per path is required");
    Mat4<Scalar> efim = Mat4<Scalar>::Zero();
    std::size_t k = 0;
    for (std::size_t l = 0; l < paths.size(); ++l)
    {
        if (paths[l].is_los)
        {
            efim += los_efim(paths[l], infos[l]);
            continue;
        }
        if (k >= priors.anchors.size())
            throw Error(ErrorCode::invalid_argument, "one VA prior per NLOS path is required");
        efim += nlos_efim_any(paths[l], infos[l], priors.anchors[k++]);
    }
    efim(3, 3) += Scalar(priors.clock.information());
    return efim;
}

} // namespace vafim

#endif // VAFIM_CLOSEDFORM_HPP
