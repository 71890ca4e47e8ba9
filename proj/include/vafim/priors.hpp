// SPDX-License-Identifier: Apache-2.0
//
// Gaussian prior knowledge of the clock offset and of virtual-anchor positions.

#ifndef VAFIM_PRIORS_HPP
#define VAFIM_PRIORS_HPP

#include "vafim/core.hpp"
#include "vafim/errors.hpp"

#include <cmath>
#include <vector>

namespace vafim {

enum class PriorKind
{
    none,    // no prior information
    finite,  // Gaussian with the given spread
    perfect, // exactly known
};

// Prior on one VA position. The covariance is expressed in the rotated basis
// [u(aoa), u_perp(aoa)] of the path's AOA: sigma_parallel along the
// Rx-to-VA direction, sigma_perp across it, rho their correlation.
struct VaPrior
{
    PriorKind kind = PriorKind::none;
    double sigma_parallel = 0.0; // [m]
    double sigma_perp = 0.0;     // [m]
    double rho = 0.0;

    static VaPrior none() { return {}; }
    static VaPrior perfect() { return {PriorKind::perfect, 0.0, 0.0, 0.0}; }
    static VaPrior finite(double sigma_parallel, double sigma_perp, double rho = 0.0);

    // sigma_parallel = sigma_perp = sigma_ref / sqrt(2), rho = 0.
    static VaPrior isotropic(double sigma_ref) { return finite(sigma_ref / std::sqrt(2.0), sigma_ref / std::sqrt(2.0)); }
};

struct ClockPrior
{
    PriorKind kind = PriorKind::none;
    double sigma_s = 0.0; // std. dev. of eps_clk [s]

    static ClockPrior none() { return {}; }
    static ClockPrior perfect() { return {PriorKind::perfect, 0.0}; }
    static ClockPrior finite(double sigma_s);

    // Information on d_clk [m^-2]: 1/(c sigma)^2, zero without a prior.
    // Perfect knowledge is handled by removing d_clk, so it also returns zero.
    double information() const;
};

// One VaPrior per NLOS path, in path order.
struct PriorSpec
{
    ClockPrior clock;
    std::vector<VaPrior> anchors;
};

/// Covariance of a finite VA prior in global coordinates.
template <typename Scalar>
Mat2<Scalar> va_prior_covariance(const VaPrior &prior, Scalar aoa)
{
    Mat2<Scalar> basis;
    basis << unit(aoa), unit_perp(aoa);
    const Scalar sp = Scalar(prior.sigma_parallel);
    const Scalar ss = Scalar(prior.sigma_perp);
    const Scalar rho = Scalar(prior.rho);
    Mat2<Scalar> local;
    local << sp * sp, rho * sp * ss, rho * sp * ss, ss * ss;
    return basis * local * basis.transpose();
}

/// Inverse of va_prior_covariance(); zero for PriorKind::none.
template <typename Scalar>
Mat2<Scalar> va_prior_information(const VaPrior &prior, Scalar aoa)
{
    if (prior.kind != PriorKind::finite)
        return Mat2<Scalar>::Zero();
    Mat2<Scalar> basis;
    basis << unit(aoa), unit_perp(aoa);
    const Scalar sp = Scalar(prior.sigma_parallel);
    const Scalar ss = Scalar(prior.sigma_perp);
    const Scalar rho = Scalar(prior.rho);
    const Scalar scale = Scalar(1) / (Scalar(1) - rho * rho);
    Mat2<Scalar> local;
    local << scale / (sp * sp), -scale * rho / (sp * ss), -scale * rho / (sp * ss), scale / (ss * ss);
    return basis * local * basis.transpose();
}

} // namespace vafim

#endif // VAFIM_PRIORS_HPP
