// SPDX-License-Identifier: Apache-2.0

#include "vafim/priors.hpp"

namespace vafim {

VaPrior VaPrior::finite(double sigma_parallel, double sigma_perp, double rho)
{
    if (!(sigma_parallel > 0.0) || !(sigma_perp > 0.0) || !std::isfinite(sigma_parallel) ||
        !std::isfinite(sigma_perp))
        throw Error(ErrorCode::invalid_argument, "VA prior standard deviations must be positive and finite");
    if (!(std::abs(rho) < 1.0 - 1e-12))
        throw Error(ErrorCode::singular_prior_covariance, "VA prior correlation must satisfy |rho| < 1");
    return {PriorKind::finite, sigma_parallel, sigma_perp, rho};
}

ClockPrior ClockPrior::finite(double sigma_s)
{
    if (!(sigma_s > 0.0) || !std::isfinite(sigma_s))
        throw Error(ErrorCode::invalid_argument, "clock prior standard deviation must be positive and finite");
    return {PriorKind::finite, sigma_s};
}

double ClockPrior::information() const
{
    if (kind != PriorKind::finite)
        return 0.0;
    const double sigma_m = kSpeedOfLight * sigma_s;
    return 1.0 / (sigma_m * sigma_m);
}

} // namespace vafim
