// SPDX-License-Identifier: Apache-2.0
//
// OFDM observation model: steering vectors, noise-free received signal and its
// analytic derivatives with respect to the channel parameters.

#ifndef VAFIM_SIGNAL_HPP
#define VAFIM_SIGNAL_HPP

#include "vafim/geometry.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace vafim {

struct OfdmConfig
{
    double carrier_hz = 38e9;
    int n_subcarriers = 1024;
    double spacing_hz = 120e3;
    std::vector<int> subcarriers; // P, ordered
    double tx_power_dbm = 0.0;    // E[||x[p]||^2] per subcarrier
    double noise_figure_db = 8.0;
    double noise_psd_dbm_hz = -174.0;
    std::uint64_t pilot_seed = 1;

    double wavelength() const { return kSpeedOfLight / carrier_hz; }

    // B ~ spacing * (max P - min P)
    double bandwidth() const;

    // Throws Error(invalid_argument) when an invariant is violated.
    void validate() const;

    // {-k, ..., -1, 1, ..., k}
    static std::vector<int> symmetric_subcarriers(int k);
};

// Channel parameters of one path; angles are local to the arrays.
struct PathParams
{
    double delay = 0.0;
    double aod = 0.0;
    double aoa = 0.0;
    std::complex<double> gain{0.0, 0.0};
};

// Parameter ordering per path: (tau, aod, aoa, Re h, Im h).
using ChannelParams = std::vector<PathParams>;
inline constexpr int kParamsPerPath = 5;

struct PilotSignal
{
    std::vector<int> subcarriers;
    std::vector<Eigen::VectorXcd> symbols;

    // Throws Error(subcarrier_not_in_use).
    const Eigen::VectorXcd &at(int subcarrier) const;
};

/// Constant-modulus pilots with seeded uniform phases; ||x[p]||^2 equals the
/// configured transmit power in mW.
PilotSignal make_pilot(const OfdmConfig &config, std::size_t n_tx);

double dbm_to_mw(double dbm);

/// a(theta)_j = exp(j w_c d_j u(psi_j)^T u(theta) / c)
Eigen::VectorXcd steering_vector(const ArrayGeometry &array, double angle, double carrier_hz);

/// d a(theta) / d theta
Eigen::VectorXcd steering_vector_derivative(const ArrayGeometry &array, double angle, double carrier_hz);

/// m[p] = sum_l h_l e^{-j w_p tau_l} a_R(aoa_l) a_T^T(aod_l) x[p]
Eigen::VectorXcd mean_signal(const OfdmConfig &config, const ChannelParams &params, const ArrayGeometry &tx,
                             const ArrayGeometry &rx, const PilotSignal &pilot, int subcarrier);

/// N_R x 5L matrix of dm[p]/dphi in the per-path order (tau, aod, aoa, Re h, Im h).
Eigen::MatrixXcd mean_signal_gradient(const OfdmConfig &config, const ChannelParams &params, const ArrayGeometry &tx,
                                      const ArrayGeometry &rx, const PilotSignal &pilot, int subcarrier);

/// Free-space gain with reflection coefficient `gamma` and a seeded uniform phase.
std::complex<double> path_gain(double distance, double gamma, double carrier_hz, std::uint64_t phase_seed);

/// sigma^2 = 10^{0.1 (n_Rx + N_0)} N spacing, in mW.
double noise_variance(const OfdmConfig &config);

struct NarrowbandCheck
{
    double fractional_bandwidth = 0.0; // B / f_c
    double aperture_ratio = 0.0;       // lambda_c / D_max (infinite for point arrays)
    bool satisfied = true;             // B/f_c < lambda_c/D_max
};

NarrowbandCheck narrowband_check(const OfdmConfig &config, const ArrayGeometry &tx, const ArrayGeometry &rx);

/// Seed of the gain phase of a path; LOS has no reflector.
std::uint64_t path_phase_seed(std::uint64_t base_seed, std::optional<std::size_t> reflector);

/// Channel parameters of the given paths. `gammas[l]` is the reflection
/// coefficient of path l (1 for LOS).
ChannelParams channel_params(std::span<const PathGeometry<double>> paths, const OfdmConfig &config,
                             std::span<const double> gammas);

} // namespace vafim

#endif // VAFIM_SIGNAL_HPP
