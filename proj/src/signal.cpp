// SPDX-License-Identifier: Apache-2.0

#include "vafim/signal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace vafim {

namespace {

constexpr std::complex<double> kJ{0.0, 1.0};

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Uniform [0, 1) from the top 53 bits; identical on every platform.
double unit_interval(std::uint64_t bits)
{
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

double angular_frequency(const OfdmConfig &config, int subcarrier)
{
    return 2.0 * std::numbers::pi * static_cast<double>(subcarrier) * config.spacing_hz;
}

void require_subcarrier(const OfdmConfig &config, int subcarrier)
{
    if (std::find(config.subcarriers.begin(), config.subcarriers.end(), subcarrier) == config.subcarriers.end())
        throw Error(ErrorCode::subcarrier_not_in_use, "subcarrier " + std::to_string(subcarrier) + " is not in P");
}

} // namespace

double OfdmConfig::bandwidth() const
{
    if (subcarriers.empty())
        return 0.0;
    const auto [lo, hi] = std::minmax_element(subcarriers.begin(), subcarriers.end());
    return spacing_hz * static_cast<double>(*hi - *lo);
}

void OfdmConfig::validate() const
{
    if (subcarriers.empty())
        throw Error(ErrorCode::invalid_argument, "subcarrier set P is empty");
    if (!(spacing_hz > 0.0) || !(carrier_hz > 0.0) || n_subcarriers <= 0)
        throw Error(ErrorCode::invalid_argument, "carrier, spacing and subcarrier count must be positive");
    for (int p : subcarriers)
        if (p < -n_subcarriers / 2 || p >= n_subcarriers / 2)
            throw Error(ErrorCode::invalid_argument, "subcarrier " + std::to_string(p) + " outside [-N/2, N/2)");
}

std::vector<int> OfdmConfig::symmetric_subcarriers(int k)
{
    std::vector<int> p;
    for (int i = -k; i <= k; ++i)
        if (i != 0)
            p.push_back(i);
    return p;
}

const Eigen::VectorXcd &PilotSignal::at(int subcarrier) const
{
    const auto it = std::find(subcarriers.begin(), subcarriers.end(), subcarrier);
    if (it == subcarriers.end())
        throw Error(ErrorCode::subcarrier_not_in_use, "no pilot on subcarrier " + std::to_string(subcarrier));
    return symbols[static_cast<std::size_t>(it - subcarriers.begin())];
}

double dbm_to_mw(double dbm)
{
    return std::pow(10.0, 0.1 * dbm);
}

PilotSignal make_pilot(const OfdmConfig &config, std::size_t n_tx)
{
    PilotSignal pilot;
    pilot.subcarriers = config.subcarriers;
    std::mt19937_64 engine(config.pilot_seed);
    const double amplitude = std::sqrt(dbm_to_mw(config.tx_power_dbm) / static_cast<double>(n_tx));
    for (std::size_t i = 0; i < config.subcarriers.size(); ++i)
    {
        Eigen::VectorXcd x(static_cast<Eigen::Index>(n_tx));
        for (auto &entry : x)
            entry = std::polar(amplitude, 2.0 * std::numbers::pi * unit_interval(engine()));
        pilot.symbols.push_back(std::move(x));
    }
    return pilot;
}

Eigen::VectorXcd steering_vector(const ArrayGeometry &array, double angle, double carrier_hz)
{
    const double wave_number = 2.0 * std::numbers::pi * carrier_hz / kSpeedOfLight;
    Eigen::VectorXcd a(static_cast<Eigen::Index>(array.size()));
    for (std::size_t j = 0; j < array.size(); ++j)
    {
        const ArrayElement &e = array.elements[j];
        a(static_cast<Eigen::Index>(j)) = std::exp(kJ * wave_number * e.distance * std::cos(angle - e.angle));
    }
    return a;
}

Eigen::VectorXcd steering_vector_derivative(const ArrayGeometry &array, double angle, double carrier_hz)
{
    const double wave_number = 2.0 * std::numbers::pi * carrier_hz / kSpeedOfLight;
    Eigen::VectorXcd a = steering_vector(array, angle, carrier_hz);
    for (std::size_t j = 0; j < array.size(); ++j)
    {
        const ArrayElement &e = array.elements[j];
        a(static_cast<Eigen::Index>(j)) *= -kJ * wave_number * e.distance * std::sin(angle - e.angle);
    }
    return a;
}

Eigen::VectorXcd mean_signal(const OfdmConfig &config, const ChannelParams &params, const ArrayGeometry &tx,
                             const ArrayGeometry &rx, const PilotSignal &pilot, int subcarrier)
{
    require_subcarrier(config, subcarrier);
    const Eigen::VectorXcd &x = pilot.at(subcarrier);
    const double w = angular_frequency(config, subcarrier);
    Eigen::VectorXcd m = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(rx.size()));
    for (const PathParams &path : params)
    {
        const std::complex<double> tx_response = steering_vector(tx, path.aod, config.carrier_hz).cwiseProduct(x).sum();
        m += path.gain * std::exp(-kJ * w * path.delay) * tx_response *
             steering_vector(rx, path.aoa, config.carrier_hz);
    }
    return m;
}

Eigen::MatrixXcd mean_signal_gradient(const OfdmConfig &config, const ChannelParams &params, const ArrayGeometry &tx,
                                      const ArrayGeometry &rx, const PilotSignal &pilot, int subcarrier)
{
    require_subcarrier(config, subcarrier);
    const Eigen::VectorXcd &x = pilot.at(subcarrier);
    const double w = angular_frequency(config, subcarrier);
    Eigen::MatrixXcd g(static_cast<Eigen::Index>(rx.size()), kParamsPerPath * static_cast<Eigen::Index>(params.size()));
    for (std::size_t l = 0; l < params.size(); ++l)
    {
        const PathParams &path = params[l];
        const std::complex<double> delay_phase = std::exp(-kJ * w * path.delay);
        const std::complex<double> tx_response = steering_vector(tx, path.aod, config.carrier_hz).cwiseProduct(x).sum();
        const std::complex<double> tx_response_d =
            steering_vector_derivative(tx, path.aod, config.carrier_hz).cwiseProduct(x).sum();
        const Eigen::VectorXcd a_rx = steering_vector(rx, path.aoa, config.carrier_hz);
        const Eigen::VectorXcd a_rx_d = steering_vector_derivative(rx, path.aoa, config.carrier_hz);

        const Eigen::VectorXcd unit_gain_term = delay_phase * tx_response * a_rx;
        const Eigen::Index c = kParamsPerPath * static_cast<Eigen::Index>(l);
        g.col(c + 0) = -kJ * w * path.gain * unit_gain_term;
        g.col(c + 1) = path.gain * delay_phase * tx_response_d * a_rx;
        g.col(c + 2) = path.gain * delay_phase * tx_response * a_rx_d;
        g.col(c + 3) = unit_gain_term;
        g.col(c + 4) = kJ * unit_gain_term;
    }
    return g;
}

std::complex<double> path_gain(double distance, double gamma, double carrier_hz, std::uint64_t phase_seed)
{
    if (!(distance > 0.0))
        throw Error(ErrorCode::zero_distance, "path length must be positive");
    if (!(gamma >= 0.0 && gamma <= 1.0))
        throw Error(ErrorCode::invalid_argument, "reflection coefficient must lie in [0, 1]");
    const double wavelength = kSpeedOfLight / carrier_hz;
    const double magnitude = std::sqrt(gamma) * wavelength / (4.0 * std::numbers::pi * distance);
    const double phase = 2.0 * std::numbers::pi * unit_interval(splitmix64(phase_seed));
    return std::polar(magnitude, phase);
}

double noise_variance(const OfdmConfig &config)
{
    return std::pow(10.0, 0.1 * (config.noise_figure_db + config.noise_psd_dbm_hz)) *
           static_cast<double>(config.n_subcarriers) * config.spacing_hz;
}

NarrowbandCheck narrowband_check(const OfdmConfig &config, const ArrayGeometry &tx, const ArrayGeometry &rx)
{
    NarrowbandCheck check;
    check.fractional_bandwidth = config.bandwidth() / config.carrier_hz;
    const double aperture = std::max(tx.max_dimension(), rx.max_dimension());
    check.aperture_ratio =
        aperture > 0.0 ? config.wavelength() / aperture : std::numeric_limits<double>::infinity();
    check.satisfied = check.fractional_bandwidth < check.aperture_ratio;
    return check;
}

std::uint64_t path_phase_seed(std::uint64_t base_seed, std::optional<std::size_t> reflector)
{
    const std::uint64_t key = reflector ? static_cast<std::uint64_t>(*reflector) + 1u : 0u;
    return splitmix64(base_seed ^ splitmix64(key));
}

ChannelParams channel_params(std::span<const PathGeometry<double>> paths, const OfdmConfig &config,
                             std::span<const double> gammas)
{
    if (gammas.size() != paths.size())
        throw Error(ErrorCode::invalid_argument, "one reflection coefficient per path is required");
    ChannelParams params;
    params.reserve(paths.size());
    for (std::size_t l = 0; l < paths.size(); ++l)
    {
        const PathGeometry<double> &g = paths[l];
        params.push_back({g.delay, g.local_aod, g.local_aoa,
                          path_gain(g.length, gammas[l], config.carrier_hz,
                                    path_phase_seed(config.pilot_seed, g.reflector))});
    }
    return params;
}

} // namespace vafim
