// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

#include <random>

using namespace vafim;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

OfdmConfig small_ofdm()
{
    OfdmConfig c;
    c.n_subcarriers = 64;
    c.subcarriers = OfdmConfig::symmetric_subcarriers(8);
    c.pilot_seed = 5;
    return c;
}

ChannelParams two_paths()
{
    return {{45e-9, 0.3, -2.1, {1e-5, -2e-5}}, {80e-9, -0.9, 1.4, {-3e-6, 4e-6}}};
}

} // namespace

TEST_CASE("noise variance of the room scenario")
{
    OfdmConfig c;
    c.subcarriers = OfdmConfig::symmetric_subcarriers(420);
    const double oracle = std::pow(10.0, (-174.0 + 8.0) / 10.0) * 1024 * 120e3;
    CHECK(noise_variance(c) == Approx(oracle).epsilon(1e-12));
    CHECK(noise_variance(c) == Approx(3.0866e-9).epsilon(1e-4));
    CHECK(c.bandwidth() == Approx(840 * 120e3));
}

TEST_CASE("free-space path gain")
{
    const double lambda = kSpeedOfLight / 38e9;
    const std::complex<double> h = path_gain(13.46291201783626, 0.1, 38e9, 3);
    CHECK(std::abs(h) == Approx(std::sqrt(0.1) * lambda / (4 * kPi * 13.46291201783626)));
    CHECK(std::abs(h) == Approx(1.4747e-5).epsilon(1e-4));
    CHECK(path_gain(5.0, 1.0, 38e9, 3) == path_gain(5.0, 1.0, 38e9, 3));
    CHECK(std::arg(path_gain(5.0, 1.0, 38e9, 3)) != Approx(std::arg(path_gain(5.0, 1.0, 38e9, 4))));
    CHECK_THROWS_AS(path_gain(0.0, 1.0, 38e9, 1), Error);
    CHECK_THROWS_AS(path_gain(1.0, 1.5, 38e9, 1), Error);
}

TEST_CASE("pilot power and determinism")
{
    OfdmConfig c = small_ofdm();
    c.tx_power_dbm = 3.0;
    const PilotSignal a = make_pilot(c, 8);
    const PilotSignal b = make_pilot(c, 8);
    REQUIRE(a.symbols.size() == c.subcarriers.size());
    for (std::size_t i = 0; i < a.symbols.size(); ++i)
    {
        CHECK(a.symbols[i].squaredNorm() == Approx(dbm_to_mw(3.0)));
        CHECK(a.symbols[i].isApprox(b.symbols[i], 0.0));
    }
    CHECK_THROWS_AS(a.at(0), Error);
    CHECK_THROWS_AS(a.at(100), Error);
}

TEST_CASE("steering vectors")
{
    const double lambda = kSpeedOfLight / 38e9;
    const ArrayGeometry ula = ArrayGeometry::ula(8, lambda / 2);
    const Eigen::VectorXcd broadside = steering_vector(ula, 0.0, 38e9);
    CHECK((broadside - Eigen::VectorXcd::Ones(8)).norm() < 1e-12);

    // Endfire: adjacent elements differ by a phase of pi.
    const Eigen::VectorXcd endfire = steering_vector(ula, kPi / 2, 38e9);
    for (int j = 0; j + 1 < 8; ++j)
        CHECK(std::abs(std::arg(endfire(j + 1) / endfire(j))) == Approx(kPi));

    const ArrayGeometry single = ArrayGeometry::single();
    CHECK(steering_vector(single, 1.234, 38e9)(0) == std::complex<double>(1.0, 0.0));

    const ArrayGeometry uca = ArrayGeometry::uca(16, lambda / (4 * std::sin(kPi / 16)));
    for (double angle : {-2.0, 0.1, 1.3})
    {
        const double h = 1e-6;
        const Eigen::VectorXcd fd =
            (steering_vector(uca, angle + h, 38e9) - steering_vector(uca, angle - h, 38e9)) / (2 * h);
        const Eigen::VectorXcd analytic = steering_vector_derivative(uca, angle, 38e9);
        CHECK((fd - analytic).norm() / analytic.norm() < 1e-7);
    }
}

TEST_CASE("mean signal is the superposition of the paths")
{
    const OfdmConfig c = small_ofdm();
    const double lambda = c.wavelength();
    const ArrayGeometry tx = ArrayGeometry::ula(4, lambda / 2);
    const ArrayGeometry rx = ArrayGeometry::uca(6, lambda / (4 * std::sin(kPi / 6)));
    const PilotSignal pilot = make_pilot(c, tx.size());
    const ChannelParams both = two_paths();
    for (int p : {-8, -1, 3, 8})
    {
        const Eigen::VectorXcd sum = mean_signal(c, {both[0]}, tx, rx, pilot, p) + mean_signal(c, {both[1]}, tx, rx, pilot, p);
        CHECK((mean_signal(c, both, tx, rx, pilot, p) - sum).norm() < 1e-18);
    }
    CHECK_THROWS_AS(mean_signal(c, both, tx, rx, pilot, 0), Error);
    CHECK_THROWS_AS(mean_signal(c, both, tx, rx, pilot, 30), Error);
}

TEST_CASE("single-antenna mean signal in closed form")
{
    OfdmConfig c = small_ofdm();
    const ArrayGeometry one = ArrayGeometry::single();
    const PilotSignal pilot = make_pilot(c, 1);
    const PathParams path{40e-9, 0.0, 0.0, {2e-5, 1e-5}};
    const int p = 5;
    const std::complex<double> expected =
        path.gain * std::exp(std::complex<double>(0, -2 * kPi * p * c.spacing_hz * path.delay)) * pilot.at(p)(0);
    CHECK(std::abs(mean_signal(c, {path}, one, one, pilot, p)(0) - expected) < 1e-18);
}

TEST_CASE("mean signal gradient matches central differences")
{
    const OfdmConfig c = small_ofdm();
    const double lambda = c.wavelength();
    const ArrayGeometry tx = ArrayGeometry::ula(4, lambda / 2);
    const ArrayGeometry rx = ArrayGeometry::uca(6, lambda / (4 * std::sin(kPi / 6)));
    const PilotSignal pilot = make_pilot(c, tx.size());
    const ChannelParams base = two_paths();
    const double steps[] = {1e-12, 1e-6, 1e-6, 1e-9, 1e-9};

    for (int p : {-8, 2, 7})
    {
        const Eigen::MatrixXcd g = mean_signal_gradient(c, base, tx, rx, pilot, p);
        for (std::size_t l = 0; l < base.size(); ++l)
            for (int i = 0; i < kParamsPerPath; ++i)
            {
                ChannelParams plus = base, minus = base;
                const double h = steps[i];
                auto bump = [&](ChannelParams &ps, double s) {
                    PathParams &q = ps[l];
                    switch (i)
                    {
                    case 0: q.delay += s; break;
                    case 1: q.aod += s; break;
                    case 2: q.aoa += s; break;
                    case 3: q.gain += std::complex<double>(s, 0); break;
                    default: q.gain += std::complex<double>(0, s); break;
                    }
                };
                bump(plus, h);
                bump(minus, -h);
                const Eigen::VectorXcd fd =
                    (mean_signal(c, plus, tx, rx, pilot, p) - mean_signal(c, minus, tx, rx, pilot, p)) / (2 * h);
                const Eigen::VectorXcd analytic = g.col(static_cast<Eigen::Index>(kParamsPerPath * l + i));
                CHECK((fd - analytic).norm() / analytic.norm() < 1e-6);
            }
    }
}

TEST_CASE("narrowband check of the room arrays")
{
    const Experiment e = testing::room_experiment();
    const NarrowbandCheck nb = narrowband_check(e.ofdm, e.scenario.tx_array, e.scenario.rx_array);
    CHECK(nb.fractional_bandwidth == Approx(840 * 120e3 / 38e9));
    CHECK(nb.aperture_ratio == Approx(1.0 / 15.5));
    CHECK(nb.satisfied);
}

TEST_CASE("OFDM configuration validation")
{
    OfdmConfig c = small_ofdm();
    CHECK_NOTHROW(c.validate());
    c.subcarriers.push_back(40);
    CHECK_THROWS_AS(c.validate(), Error);
    c.subcarriers.clear();
    CHECK_THROWS_AS(c.validate(), Error);
    CHECK(OfdmConfig::symmetric_subcarriers(2) == std::vector<int>{-2, -1, 1, 2});
}

TEST_CASE("channel parameters use local angles and reflector-specific phases")
{
    Experiment e = testing::room_experiment();
    e.scenario.rx_orientation = 0.4;
    const auto paths = path_geometries(e.scenario);
    const auto params = channel_params(paths, e.ofdm, e.path_gammas());
    REQUIRE(params.size() == 4);
    for (std::size_t l = 0; l < paths.size(); ++l)
    {
        CHECK(params[l].aoa == Approx(wrap_angle(paths[l].aoa - 0.4)));
        CHECK(params[l].delay == paths[l].delay);
    }
    CHECK(std::abs(params[0].gain) == Approx(e.ofdm.wavelength() / (4 * kPi * paths[0].length)));
    CHECK(path_phase_seed(1, std::nullopt) != path_phase_seed(1, 0));
}
