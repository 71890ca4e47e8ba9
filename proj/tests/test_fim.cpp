// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace vafim;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

Matrix random_spd(Index n, unsigned seed)
{
    std::srand(seed);
    const Matrix a = Matrix::Random(n, n);
    return a * a.transpose() + 0.5 * Matrix::Identity(n, n);
}

// dphi/dparams by central differences over the position parameters.
Matrix finite_difference_T(const Scenario &s)
{
    const Eigen::VectorXd x = position_parameters(s);
    const auto base = paths_from_parameters(s.tx_position, s.tx_orientation, s.paths.include_los, x);
    Matrix T = Matrix::Zero(x.size(), kParamsPerPath * static_cast<Index>(base.size()));
    for (Index i = 0; i < x.size(); ++i)
    {
        const double h = 1e-6;
        Eigen::VectorXd xp = x, xm = x;
        xp(i) += h;
        xm(i) -= h;
        const auto p = paths_from_parameters(s.tx_position, s.tx_orientation, s.paths.include_los, xp);
        const auto m = paths_from_parameters(s.tx_position, s.tx_orientation, s.paths.include_los, xm);
        for (std::size_t l = 0; l < base.size(); ++l)
        {
            const Index c = kParamsPerPath * static_cast<Index>(l);
            T(i, c + 0) = (p[l].delay - m[l].delay) / (2 * h);
            T(i, c + 1) = wrap_angle(p[l].local_aod - m[l].local_aod) / (2 * h);
            T(i, c + 2) = wrap_angle(p[l].local_aoa - m[l].local_aoa) / (2 * h);
        }
    }
    return T;
}

Experiment small_room()
{
    Experiment e = testing::room_experiment();
    e.ofdm.subcarriers = OfdmConfig::symmetric_subcarriers(60);
    return e;
}

} // namespace

TEST_CASE("Schur complement equals the inverse of the inverse block")
{
    const Matrix m = random_spd(7, 3);
    const std::vector<Index> keep{0, 1, 2}, eliminate{3, 4, 5, 6};
    CHECK(testing::relative_error(schur_complement(m, keep, eliminate), testing::schur_by_inverse(m, 3)) < 1e-12);
    const std::vector<Index> none;
    CHECK(schur_complement(m, keep, none).isApprox(m.topLeftCorner(3, 3)));
}

TEST_CASE("channel FIM is symmetric positive semidefinite and matches a direct sum")
{
    Experiment e = small_room();
    const Matrix j = experiment_channel_fim(e);
    CHECK(j.rows() == 20);
    CHECK((j - j.transpose()).norm() == 0.0);
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(j);
    CHECK(eig.eigenvalues().minCoeff() > -1e-9 * eig.eigenvalues().maxCoeff());

    // Direct oracle for one entry: 2/sigma^2 sum_p Re{g_i^H g_j}.
    const auto paths = path_geometries(e.scenario);
    const auto params = channel_params(paths, e.ofdm, e.path_gammas());
    const PilotSignal pilot = make_pilot(e.ofdm, e.scenario.tx_array.size());
    double entry = 0.0;
    for (int p : e.ofdm.subcarriers)
    {
        const Eigen::MatrixXcd g = mean_signal_gradient(e.ofdm, params, e.scenario.tx_array, e.scenario.rx_array, pilot, p);
        entry += g.col(0).dot(g.col(7)).real();
    }
    entry *= 2.0 / noise_variance(e.ofdm);
    CHECK(j(0, 7) == Approx(entry).epsilon(1e-10));
}

TEST_CASE("gain EFIM and asymptotic intensities")
{
    Experiment e = small_room();
    const Matrix j = experiment_channel_fim(e);
    const Matrix efim = gain_efim(j);
    CHECK(efim.rows() == 12);

    // Oracle: reorder to [geometric, gains] and invert.
    std::vector<Index> order;
    for (Index l = 0; l < 4; ++l)
        for (Index i = 0; i < 3; ++i)
            order.push_back(5 * l + i);
    for (Index l = 0; l < 4; ++l)
        for (Index i = 3; i < 5; ++i)
            order.push_back(5 * l + i);
    const Matrix reordered = j(order, order);
    CHECK(testing::relative_error(efim, testing::schur_by_inverse(reordered, 12)) < 1e-8);

    const auto infos = asymptotic_path_info(j);
    REQUIRE(infos.size() == 4);
    for (std::size_t l = 0; l < 4; ++l)
    {
        const Matrix block = j.block(5 * static_cast<Index>(l), 5 * static_cast<Index>(l), 5, 5);
        const Matrix oracle = testing::schur_by_inverse(block, 3);
        CHECK(infos[l].delay == Approx(oracle(0, 0)).epsilon(1e-8));
        CHECK(infos[l].aod == Approx(oracle(1, 1)).epsilon(1e-8));
        CHECK(infos[l].aoa == Approx(oracle(2, 2)).epsilon(1e-8));
        CHECK(infos[l].delay > 0.0);
    }

    const Matrix asym = asymptotic_channel_fim(j);
    CHECK(asym(0, 1) == 0.0);
    CHECK(asym(0, 5) == 0.0);
    CHECK(asym(0, 0) == infos[0].delay);
}

TEST_CASE("analytic T matches finite differences of the geometry")
{
    Scenario s = testing::room_experiment().scenario;
    s.tx_orientation = 0.3;
    s.rx_orientation = -1.1;
    s.clock_offset = 2.0;
    for (bool los : {true, false})
    {
        s.paths.include_los = los;
        const Matrix T = jacobian_T(s);
        const Matrix fd = finite_difference_T(s);
        CHECK(T.rows() == 4 + 2 * 3);
        for (Index c = 0; c < T.cols(); ++c)
        {
            if (c % 5 >= 3)
            {
                CHECK(T.col(c).norm() == 0.0);
                continue;
            }
            CHECK((T.col(c) - fd.col(c)).norm() / T.col(c).norm() < 1e-6);
        }
    }
}

TEST_CASE("prior information is the inverse covariance")
{
    const VaPrior prior = VaPrior::finite(0.3, 1.7, -0.6);
    const Mat2<double> cov = va_prior_covariance(prior, 0.9);
    const Mat2<double> info = va_prior_information(prior, 0.9);
    CHECK((cov * info - Mat2<double>::Identity()).norm() < 1e-12);
    CHECK(va_prior_information(VaPrior::none(), 0.9).norm() == 0.0);
    CHECK(va_prior_information(VaPrior::perfect(), 0.9).norm() == 0.0);

    const Mat2<double> iso = va_prior_covariance(VaPrior::isotropic(2.0), 0.4);
    CHECK((iso - 2.0 * Mat2<double>::Identity()).norm() < 1e-12);

    CHECK_THROWS_AS(VaPrior::finite(1.0, 1.0, 1.0), Error);
    CHECK_THROWS_AS(VaPrior::finite(0.0, 1.0, 0.0), Error);
    try
    {
        VaPrior::finite(1.0, 1.0, -1.0);
    }
    catch (const Error &e)
    {
        CHECK(e.code() == ErrorCode::singular_prior_covariance);
    }
}

TEST_CASE("clock prior information")
{
    CHECK(ClockPrior::none().information() == 0.0);
    CHECK(ClockPrior::perfect().information() == 0.0);
    const double sigma = 1e-9;
    CHECK(ClockPrior::finite(sigma).information() == Approx(1.0 / (kSpeedOfLight * kSpeedOfLight * sigma * sigma)));
    CHECK_THROWS_AS(ClockPrior::finite(-1.0), Error);
}

TEST_CASE("EFIM of the PoC parameters equals the inverse-block oracle")
{
    Experiment e = small_room();
    e.clock = ClockPrior::finite(2e-9);
    e.reflector_priors = {VaPrior::finite(0.5, 0.2, 0.3), VaPrior::isotropic(1.0), VaPrior::finite(2.0, 1.0, -0.4)};
    const auto paths = path_geometries(e.scenario);
    const PriorSpec priors = e.priors();
    const Matrix hybrid = hybrid_fim(experiment_channel_fim(e), jacobian_T(paths, e.scenario.tx_position), priors, paths);
    CHECK(hybrid.rows() == 10);
    CHECK(hybrid(3, 3) > priors.clock.information());
    const Matrix poc = efim_poc(hybrid, priors);
    CHECK(testing::relative_error(poc, testing::schur_by_inverse(hybrid, 4)) < 1e-8);
}

TEST_CASE("perfectly known VAs are removed rather than eliminated")
{
    Experiment e = small_room();
    e.reflector_priors = {VaPrior::perfect(), VaPrior::perfect(), VaPrior::perfect()};
    const auto paths = path_geometries(e.scenario);
    const PriorSpec priors = e.priors();
    const Matrix hybrid = hybrid_fim(experiment_channel_fim(e), jacobian_T(paths, e.scenario.tx_position), priors, paths);
    CHECK(efim_poc(hybrid, priors).isApprox(Matrix(hybrid.topLeftCorner(4, 4))));
}

TEST_CASE("adding prior information increases the EFIM in Loewner order")
{
    Experiment e = small_room();
    const auto paths = path_geometries(e.scenario);
    const Matrix j = experiment_channel_fim(e);
    const Matrix T = jacobian_T(paths, e.scenario.tx_position);
    PriorSpec loose, tight;
    loose.anchors.assign(3, VaPrior::isotropic(10.0));
    tight.anchors.assign(3, VaPrior::isotropic(0.1));
    const Matrix a = efim_poc(hybrid_fim(j, T, tight, paths), tight);
    const Matrix b = efim_poc(hybrid_fim(j, T, loose, paths), loose);
    CHECK(loewner_margin(a, b) > -1e-10 * a.norm());
    CHECK(loewner_margin(b, a) < 0.0);
}

TEST_CASE("PEB scales with the inverse square root of the information")
{
    const Matrix m = random_spd(4, 11);
    const double base = rx_peb(m);
    CHECK(rx_peb(4.0 * m) == Approx(base / 2.0));
    const Matrix inv = m.inverse();
    CHECK(base == Approx(std::sqrt(inv(0, 0) + inv(1, 1))));
    const Index all[] = {0, 1, 2, 3};
    CHECK(peb(m, all) == Approx(std::sqrt(inv.trace())));
}

TEST_CASE("singular FIMs report their null direction")
{
    Matrix m = Matrix::Zero(3, 3);
    m(0, 0) = 2.0;
    m(2, 2) = 5.0;
    try
    {
        spd_inverse(m);
        FAIL("expected SingularFimError");
    }
    catch (const SingularFimError &e)
    {
        CHECK(e.code() == ErrorCode::singular_fim);
        CHECK(std::abs(e.null_direction()(1)) == Approx(1.0));
        CHECK(e.rcond() < kSingularRcond);
    }
    CHECK(reciprocal_condition(m) == 0.0);
    CHECK(reciprocal_condition(Matrix::Identity(3, 3)) == 1.0);
}

TEST_CASE("fixing parameters drops their rows and columns")
{
    const Matrix m = random_spd(6, 5);
    const Matrix fixed = fix_parameters(m, {Parameter::orientation, Parameter::clock});
    CHECK(fixed.rows() == 4);
    CHECK(fixed(1, 2) == m(1, 4));
    CHECK(fixed(3, 3) == m(5, 5));
}

TEST_CASE("a VA without any information is reported as a singular nuisance block")
{
    const Point2 tx(0, 0);
    const PathGeometry<double> g = nlos_path(tx, 0.0, Point2(12.5, 5.0), 0.0, 0.0, Point2(0, -25));
    const std::vector<PathGeometry<double>> paths{g};
    const std::vector<DiagonalPathInfo<double>> zero{{0.0, 0.0, 0.0}};
    PriorSpec priors;
    priors.anchors.push_back(VaPrior::none());
    const Matrix hybrid = hybrid_fim(asymptotic_channel_fim(zero), jacobian_T(paths, tx), priors, paths);
    try
    {
        efim_poc(hybrid, priors);
        FAIL("expected an error");
    }
    catch (const Error &e)
    {
        CHECK(e.code() == ErrorCode::singular_nuisance_block);
        REQUIRE(e.path().has_value());
        CHECK(*e.path() == 0);
    }
}

TEST_CASE("rotating the receiver only shifts its orientation")
{
    Experiment e = small_room();
    e.scenario.paths = ActivePaths{true, {0}};
    const Matrix j0 = experiment_channel_fim(e);
    e.scenario.rx_orientation = kPi / 8; // the UCA is symmetric under 2 pi / 16
    const Matrix j1 = experiment_channel_fim(e);
    CHECK(testing::relative_error(j1, j0) < 1e-9);
}
