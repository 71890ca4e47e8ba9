// SPDX-License-Identifier: Apache-2.0

#include "vafim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace vafim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDegree = std::numbers::pi / 180.0;

double relative_frobenius(const Matrix &value, const Matrix &reference)
{
    const double scale = reference.norm();
    return scale > 0.0 ? (value - reference).norm() / scale : value.norm();
}

struct Eigen2
{
    double lambda1, lambda2; // descending
    Point2 v1, v2;
};

Eigen2 eigen2(const Mat2<double> &m)
{
    const Eigen::SelfAdjointEigenSolver<Mat2<double>> eig(0.5 * (m + m.transpose()));
    return {eig.eigenvalues()(1), eig.eigenvalues()(0), eig.eigenvectors().col(1), eig.eigenvectors().col(0)};
}

std::string format_scientific(double value)
{
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.6e", value);
    return buffer;
}

} // namespace

// Experiment -------------------------------------------------------------------

void Experiment::validate() const
{
    vafim::validate(scenario);
    ofdm.validate();
    if (gammas.size() != scenario.reflectors.size() || reflector_priors.size() != scenario.reflectors.size())
        throw Error(ErrorCode::invalid_argument, "one reflection coefficient and prior per reflector is required");
}

std::vector<double> Experiment::path_gammas() const
{
    std::vector<double> out;
    if (scenario.paths.include_los)
        out.push_back(1.0);
    for (std::size_t r : scenario.paths.reflectors)
        out.push_back(gammas.at(r));
    return out;
}

PriorSpec Experiment::priors() const
{
    PriorSpec spec;
    spec.clock = clock;
    for (std::size_t r : scenario.paths.reflectors)
        spec.anchors.push_back(reflector_priors.at(r));
    return spec;
}

Experiment Experiment::with_paths(ActivePaths paths) const
{
    Experiment copy = *this;
    copy.scenario.paths = std::move(paths);
    return copy;
}

Matrix experiment_channel_fim(const Experiment &experiment)
{
    experiment.validate();
    const std::vector<PathGeometry<double>> paths = path_geometries(experiment.scenario);
    const std::vector<double> gammas = experiment.path_gammas();
    const ChannelParams params = channel_params(paths, experiment.ofdm, gammas);
    const PilotSignal pilot = make_pilot(experiment.ofdm, experiment.scenario.tx_array.size());
    return channel_fim(experiment.ofdm, params, experiment.scenario.tx_array, experiment.scenario.rx_array, pilot);
}

// Cases and grids --------------------------------------------------------------

char to_char(PathCase c)
{
    return c == PathCase::A ? 'A' : 'B';
}

PathCase path_case_from(std::string_view name)
{
    if (name == "A" || name == "a")
        return PathCase::A;
    if (name == "B" || name == "b")
        return PathCase::B;
    throw Error(ErrorCode::invalid_argument, "unknown path case '" + std::string(name) + "', expected A or B");
}

ActivePaths case_paths(PathCase c)
{
    return ActivePaths{false, c == PathCase::A ? std::vector<std::size_t>{0, 1} : std::vector<std::size_t>{0, 2}};
}

SweepGrid SweepGrid::log_spaced(double sigma_min, double sigma_max, std::size_t points)
{
    if (!(sigma_min > 0.0) || !(sigma_max >= sigma_min) || !std::isfinite(sigma_max) || points == 0)
        throw Error(ErrorCode::invalid_argument, "grid needs 0 < sigma_min <= sigma_max and at least one point");
    SweepGrid grid;
    if (points == 1)
    {
        grid.sigma_ref.push_back(sigma_min);
        return grid;
    }
    const double lo = std::log10(sigma_min);
    const double step = (std::log10(sigma_max) - lo) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i)
        grid.sigma_ref.push_back(i + 1 == points ? sigma_max : std::pow(10.0, lo + step * static_cast<double>(i)));
    grid.sigma_ref.front() = sigma_min;
    return grid;
}

void SweepGrid::validate() const
{
    for (std::size_t i = 0; i < sigma_ref.size(); ++i)
    {
        if (!(sigma_ref[i] > 0.0) || !std::isfinite(sigma_ref[i]))
            throw Error(ErrorCode::invalid_argument, "grid values must be positive and finite");
        if (i > 0 && !(sigma_ref[i] > sigma_ref[i - 1]))
            throw Error(ErrorCode::invalid_argument, "grid values must be strictly ascending");
    }
}

// Sweeps -----------------------------------------------------------------------

std::vector<EigenRow> eigen_sweep(const Experiment &experiment, const SweepGrid &grid, std::size_t reflector)
{
    grid.validate();
    const Experiment single = experiment.with_paths(ActivePaths{false, {reflector}});
    const Matrix fim = experiment_channel_fim(single);
    const PathGeometry<double> path = path_geometry(single.scenario, 0);
    const DiagonalPathInfo<double> info = asymptotic_path_info(fim).front();

    std::vector<EigenRow> rows;
    rows.reserve(grid.sigma_ref.size());
    for (double sigma : grid.sigma_ref)
    {
        const Mat4<double> j = nlos_efim(path, info, VaPrior::isotropic(sigma));
        const Eigen2 e = eigen2(j.topLeftCorner<2, 2>());
        rows.push_back({sigma, e.lambda1, std::max(e.lambda2, 0.0), line_direction_degrees(angle_of(e.v1)),
                        line_direction_degrees(angle_of(e.v2))});
    }
    return rows;
}

std::vector<PebRow> peb_sweep(const Experiment &experiment, const SweepGrid &grid, PathCase path_case)
{
    grid.validate();
    const Experiment active = experiment.with_paths(case_paths(path_case));
    const Matrix fim = experiment_channel_fim(active);
    const std::vector<PathGeometry<double>> paths = path_geometries(active.scenario);
    const Matrix T = jacobian_T(paths, active.scenario.tx_position);

    std::vector<PebRow> rows;
    rows.reserve(grid.sigma_ref.size());
    for (double sigma : grid.sigma_ref)
    {
        PriorSpec priors;
        priors.anchors.assign(paths.size(), VaPrior::isotropic(sigma));
        const Matrix hybrid = hybrid_fim(fim, T, priors, paths);
        const Matrix fixed = fix_parameters(hybrid, {Parameter::orientation, Parameter::clock});

        PebRow row{sigma, path_case, kInf, kInf, false};
        try
        {
            const Inverse inv = spd_inverse(fixed);
            row.peb_rx = std::sqrt(inv.matrix(0, 0) + inv.matrix(1, 1));
            row.peb_va1 = std::sqrt(inv.matrix(2, 2) + inv.matrix(3, 3));
        }
        catch (const SingularFimError &)
        {
            row.singular = true;
        }
        rows.push_back(row);
    }
    return rows;
}

// Validation -------------------------------------------------------------------

double UnitStream::next()
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double UnitStream::log_uniform(double lo, double hi)
{
    return std::pow(10.0, uniform(std::log10(lo), std::log10(hi)));
}

RandomCase random_single_bounce_case(UnitStream &stream)
{
    const double c2 = kSpeedOfLight * kSpeedOfLight;
    for (;;)
    {
        const Point2 tx(stream.uniform(-50.0, 50.0), stream.uniform(-50.0, 50.0));
        const double tx_orientation = stream.uniform(-std::numbers::pi, std::numbers::pi);
        const double normal = stream.uniform(-std::numbers::pi, std::numbers::pi);
        const Reflector reflector(tx + stream.uniform(1.0, 40.0) * unit(normal), normal);
        const Point2 rx(stream.uniform(-50.0, 50.0), stream.uniform(-50.0, 50.0));
        const double rx_orientation = stream.uniform(-std::numbers::pi, std::numbers::pi);

        const double side_rx = (reflector.anchor - rx).dot(unit(normal));
        if (side_rx < 0.5 || (rx - tx).norm() < 1.0)
            continue;
        const PathGeometry<double> path =
            nlos_path(tx, tx_orientation, rx, rx_orientation, 0.0, virtual_anchor(reflector, tx));
        if (std::abs(std::cos(path.angle_difference / 2.0)) < 1e-2 || path.tx_to_incidence < 0.5 ||
            path.incidence_to_rx < 0.5)
            continue;

        RandomCase out;
        out.tx = tx;
        out.path = path;
        out.info = {c2 * stream.log_uniform(1.0, 1e4), stream.log_uniform(10.0, 1e6), stream.log_uniform(10.0, 1e6)};
        out.prior = VaPrior::finite(stream.log_uniform(1e-2, 1e2), stream.log_uniform(1e-2, 1e2),
                                    stream.uniform(-0.9, 0.9));
        return out;
    }
}

Mat4<double> numerical_nlos_efim(const Point2 &tx, const PathGeometry<double> &path,
                                 const DiagonalPathInfo<double> &info, const VaPrior &prior)
{
    const std::vector<PathGeometry<double>> paths{path};
    const std::vector<DiagonalPathInfo<double>> infos{info};
    const Matrix fim = asymptotic_channel_fim(infos);
    const Matrix T = jacobian_T(paths, tx);
    PriorSpec priors;
    priors.anchors.push_back(prior);
    return efim_poc(hybrid_fim(fim, T, priors, paths), priors);
}

bool ValidationReport::passed() const
{
    return std::all_of(properties.begin(), properties.end(), [](const PropertyResult &p) { return p.passed(); });
}

void ValidationReport::write(std::ostream &out) const
{
    out << "validation trials=" << trials << " seed=" << seed << '\n';
    if (!properties.empty())
    {
        char line[160];
        std::snprintf(line, sizeof line, "%-28s %8s %8s %14s %14s  %s\n", "property", "trials", "failures",
                      "max_error", "tolerance", "status");
        out << line;
        for (const PropertyResult &p : properties)
        {
            std::snprintf(line, sizeof line, "%-28s %8zu %8zu %14s %14s  %s\n", p.name.c_str(), p.trials, p.failures,
                          format_scientific(p.max_error).c_str(), format_scientific(p.tolerance).c_str(),
                          p.passed() ? "PASS" : "FAIL");
            out << line;
        }
    }
    out << "overall " << (passed() ? "PASS" : "FAIL") << '\n';
}

namespace {

struct PropertyAccumulator
{
    PropertyResult result;

    PropertyAccumulator(std::string name, double tolerance) { result = {std::move(name), 0, 0, 0.0, tolerance}; }

    // Fails when the error is not strictly below the tolerance (NaN fails).
    void add(double error, bool extra_ok = true)
    {
        ++result.trials;
        result.max_error = std::isnan(error) ? error : std::max(result.max_error, error);
        if (!(error < result.tolerance) || !extra_ok)
            ++result.failures;
    }
};

int rank_above(const Mat4<double> &m, double relative_threshold)
{
    const Eigen::SelfAdjointEigenSolver<Mat4<double>> eig(m, Eigen::EigenvaluesOnly);
    const double largest = eig.eigenvalues().cwiseAbs().maxCoeff();
    int rank = 0;
    for (Eigen::Index i = 0; i < 4; ++i)
        rank += eig.eigenvalues()(i) > relative_threshold * largest ? 1 : 0;
    return rank;
}

} // namespace

ValidationReport validation_report(std::size_t n_trials, std::uint64_t seed, double tolerance_scale)
{
    ValidationReport report;
    report.trials = n_trials;
    report.seed = seed;
    if (n_trials == 0)
        return report;

    PropertyAccumulator oracle("closed_form_vs_schur", 1e-9 * tolerance_scale);
    PropertyAccumulator no_prior_oracle("no_prior_vs_schur", 1e-8 * tolerance_scale);
    PropertyAccumulator perfect_limit("limit_sigma_1e-6_perfect", 1e-6 * tolerance_scale);
    PropertyAccumulator none_limit("limit_sigma_1e8_no_prior", 1e-6 * tolerance_scale);
    PropertyAccumulator rank1("no_prior_rank1", 1e-10 * tolerance_scale);
    PropertyAccumulator direction("no_prior_direction_rad", 1e-8 * tolerance_scale);
    PropertyAccumulator schur_direction("no_prior_schur_direction_rad", 1e-8 * tolerance_scale);
    PropertyAccumulator rank3("perfect_prior_rank3", 1e-9 * tolerance_scale);
    PropertyAccumulator loewner("loewner_monotonicity", 1e-10 * tolerance_scale);

    UnitStream stream(seed);
    for (std::size_t t = 0; t < n_trials; ++t)
    {
        const RandomCase rc = random_single_bounce_case(stream);

        const Mat4<double> closed = nlos_efim(rc.path, rc.info, rc.prior);
        oracle.add(relative_frobenius(closed, numerical_nlos_efim(rc.tx, rc.path, rc.info, rc.prior)));

        const NoPriorResult<double> none = nlos_efim_no_prior(rc.path, rc.info);
        const Mat4<double> numerical_none = numerical_nlos_efim(rc.tx, rc.path, rc.info, VaPrior::none());
        no_prior_oracle.add(relative_frobenius(none.matrix(), numerical_none));

        const Mat4<double> perfect = nlos_efim_perfect_prior(rc.path, rc.info);
        perfect_limit.add(relative_frobenius(nlos_efim(rc.path, rc.info, VaPrior::isotropic(1e-6)), perfect));
        none_limit.add(relative_frobenius(nlos_efim(rc.path, rc.info, VaPrior::isotropic(1e8)), none.matrix()));

        {
            const Eigen::SelfAdjointEigenSolver<Mat4<double>> full(none.matrix(), Eigen::EigenvaluesOnly);
            const Eigen2 e = eigen2(none.matrix().topLeftCorner<2, 2>());
            const double spread = full.eigenvalues().cwiseAbs().maxCoeff();
            const double second = std::max(std::abs(full.eigenvalues()(0)), std::abs(full.eigenvalues()(2)));
            rank1.add(std::max(std::abs(e.lambda2) / e.lambda1, second / spread));

            const double expected = line_direction_degrees(rc.path.reflector_angle + std::numbers::pi / 2.0);
            direction.add(line_direction_distance_degrees(line_direction_degrees(angle_of(e.v1)), expected) * kDegree);
            const Eigen2 numerical = eigen2(numerical_none.topLeftCorner<2, 2>());
            schur_direction.add(
                line_direction_distance_degrees(line_direction_degrees(angle_of(numerical.v1)), expected) * kDegree);
        }

        // Exactly three eigenvalues above 1e-9 lambda_1, two once any intensity is zero.
        {
            const Eigen::SelfAdjointEigenSolver<Mat4<double>> eig(perfect, Eigen::EigenvaluesOnly);
            const double gap = std::max(eig.eigenvalues()(0), 0.0) / eig.eigenvalues()(3);
            bool counts_ok = rank_above(perfect, 1e-9) == 3;
            for (int drop = 0; drop < 3; ++drop)
            {
                DiagonalPathInfo<double> reduced = rc.info;
                (drop == 0 ? reduced.delay : drop == 1 ? reduced.aod : reduced.aoa) = 0.0;
                counts_ok = counts_ok && rank_above(nlos_efim_perfect_prior(rc.path, reduced), 1e-9) == 2;
            }
            rank3.add(gap, counts_ok);
        }

        {
            const double sigma_a = stream.log_uniform(1e-3, 1e3);
            const double sigma_b = sigma_a * stream.log_uniform(1.0 + 1e-3, 1e3);
            const Mat4<double> ja = nlos_efim(rc.path, rc.info, VaPrior::isotropic(sigma_a));
            const Mat4<double> jb = nlos_efim(rc.path, rc.info, VaPrior::isotropic(sigma_b));
            loewner.add(std::max(0.0, -loewner_margin(ja, jb)) / ja.norm());
        }
    }

    for (PropertyAccumulator *p : {&oracle, &no_prior_oracle, &perfect_limit, &none_limit, &rank1, &direction,
                                   &schur_direction, &rank3,
                                   &loewner})
        report.properties.push_back(p->result);
    return report;
}

// Output -----------------------------------------------------------------------

std::string fnv1a_hex(std::string_view bytes)
{
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char b : bytes)
    {
        hash ^= b;
        hash *= 0x100000001b3ull;
    }
    char buffer[17];
    std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(hash));
    return buffer;
}

std::string format_number(double value)
{
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    if (std::isnan(value))
        return "nan";
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.12g", value);
    return buffer;
}

void write_eigen_csv(std::ostream &out, const std::vector<EigenRow> &rows, std::string_view scenario_hash,
                     std::uint64_t seed)
{
    out << "sigma_ref,lambda1,lambda2,dir1,dir2,scenario_hash,seed\n";
    for (const EigenRow &r : rows)
        out << format_number(r.sigma_ref) << ',' << format_number(r.lambda1) << ',' << format_number(r.lambda2) << ','
            << format_number(r.dir1) << ',' << format_number(r.dir2) << ',' << scenario_hash << ',' << seed << '\n';
}

void write_peb_csv(std::ostream &out, const std::vector<PebRow> &rows, std::string_view scenario_hash,
                   std::uint64_t seed)
{
    out << "sigma_ref,case,peb_rx,peb_va1,singular,scenario_hash,seed\n";
    for (const PebRow &r : rows)
        out << format_number(r.sigma_ref) << ',' << to_char(r.path_case) << ',' << format_number(r.peb_rx) << ','
            << format_number(r.peb_va1) << ',' << (r.singular ? 1 : 0) << ',' << scenario_hash << ',' << seed << '\n';
}

void write_description(std::ostream &out, const Experiment &experiment)
{
    experiment.validate();
    const std::vector<PathGeometry<double>> paths = path_geometries(experiment.scenario);
    // Rounding residue of the mirror images (1e-15 m) is printed as zero.
    const auto coordinate = [](double v) { return format_number(std::abs(v) < 1e-9 ? 0.0 : v); };
    const auto point = [&](const Point2 &p) { return "(" + coordinate(p.x()) + ", " + coordinate(p.y()) + ")"; };
    const auto degrees = [](double rad) { return format_number(rad / kDegree); };

    out << "tx " << point(experiment.scenario.tx_position) << " elements " << experiment.scenario.tx_array.size()
        << '\n';
    out << "rx " << point(experiment.scenario.rx_position) << " elements " << experiment.scenario.rx_array.size()
        << " orientation_deg " << degrees(experiment.scenario.rx_orientation) << '\n';
    out << "clock_offset_m " << format_number(experiment.scenario.clock_offset) << '\n';
    for (const PathGeometry<double> &g : paths)
    {
        out << "path " << g.index << (g.is_los ? " LOS" : " NLOS reflector " + std::to_string(*g.reflector + 1))
            << '\n';
        out << "  d_m " << format_number(g.length) << "  tau_s " << format_number(g.delay) << '\n';
        out << "  aod_deg " << degrees(g.aod) << "  aoa_deg " << degrees(g.aoa) << '\n';
        if (!g.is_los)
        {
            out << "  p_VA " << point(g.virtual_anchor) << "  p_s " << point(g.incidence_point) << '\n';
            out << "  theta_ref_deg " << degrees(g.reflector_angle) << "  d_Ts_m " << format_number(g.tx_to_incidence)
                << "  d_Rs_m " << format_number(g.incidence_to_rx) << '\n';
        }
    }
    const NarrowbandCheck nb =
        narrowband_check(experiment.ofdm, experiment.scenario.tx_array, experiment.scenario.rx_array);
    out << "narrowband B/f_c " << format_number(nb.fractional_bandwidth) << " < lambda/D "
        << format_number(nb.aperture_ratio) << ": " << (nb.satisfied ? "satisfied" : "violated") << '\n';
    out << "noise_variance_mw " << format_number(noise_variance(experiment.ofdm)) << '\n';
}

} // namespace vafim
