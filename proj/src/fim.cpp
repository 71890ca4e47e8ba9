// SPDX-License-Identifier: Apache-2.0

#include "vafim/fim.hpp"

#include <algorithm>
#include <string>

namespace vafim {

namespace {

std::vector<Index> geometric_columns(Index n_paths)
{
    std::vector<Index> columns;
    for (Index l = 0; l < n_paths; ++l)
        for (Index i = 0; i < 3; ++i)
            columns.push_back(kParamsPerPath * l + i);
    return columns;
}

std::vector<Index> gain_columns(Index n_paths)
{
    std::vector<Index> columns;
    for (Index l = 0; l < n_paths; ++l)
    {
        columns.push_back(kParamsPerPath * l + 3);
        columns.push_back(kParamsPerPath * l + 4);
    }
    return columns;
}

Index path_count(const Matrix &channel_fim)
{
    if (channel_fim.rows() != channel_fim.cols() || channel_fim.rows() % kParamsPerPath != 0)
        throw Error(ErrorCode::invalid_argument, "channel FIM must be square with 5L rows");
    return channel_fim.rows() / kParamsPerPath;
}

Matrix symmetrized(const Matrix &m)
{
    return 0.5 * (m + m.transpose());
}

} // namespace

Matrix channel_fim(const OfdmConfig &config, const ChannelParams &params, const ArrayGeometry &tx,
                   const ArrayGeometry &rx, const PilotSignal &pilot)
{
    const Index n = kParamsPerPath * static_cast<Index>(params.size());
    Matrix fim = Matrix::Zero(n, n);
    for (int p : config.subcarriers)
    {
        const Eigen::MatrixXcd g = mean_signal_gradient(config, params, tx, rx, pilot, p);
        fim.noalias() += (g.adjoint() * g).real();
    }
    fim *= 2.0 / noise_variance(config);
    return symmetrized(fim);
}

Matrix gain_efim(const Matrix &channel_fim)
{
    const Index n_paths = path_count(channel_fim);
    const std::vector<Index> keep = geometric_columns(n_paths);
    const std::vector<Index> eliminate = gain_columns(n_paths);
    return schur_complement(channel_fim, keep, eliminate);
}

std::vector<DiagonalPathInfo<double>> asymptotic_path_info(const Matrix &channel_fim)
{
    const Index n_paths = path_count(channel_fim);
    std::vector<DiagonalPathInfo<double>> infos;
    for (Index l = 0; l < n_paths; ++l)
    {
        const Matrix block = channel_fim.block(kParamsPerPath * l, kParamsPerPath * l, kParamsPerPath, kParamsPerPath);
        const Matrix efim = gain_efim(block);
        infos.push_back({efim(0, 0), efim(1, 1), efim(2, 2)});
    }
    return infos;
}

Matrix asymptotic_channel_fim(const Matrix &channel_fim)
{
    const Index n_paths = path_count(channel_fim);
    const std::vector<DiagonalPathInfo<double>> infos = asymptotic_path_info(channel_fim);
    Matrix fim = asymptotic_channel_fim(infos);
    for (Index l = 0; l < n_paths; ++l)
    {
        const Index g = kParamsPerPath * l + 3;
        fim.block<2, 2>(g, g) = channel_fim.block<2, 2>(g, g);
    }
    return fim;
}

Matrix asymptotic_channel_fim(std::span<const DiagonalPathInfo<double>> infos)
{
    const Index n = kParamsPerPath * static_cast<Index>(infos.size());
    Matrix fim = Matrix::Identity(n, n);
    for (std::size_t l = 0; l < infos.size(); ++l)
    {
        const Index c = kParamsPerPath * static_cast<Index>(l);
        fim(c + 0, c + 0) = infos[l].delay;
        fim(c + 1, c + 1) = infos[l].aod;
        fim(c + 2, c + 2) = infos[l].aoa;
    }
    return fim;
}

Matrix jacobian_T(std::span<const PathGeometry<double>> paths, const Point2 &tx)
{
    std::size_t nlos = 0;
    for (const auto &g : paths)
        nlos += g.is_los ? 0 : 1;

    const double c = kSpeedOfLight;
    Matrix T = Matrix::Zero(layout::va(nlos), kParamsPerPath * static_cast<Index>(paths.size()));
    std::size_t k = 0;
    for (std::size_t l = 0; l < paths.size(); ++l)
    {
        const PathGeometry<double> &g = paths[l];
        const Index col = kParamsPerPath * static_cast<Index>(l);
        const Point2 u = unit(g.aoa);
        const Point2 u_perp = unit_perp(g.aoa);
        const double d = g.length;

        T.block<2, 1>(layout::rx_x, col) = -u / c;
        T(layout::clock, col) = 1.0 / c;
        T.block<2, 1>(layout::rx_x, col + 2) = u_perp / d;
        T(layout::orientation, col + 2) = -1.0;

        if (g.is_los)
        {
            T.block<2, 1>(layout::rx_x, col + 1) = u_perp / d;
            continue;
        }

        const Index row = layout::va(k++);
        const double va_distance = (g.virtual_anchor - tx).norm();
        T.block<2, 1>(row, col) = u / c;
        T.block<2, 1>(layout::rx_x, col + 1) = -u_perp / d;
        T.block<2, 1>(row, col + 1) = -2.0 * unit_perp(g.reflector_angle) / va_distance + u_perp / d;
        T.block<2, 1>(row, col + 2) = -u_perp / d;
    }
    return T;
}

Matrix jacobian_T(const Scenario &scenario)
{
    const std::vector<PathGeometry<double>> paths = path_geometries(scenario);
    return jacobian_T(paths, scenario.tx_position);
}

Matrix prior_fim(const PriorSpec &priors, std::span<const PathGeometry<double>> paths)
{
    std::vector<const PathGeometry<double> *> nlos;
    for (const auto &g : paths)
        if (!g.is_los)
            nlos.push_back(&g);
    if (priors.anchors.size() != nlos.size())
        throw Error(ErrorCode::invalid_argument, "one VA prior per NLOS path is required");

    Matrix prior = Matrix::Zero(layout::va(nlos.size()), layout::va(nlos.size()));
    prior(layout::clock, layout::clock) = priors.clock.information();
    for (std::size_t k = 0; k < nlos.size(); ++k)
        prior.block<2, 2>(layout::va(k), layout::va(k)) = va_prior_information(priors.anchors[k], nlos[k]->aoa);
    return prior;
}

Matrix hybrid_fim(const Matrix &channel_fim, const Matrix &T, const Matrix &prior)
{
    const Index n_paths = path_count(channel_fim);
    if (T.cols() != channel_fim.rows() || prior.rows() != T.rows() || prior.cols() != T.rows())
        throw Error(ErrorCode::invalid_argument, "incompatible FIM, Jacobian and prior dimensions");
    const Matrix geometric_T = T(Eigen::all, geometric_columns(n_paths));
    const Matrix observed = geometric_T * gain_efim(channel_fim) * geometric_T.transpose();
    return symmetrized(observed + prior);
}

Matrix hybrid_fim(const Matrix &channel_fim, const Matrix &T, const PriorSpec &priors,
                  std::span<const PathGeometry<double>> paths)
{
    return hybrid_fim(channel_fim, T, prior_fim(priors, paths));
}

Eigen::Matrix4d efim_poc(const Matrix &hybrid, const PriorSpec &priors)
{
    if (hybrid.rows() < layout::poc_size || (hybrid.rows() - layout::poc_size) % 2 != 0)
        throw Error(ErrorCode::invalid_argument, "hybrid FIM must have 4 + 2K rows");
    const std::size_t nlos = static_cast<std::size_t>(hybrid.rows() - layout::poc_size) / 2;
    if (priors.anchors.size() != nlos)
        throw Error(ErrorCode::invalid_argument, "one VA prior per NLOS path is required");

    const std::vector<Index> keep{layout::rx_x, layout::rx_y, layout::orientation, layout::clock};
    std::vector<Index> eliminate;
    for (std::size_t k = 0; k < nlos; ++k)
    {
        if (priors.anchors[k].kind == PriorKind::perfect)
            continue;
        eliminate.push_back(layout::va(k));
        eliminate.push_back(layout::va(k) + 1);

        const Matrix leading = hybrid(eliminate, eliminate);
        if (reciprocal_condition(leading) < kSingularRcond)
            throw Error(ErrorCode::singular_nuisance_block,
                        "VA block of NLOS path " + std::to_string(k + 1) + " carries no information", k);
    }
    return schur_complement(hybrid, keep, eliminate);
}

Matrix fix_parameters(const Matrix &fim, std::span<const Index> known)
{
    std::vector<Index> keep;
    for (Index i = 0; i < fim.rows(); ++i)
        if (std::find(known.begin(), known.end(), i) == known.end())
            keep.push_back(i);
    return fim(keep, keep);
}

Matrix fix_parameters(const Matrix &fim, std::initializer_list<Parameter> known)
{
    std::vector<Index> indices;
    for (Parameter p : known)
        indices.push_back(p == Parameter::orientation ? layout::orientation : layout::clock);
    return fix_parameters(fim, indices);
}

Matrix schur_complement(const Matrix &fim, std::span<const Index> keep, std::span<const Index> eliminate)
{
    const std::vector<Index> k(keep.begin(), keep.end());
    const std::vector<Index> e(eliminate.begin(), eliminate.end());
    Matrix kept = fim(k, k);
    if (e.empty())
        return kept;
    const Matrix coupling = fim(k, e);
    const Matrix nuisance = fim(e, e);
    const Eigen::LDLT<Matrix> ldlt(nuisance);
    kept.noalias() -= coupling * ldlt.solve(coupling.transpose());
    return symmetrized(kept);
}

double reciprocal_condition(const Matrix &fim)
{
    if (fim.size() == 0)
        return 1.0;
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrized(fim), Eigen::EigenvaluesOnly);
    const double largest = eig.eigenvalues().maxCoeff();
    if (!(largest > 0.0))
        return 0.0;
    return std::max(eig.eigenvalues().minCoeff(), 0.0) / largest;
}

Inverse spd_inverse(const Matrix &fim)
{
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrized(fim));
    const double largest = eig.eigenvalues().maxCoeff();
    const double rcond = largest > 0.0 ? std::max(eig.eigenvalues()(0), 0.0) / largest : 0.0;
    if (rcond < kSingularRcond)
        throw SingularFimError("FIM is singular (reciprocal condition " + std::to_string(rcond) + ")",
                               eig.eigenvectors().col(0), rcond);
    const Eigen::LLT<Matrix> llt(symmetrized(fim));
    return {llt.solve(Matrix::Identity(fim.rows(), fim.cols())), rcond};
}

double peb(const Matrix &fim, std::span<const Index> indices)
{
    const Inverse inv = spd_inverse(fim);
    double sum = 0.0;
    for (Index i : indices)
        sum += inv.matrix(i, i);
    return std::sqrt(sum);
}

double rx_peb(const Matrix &fim)
{
    const Index indices[] = {layout::rx_x, layout::rx_y};
    return peb(fim, indices);
}

double loewner_margin(const Matrix &a, const Matrix &b)
{
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrized(a - b), Eigen::EigenvaluesOnly);
    return eig.eigenvalues().minCoeff();
}

} // namespace vafim
