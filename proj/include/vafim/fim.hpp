// SPDX-License-Identifier: Apache-2.0
//
// Numerical Fisher information machinery: channel-domain FIM, transformation
// to the position domain, priors, Schur-complement EFIMs and PEB extraction.
//
// Position-domain ordering is [p_R,x, p_R,y, alpha_R, d_clk, p_VA,1, ...];
// channel-domain ordering is (tau, aod, aoa, Re h, Im h) per path.

#ifndef VAFIM_FIM_HPP
#define VAFIM_FIM_HPP

#include "vafim/geometry.hpp"
#include "vafim/priors.hpp"
#include "vafim/signal.hpp"

#include <initializer_list>
#include <span>
#include <vector>

namespace vafim {

using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

namespace layout {
inline constexpr Index rx_x = 0;
inline constexpr Index rx_y = 1;
inline constexpr Index orientation = 2;
inline constexpr Index clock = 3;
inline constexpr Index poc_size = 4;
constexpr Index va(std::size_t k) { return poc_size + 2 * static_cast<Index>(k); }
} // namespace layout

enum class Parameter
{
    orientation,
    clock,
};

// Channel domain ----------------------------------------------------------

/// (2/sigma^2) sum_p Re{dm^H/dphi_i dm/dphi_j}, 5L x 5L.
Matrix channel_fim(const OfdmConfig &config, const ChannelParams &params, const ArrayGeometry &tx,
                   const ArrayGeometry &rx, const PilotSignal &pilot);

/// Channel FIM with the gains of every path eliminated, 3L x 3L over (tau, aod, aoa).
Matrix gain_efim(const Matrix &channel_fim);

/// Per-path intensities after dropping inter-path coupling, eliminating each
/// path's gain and keeping the diagonal.
std::vector<DiagonalPathInfo<double>> asymptotic_path_info(const Matrix &channel_fim);

/// 5L x 5L channel FIM of the asymptotically orthogonal regime: diagonal in
/// (tau, aod, aoa) with the intensities of asymptotic_path_info(), decoupled gains.
Matrix asymptotic_channel_fim(const Matrix &channel_fim);

/// Channel FIM of the asymptotic regime built directly from per-path intensities.
Matrix asymptotic_channel_fim(std::span<const DiagonalPathInfo<double>> infos);

// Position domain ---------------------------------------------------------

/// [T]_{i,j} = dphi_j / dphi~_i, (4 + 2K) x 5L. `paths` must start with the
/// LOS path when it is active; gain columns are zero.
Matrix jacobian_T(std::span<const PathGeometry<double>> paths, const Point2 &tx);

Matrix jacobian_T(const Scenario &scenario);

/// Prior information in the position domain: rotated VA blocks plus the clock
/// term 1/(c sigma_clk)^2 on d_clk. Perfect priors contribute nothing here.
Matrix prior_fim(const PriorSpec &priors, std::span<const PathGeometry<double>> paths);

/// T J_geo T^T + prior, where J_geo is the channel FIM with the gains
/// eliminated (T has no support on the gains).
Matrix hybrid_fim(const Matrix &channel_fim, const Matrix &T, const Matrix &prior);

Matrix hybrid_fim(const Matrix &channel_fim, const Matrix &T, const PriorSpec &priors,
                  std::span<const PathGeometry<double>> paths);

/// EFIM of (p_R, alpha_R, d_clk): perfectly known VAs are removed, the rest
/// eliminated by Schur complement. Throws Error(singular_nuisance_block).
Eigen::Matrix4d efim_poc(const Matrix &hybrid, const PriorSpec &priors);

/// Drops the rows/columns of known parameters.
Matrix fix_parameters(const Matrix &fim, std::span<const Index> known);

/// Same for the orientation/clock entries of a matrix in position-domain ordering.
Matrix fix_parameters(const Matrix &fim, std::initializer_list<Parameter> known);

/// Schur complement keeping `keep` and eliminating `eliminate`.
Matrix schur_complement(const Matrix &fim, std::span<const Index> keep, std::span<const Index> eliminate);

// Inversion and bounds ------------------------------------------------------

/// lambda_min / lambda_max of a symmetric matrix (0 when lambda_max <= 0).
double reciprocal_condition(const Matrix &fim);

inline constexpr double kSingularRcond = 1e-14;

struct Inverse
{
    Matrix matrix;
    double rcond = 0.0;
};

/// Inverse of a symmetric positive definite FIM. Throws SingularFimError with
/// the least-informed direction when rcond < kSingularRcond.
Inverse spd_inverse(const Matrix &fim);

/// sqrt of the sum of the given diagonal entries of fim^{-1}.
double peb(const Matrix &fim, std::span<const Index> indices);

/// Rx PEB from a matrix whose first two parameters are p_R.
double rx_peb(const Matrix &fim);

/// Smallest eigenvalue of (a - b); non-negative iff a >= b in Loewner order.
double loewner_margin(const Matrix &a, const Matrix &b);

} // namespace vafim

#endif // VAFIM_FIM_HPP
