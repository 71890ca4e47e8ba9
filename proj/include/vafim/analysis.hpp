// SPDX-License-Identifier: Apache-2.0
//
// Experiment drivers: eigen-structure and PEB sweeps over the VA prior
// accuracy, the closed-form vs. numerical validation suite and CSV output.

#ifndef VAFIM_ANALYSIS_HPP
#define VAFIM_ANALYSIS_HPP

#include "vafim/closedform.hpp"
#include "vafim/fim.hpp"

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace vafim {

/// A scenario together with its signal model and prior knowledge, as read
/// from a config file. Per-reflector vectors are indexed like scenario.reflectors.
struct Experiment
{
    Scenario scenario;
    OfdmConfig ofdm;
    std::vector<double> gammas; // reflection power coefficient per reflector
    ClockPrior clock;
    std::vector<VaPrior> reflector_priors;

    void validate() const;

    /// Reflection coefficients of the active paths (1 for LOS).
    std::vector<double> path_gammas() const;

    /// Priors of the active NLOS paths.
    PriorSpec priors() const;

    /// Same experiment with a different active path set.
    Experiment with_paths(ActivePaths paths) const;
};

/// Numerical channel FIM of the active paths.
Matrix experiment_channel_fim(const Experiment &experiment);

enum class PathCase
{
    A, // VAs 1 and 2: two parallel walls
    B, // VAs 1 and 3: perpendicular walls
};

char to_char(PathCase c);
PathCase path_case_from(std::string_view name);

/// NLOS-only path set of a case (0-based reflectors {0,1} or {0,2}).
ActivePaths case_paths(PathCase c);

struct SweepGrid
{
    std::vector<double> sigma_ref; // [m], ascending, > 0

    static SweepGrid log_spaced(double sigma_min, double sigma_max, std::size_t points);
    static SweepGrid standard() { return log_spaced(1e-3, 1e3, 61); }

    void validate() const;
};

struct EigenRow
{
    double sigma_ref = 0.0;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double dir1 = 0.0; // [deg], [0, 180)
    double dir2 = 0.0;
};

struct PebRow
{
    double sigma_ref = 0.0;
    PathCase path_case = PathCase::A;
    double peb_rx = 0.0;  // [m], +inf when singular
    double peb_va1 = 0.0; // [m], +inf when singular
    bool singular = false;
};

/// Eigen-structure of the position block of J_l for one reflector with
/// orientation and clock known, under isotropic priors sigma_ref/sqrt(2).
/// Uses the closed form on the asymptotic intensities of that path.
std::vector<EigenRow> eigen_sweep(const Experiment &experiment, const SweepGrid &grid, std::size_t reflector = 0);

/// Rx and VA-1 PEB of an NLOS-only case from the full hybrid FIM with
/// orientation and clock fixed. Singular points are flagged, not dropped.
std::vector<PebRow> peb_sweep(const Experiment &experiment, const SweepGrid &grid, PathCase path_case);

// Validation ------------------------------------------------------------------

/// One random transmitter/reflector/receiver geometry with positive
/// intensities and a finite prior.
struct RandomCase
{
    Point2 tx;
    PathGeometry<double> path;
    DiagonalPathInfo<double> info;
    VaPrior prior;
};

/// Deterministic uniform [0, 1) stream used by the validation suite.
class UnitStream
{
public:
    explicit UnitStream(std::uint64_t seed) : engine_(seed) {}
    double next();
    double uniform(double lo, double hi) { return lo + (hi - lo) * next(); }
    double log_uniform(double lo, double hi);

private:
    std::mt19937_64 engine_;
};

RandomCase random_single_bounce_case(UnitStream &stream);

/// Numerical J_l: asymptotic channel FIM through T, prior added and the VA
/// eliminated by Schur complement.
Mat4<double> numerical_nlos_efim(const Point2 &tx, const PathGeometry<double> &path,
                                 const DiagonalPathInfo<double> &info, const VaPrior &prior);

struct PropertyResult
{
    std::string name;
    std::size_t trials = 0;
    std::size_t failures = 0;
    double max_error = 0.0;
    double tolerance = 0.0;

    bool passed() const { return failures == 0; }
};

struct ValidationReport
{
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::vector<PropertyResult> properties;

    bool passed() const;
    void write(std::ostream &out) const;
};

/// Runs the property suites over n_trials random cases. tolerance_scale
/// multiplies every error tolerance.
ValidationReport validation_report(std::size_t n_trials, std::uint64_t seed, double tolerance_scale = 1.0);

// Output ----------------------------------------------------------------------

/// 64-bit FNV-1a as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

/// 12 significant digits, "inf" for infinities.
std::string format_number(double value);

void write_eigen_csv(std::ostream &out, const std::vector<EigenRow> &rows, std::string_view scenario_hash,
                     std::uint64_t seed);
void write_peb_csv(std::ostream &out, const std::vector<PebRow> &rows, std::string_view scenario_hash,
                   std::uint64_t seed);

/// Human-readable per-path geometry, narrowband check and noise level.
void write_description(std::ostream &out, const Experiment &experiment);

} // namespace vafim

#endif // VAFIM_ANALYSIS_HPP
