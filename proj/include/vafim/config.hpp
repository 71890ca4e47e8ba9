// SPDX-License-Identifier: Apache-2.0
//
// Scenario files: a strict TOML subset with the sections
//
//   [ofdm]           f_c_hz, n_subcarriers, delta_f_hz, pilot_index_min,
//                    pilot_index_max, tx_power_dbm, noise_figure_db,
//                    n0_dbm_hz, pilot_seed
//   [tx], [rx]       position_m, orientation_rad,
//                    array = { type = "ula"|"uca", n_elements, spacing_m | radius_m }
//   [clock]          d_clk_m, sigma_clk_s (seconds, "none" or "perfect")
//   [[reflectors]]   anchor_point_m, normal_angle_rad, gamma,
//                    prior = { sigma_par_m, sigma_perp_m, rho } | "none" | "perfect"
//   [paths]          include_los, reflector_indices (1-based)
//
// Unknown sections and keys are rejected; every error carries a line number.

#ifndef VAFIM_CONFIG_HPP
#define VAFIM_CONFIG_HPP

#include "vafim/analysis.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace vafim {

/// Parses a scenario document. Throws ConfigError.
Experiment parse_config(std::string_view text);

/// Reads a file verbatim. Throws ConfigError (line 0) when unreadable.
std::string read_text_file(const std::filesystem::path &path);

} // namespace vafim

#endif // VAFIM_CONFIG_HPP
