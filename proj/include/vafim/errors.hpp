// SPDX-License-Identifier: Apache-2.0

#ifndef VAFIM_ERRORS_HPP
#define VAFIM_ERRORS_HPP

#include <Eigen/Core>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace vafim {

enum class ErrorCode
{
    invalid_argument,
    no_valid_reflection,
    lambda_out_of_range,
    degenerate_geometry,
    zero_distance,
    subcarrier_not_in_use,
    singular_prior_covariance,
    singular_nuisance_block,
    singular_fim,
    config_parse,
};

const char *to_string(ErrorCode code);

class Error : public std::runtime_error
{
public:
    Error(ErrorCode code, const std::string &what, std::optional<std::size_t> path = std::nullopt)
        : std::runtime_error(what), code_(code), path_(path)
    {
    }

    ErrorCode code() const noexcept { return code_; }

    // Path (or reflector) the failure refers to, when there is one.
    std::optional<std::size_t> path() const noexcept { return path_; }

    // True for failures caused by the scene rather than by bad input.
    bool is_geometric() const noexcept;

private:
    ErrorCode code_;
    std::optional<std::size_t> path_;
};

// Raised when a FIM cannot be inverted; carries the eigenvector of the smallest
// eigenvalue, i.e. the direction without information.
class SingularFimError : public Error
{
public:
    SingularFimError(const std::string &what, Eigen::VectorXd null_direction, double rcond)
        : Error(ErrorCode::singular_fim, what), null_direction_(std::move(null_direction)), rcond_(rcond)
    {
    }

    const Eigen::VectorXd &null_direction() const noexcept { return null_direction_; }
    double rcond() const noexcept { return rcond_; }

private:
    Eigen::VectorXd null_direction_;
    double rcond_;
};

class ConfigError : public Error
{
public:
    ConfigError(std::size_t line, const std::string &message)
        : Error(ErrorCode::config_parse, "line " + std::to_string(line) + ": " + message), line_(line)
    {
    }

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace vafim

#endif // VAFIM_ERRORS_HPP
