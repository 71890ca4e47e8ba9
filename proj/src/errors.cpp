// SPDX-License-Identifier: Apache-2.0

#include "vafim/errors.hpp"

namespace vafim {

const char *to_string(ErrorCode code)
{
    switch (code)
    {
    case ErrorCode::invalid_argument:
        return "InvalidArgument";
    case ErrorCode::no_valid_reflection:
        return "NoValidReflection";
    case ErrorCode::lambda_out_of_range:
        return "LambdaOutOfRange";
    case ErrorCode::degenerate_geometry:
        return "DegenerateGeometry";
    case ErrorCode::zero_distance:
        return "ZeroDistance";
    case ErrorCode::subcarrier_not_in_use:
        return "SubcarrierNotInUse";
    case ErrorCode::singular_prior_covariance:
        return "SingularPriorCovariance";
    case ErrorCode::singular_nuisance_block:
        return "SingularNuisanceBlock";
    case ErrorCode::singular_fim:
        return "SingularFim";
    case ErrorCode::config_parse:
        return "ConfigParseError";
    }
    return "Unknown";
}

bool Error::is_geometric() const noexcept
{
    switch (code_)
    {
    case ErrorCode::no_valid_reflection:
    case ErrorCode::lambda_out_of_range:
    case ErrorCode::degenerate_geometry:
    case ErrorCode::zero_distance:
    case ErrorCode::singular_nuisance_block:
    case ErrorCode::singular_fim:
        return true;
    default:
        return false;
    }
}

} // namespace vafim
