// SPDX-License-Identifier: Apache-2.0

#include "vafim/geometry.hpp"

#include <algorithm>
#include <string>

namespace vafim {

double ArrayGeometry::max_dimension() const
{
    double widest = 0.0;
    for (std::size_t i = 0; i < elements.size(); ++i)
        for (std::size_t j = i + 1; j < elements.size(); ++j)
            widest = std::max(widest, (element_position(i) - element_position(j)).norm());
    return widest;
}

ArrayGeometry ArrayGeometry::single()
{
    return ArrayGeometry{ArrayKind::custom, {ArrayElement{}}};
}

ArrayGeometry ArrayGeometry::ula(std::size_t n, double spacing)
{
    if (n == 0 || !(spacing >= 0.0))
        throw Error(ErrorCode::invalid_argument, "ULA needs at least one element and a non-negative spacing");
    ArrayGeometry array;
    array.kind = ArrayKind::ula;
    const double centre = 0.5 * static_cast<double>(n - 1);
    constexpr double half_pi = std::numbers::pi / 2.0;
    for (std::size_t j = 0; j < n; ++j)
    {
        const double offset = (static_cast<double>(j) - centre) * spacing;
        array.elements.push_back({std::abs(offset), offset < 0.0 ? -half_pi : half_pi});
    }
    return array;
}

ArrayGeometry ArrayGeometry::uca(std::size_t n, double radius)
{
    if (n == 0 || !(radius >= 0.0))
        throw Error(ErrorCode::invalid_argument, "UCA needs at least one element and a non-negative radius");
    ArrayGeometry array;
    array.kind = ArrayKind::uca;
    for (std::size_t j = 0; j < n; ++j)
        array.elements.push_back({radius, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n)});
    return array;
}

void validate(const Scenario &scenario)
{
    if (scenario.path_count() == 0)
        throw Error(ErrorCode::invalid_argument, "at least one active path is required");
    for (std::size_t r : scenario.paths.reflectors)
        if (r >= scenario.reflectors.size())
            throw Error(ErrorCode::invalid_argument, "active reflector index " + std::to_string(r + 1) + " out of range",
                        r);
    if (scenario.tx_array.size() == 0 || scenario.rx_array.size() == 0)
        throw Error(ErrorCode::invalid_argument, "arrays need at least one element");
}

PathGeometry<double> path_geometry(const Scenario &scenario, std::size_t path_index)
{
    if (path_index >= scenario.path_count())
        throw Error(ErrorCode::invalid_argument, "path index out of range");

    PathGeometry<double> g;
    if (scenario.paths.include_los && path_index == 0)
    {
        g = los_path(scenario.tx_position, scenario.tx_orientation, scenario.rx_position, scenario.rx_orientation,
                     scenario.clock_offset);
    }
    else
    {
        const std::size_t r = scenario.paths.reflectors[path_index - (scenario.paths.include_los ? 1 : 0)];
        const Reflector &reflector = scenario.reflectors.at(r);
        try
        {
            incidence_point(scenario.tx_position, scenario.rx_position, reflector);
            g = nlos_path(scenario.tx_position, scenario.tx_orientation, scenario.rx_position,
                          scenario.rx_orientation, scenario.clock_offset,
                          virtual_anchor(reflector, scenario.tx_position));
        }
        catch (const Error &e)
        {
            throw Error(e.code(), "reflector " + std::to_string(r + 1) + ": " + e.what(), r);
        }
        g.reflector = r;
    }
    g.index = path_index;
    return g;
}

std::vector<PathGeometry<double>> path_geometries(const Scenario &scenario)
{
    validate(scenario);
    std::vector<PathGeometry<double>> paths;
    paths.reserve(scenario.path_count());
    for (std::size_t l = 0; l < scenario.path_count(); ++l)
        paths.push_back(path_geometry(scenario, l));
    return paths;
}

Eigen::VectorXd position_parameters(const Scenario &scenario)
{
    Eigen::VectorXd parameters(4 + 2 * scenario.nlos_count());
    parameters << scenario.rx_position, scenario.rx_orientation, scenario.clock_offset,
        Eigen::VectorXd::Zero(2 * scenario.nlos_count());
    for (std::size_t k = 0; k < scenario.nlos_count(); ++k)
        parameters.segment<2>(4 + 2 * k) =
            virtual_anchor(scenario.reflectors.at(scenario.paths.reflectors[k]), scenario.tx_position);
    return parameters;
}

std::vector<PathGeometry<double>> paths_from_parameters(const Point2 &tx, double tx_orientation, bool include_los,
                                                        const Eigen::VectorXd &parameters)
{
    if (parameters.size() < 4 || parameters.size() % 2 != 0)
        throw Error(ErrorCode::invalid_argument, "position parameter vector must have length 4 + 2K");
    const Point2 rx = parameters.head<2>();
    const double orientation = parameters(2);
    const double clock_offset = parameters(3);
    const std::size_t nlos = static_cast<std::size_t>(parameters.size() - 4) / 2;

    std::vector<PathGeometry<double>> paths;
    if (include_los)
        paths.push_back(los_path(tx, tx_orientation, rx, orientation, clock_offset));
    for (std::size_t k = 0; k < nlos; ++k)
    {
        const Point2 va = parameters.segment<2>(4 + 2 * k);
        paths.push_back(nlos_path(tx, tx_orientation, rx, orientation, clock_offset, va));
    }
    for (std::size_t l = 0; l < paths.size(); ++l)
        paths[l].index = l;
    return paths;
}

Scenario translated(const Scenario &scenario, const Point2 &offset)
{
    Scenario moved = scenario;
    moved.tx_position += offset;
    moved.rx_position += offset;
    for (Reflector &r : moved.reflectors)
        r.anchor += offset;
    return moved;
}

} // namespace vafim
