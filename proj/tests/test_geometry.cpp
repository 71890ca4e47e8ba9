// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace vafim;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

Reflector wall_below() { return Reflector(Point2(0.0, -12.5), -kPi / 2); }
Reflector wall_above() { return Reflector(Point2(0.0, 12.5), kPi / 2); }
Reflector wall_right() { return Reflector(Point2(30.0, 0.0), 0.0); }

} // namespace

TEST_CASE("unit vectors and angle wrapping")
{
    CHECK(unit(0.0).isApprox(Point2(1, 0)));
    CHECK(unit_perp(0.0).isApprox(Point2(0, -1)));
    CHECK(unit_perp(0.7).isApprox(unit(0.7 - kPi / 2)));
    CHECK(wrap_angle(3 * kPi) == Approx(kPi));
    CHECK(wrap_angle(-kPi) == Approx(kPi));
    CHECK(wrap_angle(-3.5 * kPi) == Approx(0.5 * kPi));
    CHECK(line_direction_degrees(-kPi / 4) == Approx(135.0));
    CHECK(line_direction_degrees(kPi) == Approx(0.0));
    CHECK(line_direction_distance_degrees(179.5, 0.5) == Approx(1.0));
}

TEST_CASE("virtual anchors of the room walls")
{
    const Point2 tx(0, 0);
    CHECK((virtual_anchor(wall_below(), tx) - Point2(0, -25)).norm() < 1e-12);
    CHECK((virtual_anchor(wall_above(), tx) - Point2(0, 25)).norm() < 1e-12);
    CHECK((virtual_anchor(wall_right(), tx) - Point2(60, 0)).norm() < 1e-12);
}

TEST_CASE("mirroring twice returns the original point")
{
    const Reflector r(Point2(3.0, -2.0), 0.37);
    for (const Point2 &p : {Point2(1, 2), Point2(-7, 4), Point2(30, -11)})
        CHECK((virtual_anchor(r, virtual_anchor(r, p)) - p).norm() < 1e-12);
}

TEST_CASE("incidence point matches a line-intersection oracle")
{
    const Point2 tx(0, 0), rx(12.5, 5);
    const Point2 p = incidence_point(tx, rx, wall_below());
    const Point2 oracle = testing::line_intersection(Point2(0, -25), rx, Point2(0, -12.5), -kPi / 2);
    CHECK((p - oracle).norm() < 1e-12);
    CHECK(p.x() == Approx(12.5 * 12.5 / 30.0).epsilon(1e-12));
    CHECK(p.y() == Approx(-12.5));

    const Reflector high(Point2(0, 20), kPi / 2);
    const Point2 q = incidence_point(tx, rx, high);
    CHECK(q.x() == Approx(7.142857142857).epsilon(1e-11));
    CHECK(q.y() == Approx(20.0));
}

TEST_CASE("incidence point needs both nodes on the same side")
{
    const Reflector wall(Point2(0, 2), kPi / 2);
    try
    {
        incidence_point(Point2(0, 0), Point2(1, 5), wall);
        FAIL("expected an error");
    }
    catch (const Error &e)
    {
        CHECK(e.code() == ErrorCode::no_valid_reflection);
    }
}

TEST_CASE("NLOS path geometry")
{
    const Point2 tx(0, 0), rx(12.5, 5);
    const PathGeometry<double> g = nlos_path(tx, 0.0, rx, 0.0, 0.0, Point2(0, -25));
    const Point2 ps = testing::line_intersection(Point2(0, -25), rx, Point2(0, -12.5), -kPi / 2);

    CHECK(g.length == Approx(32.5));
    CHECK(g.length == Approx((ps - tx).norm() + (rx - ps).norm()));
    CHECK(g.delay == Approx(32.5 / kSpeedOfLight));
    CHECK(g.aod == Approx(std::atan2(ps.y(), ps.x())));
    CHECK(g.aoa == Approx(std::atan2(ps.y() - rx.y(), ps.x() - rx.x())));
    CHECK(g.reflector_angle == Approx(-kPi / 2));
    CHECK(g.tx_to_incidence == Approx(ps.norm()));
    CHECK(g.incidence_to_rx == Approx((rx - ps).norm()));
    CHECK(std::abs(g.angle_difference) < kPi);
    CHECK(std::abs(wrap_angle(g.aoa - g.reflector_angle)) < kPi / 2);
}

TEST_CASE("clock offset adds to the delay")
{
    const PathGeometry<double> g = los_path(Point2(0, 0), 0.0, Point2(3, 4), 0.0, 1.5);
    CHECK(g.length == Approx(5.0));
    CHECK(g.delay == Approx(6.5 / kSpeedOfLight));
    CHECK(wrap_angle(g.aoa - g.aod - kPi) == Approx(0.0).epsilon(1e-15));
}

TEST_CASE("local angles subtract the array orientations")
{
    const PathGeometry<double> g = los_path(Point2(0, 0), 0.3, Point2(3, 4), -0.2, 0.0);
    CHECK(g.local_aod == Approx(wrap_angle(g.aod - 0.3)));
    CHECK(g.local_aoa == Approx(wrap_angle(g.aoa + 0.2)));
}

TEST_CASE("translating the whole scene leaves the measurements unchanged")
{
    Scenario s = testing::room_experiment().scenario;
    const auto before = path_geometries(s);
    const auto after = path_geometries(translated(s, Point2(-17.0, 42.5)));
    REQUIRE(before.size() == after.size());
    for (std::size_t l = 0; l < before.size(); ++l)
    {
        CHECK(after[l].length == Approx(before[l].length).epsilon(1e-12));
        CHECK(after[l].aod == Approx(before[l].aod).epsilon(1e-12));
        CHECK(after[l].aoa == Approx(before[l].aoa).epsilon(1e-12));
        CHECK(after[l].tx_to_incidence == Approx(before[l].tx_to_incidence).epsilon(1e-12));
    }
}

TEST_CASE("locus family regenerates the same measurements")
{
    const Point2 tx(0, 0), rx(12.5, 5);
    const PathGeometry<double> g = nlos_path(tx, 0.0, rx, 0.0, 0.8, Point2(0, -25));
    const double lmax = kSpeedOfLight * g.delay - 0.8;

    const LocusPoint<double> here = locus_family(tx, g.delay, g.aod, g.aoa, g.tx_to_incidence, 0.8);
    CHECK((here.rx - rx).norm() < 1e-9);
    CHECK((here.virtual_anchor - g.virtual_anchor).norm() < 1e-9);
    CHECK((here.incidence_point - g.incidence_point).norm() < 1e-9);

    for (double fraction : {0.1, 0.3, 0.77, 0.95})
    {
        const LocusPoint<double> p = locus_family(tx, g.delay, g.aod, g.aoa, fraction * lmax, 0.8);
        const PathGeometry<double> h = nlos_path(tx, 0.0, p.rx, 0.0, 0.8, p.virtual_anchor);
        CHECK(h.delay == Approx(g.delay).epsilon(1e-12));
        CHECK(std::abs(wrap_angle(h.aod - g.aod)) < 1e-12);
        CHECK(std::abs(wrap_angle(h.aoa - g.aoa)) < 1e-12);
        const Point2 step = (p.rx - rx).normalized();
        CHECK(std::abs(step.x() * unit(g.reflector_angle).y() - step.y() * unit(g.reflector_angle).x()) < 1e-10);
    }
}

TEST_CASE("locus family parameter range and degeneracy")
{
    const Point2 tx(0, 0);
    const double delay = 20.0 / kSpeedOfLight;
    auto code_of = [&](double aod, double aoa, double lambda) {
        try
        {
            locus_family(tx, delay, aod, aoa, lambda);
        }
        catch (const Error &e)
        {
            return e.code();
        }
        return ErrorCode::invalid_argument;
    };
    CHECK(code_of(0.2, 2.0, 0.0) == ErrorCode::lambda_out_of_range);
    CHECK(code_of(0.2, 2.0, 20.0) == ErrorCode::lambda_out_of_range);
    CHECK(code_of(0.0, kPi, 5.0) == ErrorCode::degenerate_geometry);
}

TEST_CASE("array builders")
{
    const double lambda = kSpeedOfLight / 38e9;
    const ArrayGeometry ula = ArrayGeometry::ula(4, lambda / 2);
    REQUIRE(ula.size() == 4);
    CHECK(ula.element_position(0).isApprox(Point2(0, -0.75 * lambda)));
    CHECK(ula.element_position(3).isApprox(Point2(0, 0.75 * lambda)));
    CHECK((ula.element_position(2) - ula.element_position(1)).norm() == Approx(lambda / 2));
    CHECK(ula.max_dimension() == Approx(1.5 * lambda));

    const std::size_t n = 16;
    const ArrayGeometry uca = ArrayGeometry::uca(n, lambda / (4 * std::sin(kPi / n)));
    CHECK((uca.element_position(1) - uca.element_position(0)).norm() == Approx(lambda / 2));
    CHECK(ArrayGeometry::single().max_dimension() == 0.0);
}

TEST_CASE("scenario validation")
{
    Scenario s = testing::room_experiment().scenario;
    s.paths = ActivePaths{false, {}};
    CHECK_THROWS_WITH_AS(validate(s), doctest::Contains("at least one active path"), Error);
    s.paths = ActivePaths{false, {7}};
    CHECK_THROWS_AS(validate(s), Error);
}

TEST_CASE("unreachable reflector names the reflector")
{
    Scenario s = testing::room_experiment().scenario;
    s.rx_position = Point2(12.5, -20.0); // beyond wall 1
    s.paths = ActivePaths{false, {0}};
    try
    {
        path_geometries(s);
        FAIL("expected an error");
    }
    catch (const Error &e)
    {
        CHECK(e.code() == ErrorCode::no_valid_reflection);
        CHECK(e.is_geometric());
        CHECK(std::string(e.what()).find("reflector 1") != std::string::npos);
    }
}

TEST_CASE("position parameters round-trip through paths_from_parameters")
{
    const Scenario s = testing::room_experiment().scenario;
    const Eigen::VectorXd x = position_parameters(s);
    CHECK(x.size() == 4 + 2 * 3);
    const auto direct = path_geometries(s);
    const auto rebuilt = paths_from_parameters(s.tx_position, s.tx_orientation, true, x);
    REQUIRE(rebuilt.size() == direct.size());
    for (std::size_t l = 0; l < direct.size(); ++l)
    {
        CHECK(rebuilt[l].delay == Approx(direct[l].delay));
        CHECK(rebuilt[l].local_aod == Approx(direct[l].local_aod));
        CHECK(rebuilt[l].local_aoa == Approx(direct[l].local_aoa));
    }
}

TEST_CASE("geometry primitives are scalar generic")
{
    const BasicReflector<long double> r(Vec2<long double>(0, -12.5L), -std::numbers::pi_v<long double> / 2);
    const Vec2<long double> p = incidence_point(Vec2<long double>(0, 0), Vec2<long double>(12.5L, 5), r);
    CHECK(static_cast<double>(p.x()) == Approx(12.5 * 12.5 / 30.0));
    const BasicReflector<float> rf(Vec2<float>(0, -12.5f), -std::numbers::pi_v<float> / 2);
    CHECK(virtual_anchor(rf, Vec2<float>(0, 0)).y() == Approx(-25.0));
}
