#include "doctest.h"

#include <cmath>

#include "spherical/arc.hpp"
#include "spherical/hull.hpp"
#include "spherical/rotation.hpp"
#include "spherical/tolerance.hpp"
#include "spherical/trig.hpp"
#include "spherical/vec3.hpp"
#include "support.hpp"

using namespace spherical;
using namespace spherical::testing;

namespace {
const UnitVec ex{1, 0, 0}, ey{0, 1, 0}, ez{0, 0, 1};
}

TEST_CASE("arc_length matches known separations and stays stable near the ends") {
	CHECK(arc_length(ex, ey) == doctest::Approx(M_PI / 2).epsilon(1e-15));
	CHECK(arc_length(ex, ex) == doctest::Approx(0.0));
	CHECK(arc_length(ex, -ex) == doctest::Approx(M_PI).epsilon(1e-15));
	// nearly identical points: the formula keeps full relative precision
	UnitVec close = normalized(Vec3{1, 1e-8, 0});
	CHECK(arc_length(ex, close) == doctest::Approx(1e-8).epsilon(1e-6));
	UnitVec nearly_opposite = normalized(Vec3{-1, 1e-8, 0});
	CHECK(arc_length(ex, nearly_opposite) == doctest::Approx(M_PI - 1e-8).epsilon(1e-12));
}

TEST_CASE("corner_angle measures the wedge between geodesics") {
	CHECK(corner_angle(ex, ez, ey) == doctest::Approx(M_PI / 2).epsilon(1e-15));
	CHECK(corner_angle(ex, ey, -ex) == doctest::Approx(M_PI).epsilon(1e-12));
	UnitVec mid = normalized(ex + ey);
	CHECK(corner_angle(ex, ez, mid) == doctest::Approx(M_PI / 4).epsilon(1e-12));
}

TEST_CASE("triangle with three right angles is an octant") {
	auto s = triangle_from_angles(M_PI / 2, M_PI / 2, M_PI / 2);
	for (double v : s) CHECK(v == doctest::Approx(M_PI / 2).epsilon(1e-15));
	CHECK(area_from_sides(s[0], s[1], s[2]) == doctest::Approx(M_PI / 2).epsilon(1e-12));
}

TEST_CASE("equilateral triangle with angles 2pi/3") {
	auto s = triangle_from_angles(2 * M_PI / 3, 2 * M_PI / 3, 2 * M_PI / 3);
	for (double v : s) CHECK(v == doctest::Approx(1.9106332362490186).epsilon(1e-14));
	for (int i = 0; i < 3; ++i)
		CHECK(angle_law_residual(s[i], 2 * M_PI / 3, 2 * M_PI / 3, 2 * M_PI / 3) < 1e-12);
	// excess pi versus the side-only area route
	CHECK(area_from_sides(s[0], s[1], s[2]) == doctest::Approx(M_PI).epsilon(1e-12));
}

TEST_CASE("scalene triangle satisfies both laws of cosines") {
	double a = 1.1, b = 0.7, g = 1.9;
	auto s = triangle_from_angles(a, b, g);
	CHECK(angle_law_residual(s[0], a, b, g) < 1e-12);
	CHECK(angle_law_residual(s[1], b, g, a) < 1e-12);
	CHECK(angle_law_residual(s[2], g, a, b) < 1e-12);
	CHECK(area_from_sides(s[0], s[1], s[2]) == doctest::Approx(a + b + g - M_PI).epsilon(1e-12));
}

TEST_CASE("triangle_from_angles rejects bad input") {
	CHECK(raised([] { triangle_from_angles(0.0, 1.0, 1.0); }) == Errc::InvalidParameter);
	CHECK(raised([] { triangle_from_angles(M_PI, 1.0, 1.0); }) == Errc::InvalidParameter);
	CHECK(raised([] { triangle_from_angles(1.0, 1.0, M_PI - 2.0); }) == Errc::NonPositiveExcess);
	CHECK(raised([] { triangle_from_angles(0.4, 0.4, M_PI - 0.8 + 1e-13); }) ==
	      Errc::NonPositiveExcess);
	// one angle pushed against pi forces the opposite side against pi
	CHECK(raised([] { triangle_from_angles(M_PI - 1e-11, 0.3, 0.3); }) == Errc::DegenerateTriangle);
}

TEST_CASE("tangent frame helpers") {
	CHECK(norm(tangent_toward(ez, ex) - ex) < 1e-15);
	CHECK(std::fabs(dot(any_tangent(ey), ey)) < 1e-15);
	CHECK(norm(rotate_tangent(ez, ex, M_PI / 2) - ey) < 1e-15);
	CHECK(norm(geodesic_point(ez, ex, M_PI / 2) - ex) < 1e-15);
	CHECK(tangent_angle_ccw(ez, ex, ey) == doctest::Approx(M_PI / 2).epsilon(1e-15));
	CHECK(tangent_angle_ccw(ez, ey, ex) == doctest::Approx(3 * M_PI / 2).epsilon(1e-15));
}

TEST_CASE("rotation composition applies the right factor first") {
	Rotation a = Rotation::align(ez, ex, ez, ey);   // quarter turn about z
	Rotation b = Rotation::align(ex, ey, ex, -ez);  // quarter turn about x
	CHECK(norm(a(ex) - ey) < 1e-14);
	CHECK(norm((a * b)(ey) - a(b(ey))) < 1e-14);
	CHECK(norm((b * a)(ey) - b(a(ey))) < 1e-14);
	CHECK((a * a.inverse()).distance_to_identity() < 1e-14);
}

TEST_CASE("align maps the full frame, not just the base point") {
	UnitVec p = normalized(Vec3{0.3, -0.2, 0.93});
	UnitVec q = normalized(Vec3{-0.5, 0.8, 0.1});
	UnitVec p2 = geodesic_point(p, any_tangent(p), 0.7);
	UnitVec q2 = geodesic_point(q, rotate_tangent(q, any_tangent(q), 1.1), 0.7);
	Rotation r = Rotation::align(p, p2, q, q2);
	CHECK(norm(r(p) - q) < 1e-13);
	CHECK(norm(r(p2) - q2) < 1e-13);
	// isometry: lengths and triple products survive
	CHECK(arc_length(r(p), r(p2)) == doctest::Approx(arc_length(p, p2)).epsilon(1e-12));
	CHECK(triple(r(p), r(p2), r(ez)) == doctest::Approx(triple(p, p2, ez)).epsilon(1e-10));
}

TEST_CASE("axis_angle rotation agrees with the Rodrigues formula") {
	UnitVec axis = normalized(Vec3{1, 2, -0.5});
	for (double ang : {0.1, 1.0, 2.5, 3.1, 4.7, 6.2}) {
		Rotation r = Rotation::axis_angle(axis, ang);
		for (const UnitVec& v : {ex, ey, ez}) CHECK(norm(r(v) - rodrigues(axis, ang, v)) < 1e-13);
		double folded = std::min(std::fmod(ang, 2 * M_PI), 2 * M_PI - std::fmod(ang, 2 * M_PI));
		CHECK(r.angle() == doctest::Approx(folded).epsilon(1e-12));
	}
	CHECK(Rotation::axis_angle(axis, 2 * M_PI).angle() == doctest::Approx(0.0));
	CHECK(Rotation::identity().distance_to_identity() == doctest::Approx(0.0));
}

TEST_CASE("arc evaluation and construction") {
	Arc a = Arc::through(ex, ey);
	CHECK(a.length == doctest::Approx(M_PI / 2).epsilon(1e-15));
	CHECK(norm(a.point_at(0) - ex) < 1e-15);
	CHECK(norm(a.point_at(a.length) - ey) < 1e-14);
	CHECK(norm(a.point_at(a.length / 2) - normalized(ex + ey)) < 1e-14);
	CHECK(std::fabs(dot(a.direction_at(0.3), a.point_at(0.3))) < 1e-14);
	CHECK(raised([] { Arc::through(ex, ex); }) == Errc::InvalidParameter);
	CHECK(raised([] { Arc::through(ex, -ex); }) == Errc::InvalidParameter);
}

TEST_CASE("hull keeps extreme points in ccw order and drops interior ones") {
	std::vector<UnitVec> pts;
	for (int k = 0; k < 4; ++k) {
		double lon = k * M_PI / 2 + 0.2;
		pts.push_back(normalized(Vec3{std::sin(1.0) * std::cos(lon), std::sin(1.0) * std::sin(lon),
		                              std::cos(1.0)}));
	}
	pts.push_back(ez);                                  // interior
	pts.push_back(normalized(Vec3{0.1, -0.05, 0.99})); // interior
	auto idx = hemisphere_convex_hull(pts, ez);
	REQUIRE(idx.size() == 4);
	for (std::size_t i = 0; i < 4; ++i) CHECK(idx[i] < 4);
	// ccw as seen from the pole: consecutive triple products positive
	for (std::size_t i = 0; i < idx.size(); ++i) {
		const UnitVec& u = pts[idx[i]];
		const UnitVec& v = pts[idx[(i + 1) % idx.size()]];
		CHECK(triple(u, v, ez) > 0);
	}
}

TEST_CASE("hull rejects points outside the open hemisphere and degenerate input") {
	std::vector<UnitVec> pts{ex, ey, -ez};
	CHECK(raised([&] { hemisphere_convex_hull(pts, ez); }) == Errc::NotInOpenHemisphere);
	std::vector<UnitVec> two{ez, normalized(Vec3{0.1, 0, 1})};
	CHECK(raised([&] { hemisphere_convex_hull(two, ez); }) == Errc::DegenerateHull);
	std::vector<UnitVec> line{normalized(Vec3{-0.2, 0, 1}), ez, normalized(Vec3{0.2, 0, 1})};
	CHECK(raised([&] { hemisphere_convex_hull(line, ez); }) == Errc::DegenerateHull);
}

TEST_CASE("tolerance guard restores previous values") {
	double before = global_tolerance().length;
	{
		Tolerance t = global_tolerance();
		t.length = 1e-6;
		ToleranceGuard guard(t);
		CHECK(global_tolerance().length == doctest::Approx(1e-6));
	}
	CHECK(global_tolerance().length == doctest::Approx(before));
}
