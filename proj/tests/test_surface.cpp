#include "doctest.h"

#include <cmath>
#include <set>

#include "spherical/builders.hpp"
#include "spherical/surface.hpp"
#include "spherical/trig.hpp"
#include "support.hpp"

using namespace spherical;
using namespace spherical::testing;

namespace {

// Every surface in these tests must satisfy the angle-defect area identity.
void check_consistent(const Surface& s) {
	CHECK(s.gauss_bonnet_residual() < 1e-9);
	double by_faces = 0;
	for (int f = 0; f < s.num_faces(); ++f) {
		by_faces += area_from_sides(s.edge_length({f, 0}), s.edge_length({f, 1}),
		                            s.edge_length({f, 2}));
	}
	CHECK(s.area() == doctest::Approx(by_faces).epsilon(1e-10));
}

} // namespace

TEST_CASE("right angled triangle surface is an octant") {
	Surface s = build_triangle(M_PI / 2, M_PI / 2, M_PI / 2);
	CHECK(s.num_faces() == 1);
	CHECK(s.area() == doctest::Approx(M_PI / 2).epsilon(1e-12));
	CHECK(s.euler_characteristic() == 1);
	CHECK(s.genus() == 0);
	CHECK(s.num_boundary_components() == 1);
	REQUIRE(s.boundary_walks().size() == 1);
	CHECK(s.boundary_walks()[0].size() == 3);
	auto cones = s.cone_points();
	REQUIRE(cones.size() == 3);
	for (const auto& c : cones) {
		CHECK(c.boundary);
		CHECK(c.flagged);
		CHECK(c.angle == doctest::Approx(M_PI / 2).epsilon(1e-12));
	}
	check_consistent(s);
}

TEST_CASE("equilateral triangle with angle sum 2pi") {
	Surface s = build_triangle(2 * M_PI / 3, 2 * M_PI / 3, 2 * M_PI / 3);
	for (int k = 0; k < 3; ++k)
		CHECK(s.edge_length({0, k}) == doctest::Approx(1.9106332362490186).epsilon(1e-13));
	CHECK(s.area() == doctest::Approx(M_PI).epsilon(1e-12));
	check_consistent(s);
}

TEST_CASE("half sphere with one mark") {
	Surface s = build_half_sphere(std::vector<double>{0.0});
	CHECK(s.area() == doctest::Approx(2 * M_PI).epsilon(1e-12));
	CHECK(s.euler_characteristic() == 1);
	CHECK(s.num_boundary_components() == 1);
	double blen = 0;
	for (EdgeRef e : s.boundary_walks()[0]) blen += s.edge_length(e);
	CHECK(blen == doctest::Approx(2 * M_PI).epsilon(1e-12));
	auto cones = s.cone_points();
	REQUIRE(cones.size() == 1);
	CHECK(cones[0].boundary);
	CHECK(cones[0].flagged);
	CHECK(cones[0].removable); // a mark, not an angle defect
	CHECK(cones[0].angle == doctest::Approx(M_PI).epsilon(1e-12));
	CHECK(s.cone_points(true).empty());
	check_consistent(s);
}

TEST_CASE("half sphere marks must pin down the boundary circle") {
	CHECK(raised([] { build_half_sphere(std::vector<double>{0.0, M_PI}); }) ==
	      Errc::AntipodalMarks);
	CHECK(raised([] { build_half_sphere(std::vector<double>{1.0, 1.0}); }) ==
	      Errc::InvalidParameter);
	CHECK(raised([] { build_half_sphere(std::vector<double>{}); }) == Errc::InvalidParameter);
	// three marks, one antipodal pair hidden among them
	CHECK(raised([] { build_half_sphere(std::vector<double>{0.5, 2.0, 0.5 + M_PI}); }) ==
	      Errc::AntipodalMarks);
}

TEST_CASE("foliated digon carries its angle at both ends") {
	Surface s = build_foliated_digon(0.4);
	CHECK(s.area() == doctest::Approx(2.5132741228718345).epsilon(1e-12));
	CHECK(s.num_boundary_components() == 1);
	double blen = 0;
	for (EdgeRef e : s.boundary_walks()[0]) blen += s.edge_length(e);
	CHECK(blen == doctest::Approx(2 * M_PI).epsilon(1e-12));
	auto cones = s.cone_points();
	REQUIRE(cones.size() == 2);
	for (const auto& c : cones) {
		CHECK(c.boundary);
		CHECK(c.angle == doctest::Approx(0.4 * M_PI).epsilon(1e-12));
	}
	check_consistent(s);
}

TEST_CASE("wide foliated digon with marks on the first side") {
	Surface s = build_foliated_digon(2.5, std::vector<double>{1.0, 2.0});
	CHECK(s.area() == doctest::Approx(5 * M_PI).epsilon(1e-12));
	auto cones = s.cone_points();
	REQUIRE(cones.size() == 4);
	int marks = 0, ends = 0;
	for (const auto& c : cones) {
		if (c.removable) {
			++marks;
			CHECK(c.flagged);
			CHECK(c.angle == doctest::Approx(M_PI).epsilon(1e-12));
		} else {
			++ends;
			CHECK(c.angle == doctest::Approx(2.5 * M_PI).epsilon(1e-12));
		}
	}
	CHECK(marks == 2);
	CHECK(ends == 2);
	check_consistent(s);
}

TEST_CASE("digon mark positions are validated") {
	CHECK(raised([] { build_foliated_digon(0.5, std::vector<double>{M_PI}); }) ==
	      Errc::InvalidParameter);
	CHECK(raised([] { build_foliated_digon(0.5, std::vector<double>{0.7, 0.7}); }) ==
	      Errc::InvalidParameter);
	CHECK(raised([] { build_foliated_digon(-1.0); }) == Errc::InvalidParameter);
	// mark exactly on the builder's internal equator vertex still works
	Surface s = build_foliated_digon(1.0, std::vector<double>{M_PI / 2});
	int flagged_marks = 0;
	for (const auto& c : s.cone_points())
		if (c.boundary && c.flagged && std::fabs(c.angle - M_PI) < 1e-12) ++flagged_marks;
	CHECK(flagged_marks == 3); // two digon ends of angle pi plus the mark
	check_consistent(s);
}

TEST_CASE("spheres of revolution with two cone points") {
	Surface s = build_singular_sphere(0.3);
	CHECK(s.closed());
	CHECK(s.genus() == 0);
	CHECK(s.area() == doctest::Approx(3.7699111843077517).epsilon(1e-12));
	auto cones = s.cone_points();
	REQUIRE(cones.size() == 2);
	for (const auto& c : cones) {
		CHECK_FALSE(c.boundary);
		CHECK(c.angle == doctest::Approx(0.6 * M_PI).epsilon(1e-12));
	}
	check_consistent(s);

	Surface round = build_singular_sphere(1.0);
	CHECK(round.area() == doctest::Approx(4 * M_PI).epsilon(1e-12));
	CHECK(round.cone_points(true).empty()); // both cones are removable marks
	CHECK(round.cone_points().size() == 2);
	check_consistent(round);
}

TEST_CASE("cone point holonomy equals the cone angle") {
	for (double alpha : {0.3, 0.8, 1.7, 2.6}) {
		Surface s = build_singular_sphere(alpha);
		auto cones = s.cone_points();
		REQUIRE(cones.size() == 2);
		for (const auto& c : cones) {
			Rotation m = monodromy(s, star_loop(s, c.vclass));
			double cone = 2 * M_PI * alpha;
			double r = std::fmod(cone, 2 * M_PI);
			double folded = std::min(r, 2 * M_PI - r);
			CHECK(m.angle() == doctest::Approx(folded).epsilon(1e-9));
		}
	}
}

TEST_CASE("slit sphere boundary and marks") {
	Surface s = build_slit_sphere(1.0);
	CHECK(s.area() == doctest::Approx(4 * M_PI).epsilon(1e-11));
	CHECK(s.num_boundary_components() == 1);
	REQUIRE(s.boundary_walks().size() == 1);
	double blen = 0;
	for (EdgeRef e : s.boundary_walks()[0]) blen += s.edge_length(e);
	CHECK(blen == doctest::Approx(2.0).epsilon(1e-12)); // both sides of the slit
	auto cones = s.cone_points();
	REQUIRE(cones.size() == 2);
	for (const auto& c : cones) {
		CHECK(c.boundary);
		CHECK(c.angle == doctest::Approx(2 * M_PI).epsilon(1e-12));
		CHECK_FALSE(c.removable);
	}
	CHECK(s.euler_characteristic() == 1);
	check_consistent(s);
	CHECK(raised([] { build_slit_sphere(M_PI); }) == Errc::InvalidParameter);
	CHECK(raised([] { build_slit_sphere(0.0); }) == Errc::InvalidParameter);
}

TEST_CASE("pearl rows glue into a sphere with trivial holonomy") {
	for (int m : {1, 2, 3}) {
		Surface s = build_pearl_row(m, 1.0);
		CHECK(s.closed());
		CHECK(s.genus() == 0);
		CHECK(s.area() == doctest::Approx(4 * M_PI * m).epsilon(1e-11));
		auto cones = s.cone_points();
		REQUIRE(cones.size() == 2);
		for (const auto& c : cones) {
			CHECK(c.angle == doctest::Approx(2 * M_PI * m).epsilon(1e-11));
			Rotation h = monodromy(s, star_loop(s, c.vclass));
			CHECK(h.distance_to_identity() < 1e-9);
		}
		for (const auto& loop : generator_loops(s))
			CHECK(monodromy(s, loop).distance_to_identity() < 1e-9);
		check_consistent(s);
	}
	Surface one = build_pearl_row(1, 1.0);
	CHECK(one.cone_points(true).empty()); // two marks on a round sphere
}

TEST_CASE("marked sphere") {
	Surface s = build_marked_sphere();
	CHECK(s.closed());
	CHECK(s.area() == doctest::Approx(4 * M_PI).epsilon(1e-12));
	auto cones = s.cone_points();
	REQUIRE(cones.size() == 1);
	CHECK(cones[0].flagged);
	CHECK(cones[0].removable);
	check_consistent(s);
}

TEST_CASE("square torus and its complement") {
	Surface t1 = build_quad_torus(1.0);
	CHECK(t1.closed());
	CHECK(t1.genus() == 1);
	CHECK(t1.area() == doctest::Approx(2.3202469934301995).epsilon(1e-11));
	auto c1 = t1.cone_points();
	REQUIRE(c1.size() == 1);
	CHECK(c1[0].angle == doctest::Approx(8.603432300609786).epsilon(1e-11));
	check_consistent(t1);

	Surface t2 = build_quad_complement_torus(1.0);
	CHECK(t2.closed());
	CHECK(t2.genus() == 1);
	CHECK(t2.area() == doctest::Approx(4 * M_PI - 2.3202469934301995).epsilon(1e-10));
	auto c2 = t2.cone_points(true);
	REQUIRE(c2.size() == 1);
	CHECK(c2[0].angle == doctest::Approx(16.52930892810856).epsilon(1e-10));
	check_consistent(t2);

	// the two cone angles account for the full sphere of directions twice over
	CHECK(c1[0].angle + c2[0].angle == doctest::Approx(8 * M_PI).epsilon(1e-11));

	for (Surface* s : {&t1, &t2}) {
		auto cp = s->cone_points(true);
		Rotation h = monodromy(*s, star_loop(*s, cp[0].vclass));
		double r = std::fmod(cp[0].angle, 2 * M_PI);
		CHECK(h.angle() == doctest::Approx(std::min(r, 2 * M_PI - r)).epsilon(1e-9));
	}
}

TEST_CASE("random polygons are valid star domains") {
	for (unsigned seed : {1u, 7u, 42u, 1234u}) {
		Surface s = build_random_polygon(6, seed);
		CHECK(s.num_faces() == 6);
		CHECK(s.num_boundary_components() == 1);
		CHECK(s.euler_characteristic() == 1);
		int singular = 0;
		for (const auto& c : s.cone_points()) singular += c.boundary ? 1 : 0;
		CHECK(singular == static_cast<int>(s.cone_points().size()));
		check_consistent(s);
	}
	// deterministic in the seed
	Surface a = build_random_polygon(5, 99);
	Surface b = build_random_polygon(5, 99);
	CHECK(a.area() == doctest::Approx(b.area()).epsilon(1e-15));
}

TEST_CASE("gluing validation catches length mismatches") {
	Surface tri = build_triangle(1.2, 1.1, 1.3);
	Surface::BuildData bad;
	bad.faces.push_back({{tri.vertex(0, 0), tri.vertex(0, 1), tri.vertex(0, 2)}});
	Surface iso = build_triangle(0.9, 0.9, 1.5);
	bad.faces.push_back({{iso.vertex(0, 0), iso.vertex(0, 1), iso.vertex(0, 2)}});
	bad.gluings.push_back({EdgeRef{0, 0}, EdgeRef{1, 0}});
	bad.marked = {{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 1}, {1, 2}};
	CHECK(raised([&] { Surface::build(std::move(bad)); }) == Errc::LengthMismatch);
}

TEST_CASE("surfaces without any singularity are rejected") {
	// a bare sphere mesh with no flags: every vertex is removable
	std::vector<double> lons{0, M_PI / 2, M_PI, 3 * M_PI / 2};
	Surface::BuildData data;
	std::vector<UnitVec> eq;
	for (double l : lons) eq.push_back({std::cos(l), std::sin(l), 0});
	for (int i = 0; i < 4; ++i)
		data.faces.push_back({{UnitVec{0, 0, 1}, eq[i], eq[(i + 1) % 4]}});
	for (int i = 0; i < 4; ++i)
		data.faces.push_back({{UnitVec{0, 0, -1}, eq[(i + 1) % 4], eq[i]}});
	for (int i = 0; i < 4; ++i) {
		data.gluings.push_back({EdgeRef{i, 2}, EdgeRef{(i + 1) % 4, 0}});
		data.gluings.push_back({EdgeRef{4 + i, 0}, EdgeRef{4 + (i + 1) % 4, 2}});
		data.gluings.push_back({EdgeRef{i, 1}, EdgeRef{4 + i, 1}});
	}
	CHECK(raised([&] { Surface::build(std::move(data)); }) == Errc::GeometryError);
}

TEST_CASE("disconnected meshes are rejected") {
	Surface tri = build_triangle(1.2, 1.1, 1.3);
	Surface::BuildData data;
	for (int j = 0; j < 2; ++j)
		data.faces.push_back({{tri.vertex(0, 0), tri.vertex(0, 1), tri.vertex(0, 2)}});
	data.marked = {{0, 0}, {1, 0}};
	CHECK(raised([&] { Surface::build(std::move(data)); }) == Errc::GeometryError);
}
