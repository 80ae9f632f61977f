#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"

#include "spherical/builders.hpp"
#include "spherical/geodesics.hpp"
#include "spherical/trig.hpp"

#include "support.hpp"

using namespace spherical;
using spherical::testing::raised;

namespace {

constexpr double kPi = M_PI;

UnitVec on_sphere(double colat, double lon) {
	return {std::sin(colat) * std::cos(lon), std::sin(colat) * std::sin(lon), std::cos(colat)};
}

int find_face(const Surface& s, const UnitVec& x) {
	for (int f = 0; f < s.num_faces(); ++f) {
		const auto& v = s.face(f).v;
		if (triple(v[0], v[1], x) >= -1e-12 && triple(v[1], v[2], x) >= -1e-12 &&
		    triple(v[2], v[0], x) >= -1e-12)
			return f;
	}
	return -1;
}

std::vector<double> lengths_up_to(const Inventory& inv, double cap) {
	std::vector<double> v;
	for (const Connection& c : inv.connections)
		if (c.length <= cap) v.push_back(c.length);
	return v;
}

} // namespace

TEST_CASE("trace from an interior point of the octant triangle") {
	Surface s = build_triangle(kPi / 2, kPi / 2, kPi / 2);
	UnitVec x = normalized(Vec3{1, 1, 1});

	SUBCASE("straight into the apex") {
		TracePath tr = trace_from_point(s, 0, x, tangent_toward(x, s.vertex(0, 0)));
		CHECK(tr.stop == TraceStop::Singularity);
		CHECK(tr.end_class == s.vclass(0, 0));
		// distance from the face centroid to a vertex of the octant
		CHECK(tr.length == doctest::Approx(0.9553166181245092).epsilon(1e-9));
		CHECK(tr.steps.size() == 1);
	}

	SUBCASE("out through the opposite side") {
		UnitVec mid = on_sphere(kPi / 2, kPi / 4);
		TracePath tr = trace_from_point(s, 0, x, tangent_toward(x, mid));
		CHECK(tr.stop == TraceStop::Boundary);
		CHECK(tr.length == doctest::Approx(0.6154797086703874).epsilon(1e-9));
		CHECK(std::fabs(tr.end_point.z) < 1e-9);
		CHECK(arc_length(tr.end_point, mid) < 1e-9);
	}

	SUBCASE("budget cap ends the trace inside the face") {
		TraceOptions o;
		o.max_len = 0.3;
		TracePath tr = trace_from_point(s, 0, x, tangent_toward(x, s.vertex(0, 0)), o);
		CHECK(tr.stop == TraceStop::Budget);
		CHECK(tr.length == doctest::Approx(0.3));
		CHECK(arc_length(tr.end_point, x) == doctest::Approx(0.3).epsilon(1e-9));
	}
}

TEST_CASE("trace from a corner of the octant triangle") {
	Surface s = build_triangle(kPi / 2, kPi / 2, kPi / 2);

	SUBCASE("mid wedge direction reaches the far side") {
		TracePath tr = trace_from_corner(s, {0, 0}, kPi / 4);
		CHECK(tr.stop == TraceStop::Boundary);
		CHECK(tr.length == doctest::Approx(kPi / 2).epsilon(1e-9));
		CHECK(arc_length(tr.end_point, on_sphere(kPi / 2, kPi / 4)) < 1e-9);
	}

	SUBCASE("directions on the wedge sides are rejected") {
		CHECK(raised([&] { trace_from_corner(s, {0, 0}, 0.0); }) == Errc::AmbiguousStart);
		CHECK(raised([&] { trace_from_corner(s, {0, 0}, kPi / 2); }) == Errc::AmbiguousStart);
	}

	SUBCASE("along an edge to the next vertex") {
		TracePath tr = trace_along_edge(s, EdgeRef{0, 0}, false);
		CHECK(tr.stop == TraceStop::Singularity);
		CHECK(tr.end_class == s.vclass(0, 1));
		CHECK(tr.length == doctest::Approx(kPi / 2).epsilon(1e-9));
		CHECK(tr.steps.size() == 1);
		CHECK(tr.steps[0].along_edge.valid());
	}
}

TEST_CASE("trace through a removable vertex continues straight") {
	Surface s = build_marked_sphere();
	// leave the mark anywhere inside a wedge: the great circle passes the
	// equator and the smooth south pole and refocuses on the mark at 2*pi
	TracePath tr = trace_from_corner(s, {0, 0}, 0.7);
	CHECK(tr.stop == TraceStop::Singularity);
	CHECK(tr.end_class == s.vclass(0, 0));
	CHECK(tr.length == doctest::Approx(2 * kPi).epsilon(1e-9));
	CHECK(tr.through.empty()); // the south pole is smooth, not a pass-through
}

TEST_CASE("saddle connections of a slit sphere") {
	Surface s = build_slit_sphere(1.0);
	Inventory inv = enumerate_connections(s);

	REQUIRE(inv.connections.size() == 3);
	CHECK(inv.connections[0].length == doctest::Approx(1.0).epsilon(1e-9));
	CHECK(inv.connections[1].length == doctest::Approx(1.0).epsilon(1e-9));
	CHECK(inv.connections[2].length == doctest::Approx(5.283185307179586).epsilon(1e-9));
	// the two short ones are the slit sides; the long one runs around the
	// glued equator on the far side
	CHECK(inv.connections[0].on_boundary);
	CHECK(inv.connections[1].on_boundary);
	CHECK(!inv.connections[2].on_boundary);
	for (const Connection& c : inv.connections) {
		CHECK(c.along_edges);
		CHECK(c.from_class != c.to_class);
	}

	CHECK(inv.pi_families.empty()); // slit endpoints have smooth antipodes

	// every direction off a slit endpoint closes up around the sphere
	REQUIRE(inv.loop_families.size() == 2);
	for (const GeodesicFamily& f : inv.loop_families) {
		CHECK(f.full_turn);
		CHECK(f.closes_up);
		REQUIRE(f.digons.size() == 2);
		double sum = 0;
		for (const FamilyDigon& d : f.digons) {
			CHECK(d.angle == doctest::Approx(kPi).epsilon(1e-6));
			CHECK(d.antipode_class == f.source_class);
			CHECK(d.mid.stop == TraceStop::Singularity);
			CHECK(d.mid.length == doctest::Approx(2 * kPi).epsilon(1e-6));
			sum += d.angle;
		}
		CHECK(sum == doctest::Approx(2 * kPi).epsilon(1e-6));
	}
}

TEST_CASE("meridian family of a two-cone sphere") {
	Surface s = build_singular_sphere(0.3);
	Inventory inv = enumerate_connections(s);

	CHECK(inv.connections.empty()); // every arc between the cones has length pi
	CHECK(inv.loop_families.empty());
	REQUIRE(inv.pi_families.size() == 2);
	int north = s.vclass(0, 0);
	int south = s.vclass(1, 0);
	for (const GeodesicFamily& f : inv.pi_families) {
		CHECK(!f.full_turn);
		CHECK(f.closes_up);
		REQUIRE(f.digons.size() == 1);
		const FamilyDigon& d = f.digons[0];
		CHECK(d.angle == doctest::Approx(0.6 * kPi).epsilon(1e-6));
		CHECK(d.antipode_class == (f.source_class == north ? south : north));
		CHECK(!d.contains_half_sphere);
		CHECK(d.mid.stop == TraceStop::Singularity);
		CHECK(d.mid.length == doctest::Approx(kPi).epsilon(1e-6));
		CHECK(d.mid.end_class == d.antipode_class);
	}
}

TEST_CASE("closed loop family of the once-marked sphere") {
	Surface s = build_marked_sphere();
	Inventory inv = enumerate_connections(s);

	CHECK(inv.connections.empty());
	CHECK(inv.pi_families.empty());
	REQUIRE(inv.loop_families.size() == 1);
	const GeodesicFamily& f = inv.loop_families[0];
	CHECK(f.source_class == s.vclass(0, 0));
	CHECK(f.full_turn);
	CHECK(f.closes_up);
	REQUIRE(f.digons.size() == 1);
	CHECK(f.digons[0].angle == doctest::Approx(2 * kPi).epsilon(1e-6));
	CHECK(f.digons[0].contains_half_sphere);
	CHECK(f.digons[0].mid.length == doctest::Approx(2 * kPi).epsilon(1e-6));
}

TEST_CASE("short spectrum of the square torus") {
	Surface s = build_quad_torus(1.0);
	Inventory inv = enumerate_connections(s);

	// sides come in two classes; both square diagonals have length 2, one
	// along the mesh diagonal and one crossing it
	std::vector<double> low = lengths_up_to(inv, 2.0 + 1e-6);
	REQUIRE(low.size() == 4);
	CHECK(low[0] == doctest::Approx(1.2745557823062943).epsilon(1e-9));
	CHECK(low[1] == doctest::Approx(1.2745557823062943).epsilon(1e-9));
	CHECK(low[2] == doctest::Approx(2.0).epsilon(1e-9));
	CHECK(low[3] == doctest::Approx(2.0).epsilon(1e-9));
	int along = 0;
	for (const Connection& c : inv.connections)
		if (c.length <= 2.0 + 1e-6 && c.along_edges) ++along;
	CHECK(along == 3); // both sides and the mesh diagonal
	CHECK(inv.pi_families.empty());
}

TEST_CASE("vertex probes") {
	SUBCASE("octant corner sees only a quarter sphere") {
		Surface s = build_triangle(kPi / 2, kPi / 2, kPi / 2);
		VertexProbe p = probe_vertex(s, s.vclass(0, 0));
		CHECK(!p.antipode_covered);
		CHECK(p.sup_exit == doctest::Approx(kPi / 2).epsilon(1e-9));
	}

	SUBCASE("mark on the round sphere reaches its antipode") {
		Surface s = build_marked_sphere();
		VertexProbe p = probe_vertex(s, s.vclass(0, 0));
		CHECK(p.antipode_covered);
		CHECK(p.sup_exit == doctest::Approx(kPi));
	}

	SUBCASE("boundary mark of a half sphere reaches the opposite rim point") {
		std::vector<double> marks{0.0};
		Surface s = build_half_sphere(marks);
		int cls = -1;
		for (int c = 0; c < s.num_classes(); ++c)
			if (s.class_flagged(c)) cls = c;
		REQUIRE(cls >= 0);
		VertexProbe p = probe_vertex(s, cls);
		CHECK(p.antipode_covered);
	}

	SUBCASE("torus cone point is antipode covered") {
		Surface s = build_quad_torus(1.0);
		VertexProbe p = probe_vertex(s, s.vclass(0, 0));
		CHECK(p.antipode_covered);
		CHECK(p.sup_exit == doctest::Approx(kPi));
	}
}

TEST_CASE("distance from an interior point to the singular set") {
	SUBCASE("round sphere: colatitude to the mark") {
		Surface s = build_marked_sphere();
		UnitVec x = on_sphere(2.0, 0.3);
		int f = find_face(s, x);
		REQUIRE(f >= 0);
		auto d = distance_to_singular(s, f, x, 3.0);
		REQUIRE(d.has_value());
		CHECK(*d == doctest::Approx(2.0).epsilon(1e-9));
		CHECK(!distance_to_singular(s, f, x, 1.5).has_value());
	}

	SUBCASE("two-cone sphere: nearest cone along the meridian") {
		Surface s = build_singular_sphere(0.3);
		UnitVec x = on_sphere(0.5, 0.1 * kPi);
		int f = find_face(s, x);
		REQUIRE(f >= 0);
		auto d = distance_to_singular(s, f, x, 2.0);
		REQUIRE(d.has_value());
		CHECK(*d == doctest::Approx(0.5).epsilon(1e-9));
		CHECK(!distance_to_singular(s, f, x, 0.3).has_value());
	}
}

TEST_CASE("shortest loop based at an interior point") {
	SUBCASE("loop around a cone point") {
		Surface s = build_singular_sphere(0.3);
		UnitVec x = on_sphere(0.5, 0.1 * kPi);
		int f = find_face(s, x);
		REQUIRE(f >= 0);
		auto l = shortest_loop_at(s, f, x, 2.0);
		REQUIRE(l.has_value());
		// cos L = cos^2 d + sin^2 d cos theta around a cone of angle theta
		CHECK(*l == doctest::Approx(0.7966248049593373).epsilon(1e-7));
	}

	SUBCASE("round sphere has no short loops") {
		Surface s = build_marked_sphere();
		UnitVec x = on_sphere(2.0, 0.3);
		int f = find_face(s, x);
		REQUIRE(f >= 0);
		CHECK(!shortest_loop_at(s, f, x, 3.0).has_value());
	}
}

TEST_CASE("search budget is enforced") {
	Surface s = build_quad_torus(1.0);
	SearchOptions opt;
	opt.budget = 10;
	CHECK(raised([&] { enumerate_connections(s, opt); }) == Errc::BudgetExceeded);
}
