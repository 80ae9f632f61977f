#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"

#include "spherical/builders.hpp"
#include "spherical/core.hpp"
#include "spherical/trig.hpp"

#include "support.hpp"

using namespace spherical;
using spherical::testing::raised;

namespace {

constexpr double kPi = M_PI;

// Square at colatitude 1: side length, interior angle, and the derived
// domain-side quantities.  Independent closed forms: cos(side) = cos^2(1),
// the angle from the tangent-vector inner product at a corner.
constexpr double kSquareSide = 1.2745557823062943;
constexpr double kSquareAngle = 2.1508580751524464;
constexpr double kDomainAngle = 4.13232723202714;        // 2 pi - kSquareAngle
constexpr double kComplementArea = 10.246123620928973;   // 4 pi - square area
constexpr double kSoulAngle = 1.8670368712834988;        // pi - kSquareSide
constexpr double kSoulSide = 0.9907345784373467;         // kDomainAngle - pi
constexpr double kFourPi = 12.566370614359172;

UnitVec colat_lon(double colat, double lon) {
	return {std::sin(colat) * std::cos(lon), std::sin(colat) * std::sin(lon),
	        std::cos(colat)};
}

UnitVec face_centroid(const Surface& s, int f) {
	return normalized(s.vertex(f, 0) + s.vertex(f, 1) + s.vertex(f, 2));
}

// Domains in a size-then-area order so goldens do not depend on search order.
std::vector<const ExteriorDomain*> sorted_domains(const std::vector<ExteriorDomain>& ds) {
	std::vector<const ExteriorDomain*> out;
	for (const auto& d : ds) out.push_back(&d);
	std::sort(out.begin(), out.end(), [](const ExteriorDomain* a, const ExteriorDomain* b) {
		if (a->vertices.size() != b->vertices.size())
			return a->vertices.size() < b->vertices.size();
		return a->area < b->area;
	});
	return out;
}

double domain_area_sum(const std::vector<ExteriorDomain>& ds) {
	return std::accumulate(ds.begin(), ds.end(), 0.0,
	                       [](double t, const ExteriorDomain& d) { return t + d.area; });
}

void check_duality_round_trip(const ExteriorDomain& d) {
	Soul soul = soul_of(d);
	REQUIRE(soul.kind == SoulKind::Polygon);
	REQUIRE(soul.angles.size() == d.sides.size());
	REQUIRE(soul.sides.size() == d.angles.size());
	for (std::size_t i = 0; i < soul.angles.size(); ++i)
		CHECK(std::fabs((kPi - soul.angles[i]) - d.sides[i]) < 1e-9);
	for (std::size_t i = 0; i < soul.sides.size(); ++i)
		CHECK(std::fabs((kPi + soul.sides[i]) - d.angles[i]) < 1e-9);
}

} // namespace

TEST_CASE("half sphere embedding probe") {
	Surface ct = build_quad_complement_torus(1.0);
	// the south pole is a flat mesh vertex of face 0; everything within a
	// quarter turn of it is regular
	CHECK(embeds_half_sphere_at(ct, 0, UnitVec{0, 0, -1}));
	// close to the cone class the disk would swallow the singularity
	UnitVec near_cone =
	    normalized(0.9 * colat_lon(1.0, 0) + 0.05 * colat_lon(1.0, kPi / 2) +
	               0.05 * UnitVec{0, 0, -1});
	CHECK(!embeds_half_sphere_at(ct, 0, near_cone));

	Surface ms = build_marked_sphere();
	CHECK(embeds_half_sphere_at(ms, 4, UnitVec{0, 0, -1}));
	CHECK(raised([&] { embeds_half_sphere_at(ms, 0, UnitVec{0, 0, 1}); }) ==
	      Errc::SingularCenter);

	// the two-cone sphere is too slim everywhere: the waist loop is short
	Surface s03 = build_singular_sphere(0.3);
	CHECK(!embeds_half_sphere_at(s03, 0, face_centroid(s03, 0)));

	Surface octant = build_triangle(kPi / 2, kPi / 2, kPi / 2);
	CHECK(raised([&] { embeds_half_sphere_at(octant, 0, face_centroid(octant, 0)); }) ==
	      Errc::InvalidParameter);
}

TEST_CASE("exterior domains of the square complement torus") {
	Surface ct = build_quad_complement_torus(1.0);
	auto ds = exterior_domains(ct);
	REQUIRE(ds.size() == 1);
	const ExteriorDomain& d = ds[0];
	CHECK(d.shape == ExteriorDomain::Shape::PolygonComplement);
	REQUIRE(d.vertices.size() == 4);
	REQUIRE(d.angles.size() == 4);
	REQUIRE(d.sides.size() == 4);
	for (int v : d.vertices) CHECK(v == d.vertices[0]); // single cone class
	for (double a : d.angles) CHECK(std::fabs(a - kDomainAngle) < 1e-9);
	for (double l : d.sides) CHECK(std::fabs(l - kSquareSide) < 1e-9);
	CHECK(std::fabs(d.area - kComplementArea) < 1e-8);
	CHECK(d.geometry.num_boundary_walks() == 1);
	CHECK(d.geometry.genus() == 0);
	CHECK(std::fabs(d.geometry.area() - d.area) < 1e-8);

	Soul soul = soul_of(d);
	REQUIRE(soul.kind == SoulKind::Polygon);
	for (double a : soul.angles) CHECK(std::fabs(a - kSoulAngle) < 1e-9);
	for (double l : soul.sides) CHECK(std::fabs(l - kSoulSide) < 1e-9);
	check_duality_round_trip(d);
}

TEST_CASE("no domains on the small torus") {
	Surface qt = build_quad_torus(1.0);
	CHECK(exterior_domains(qt).empty());
}

TEST_CASE("slit sphere domains around glued pearls") {
	Surface pr = build_pearl_row(2, 1.0);
	auto ds = exterior_domains(pr);
	REQUIRE(ds.size() == 2);
	for (const ExteriorDomain& d : ds) {
		CHECK(d.shape == ExteriorDomain::Shape::PolygonComplement);
		REQUIRE(d.vertices.size() == 2);
		CHECK(d.vertices[0] != d.vertices[1]); // the two slit endpoints
		for (double a : d.angles) CHECK(std::fabs(a - 2 * kPi) < 1e-9);
		for (double l : d.sides) CHECK(std::fabs(l - 1.0) < 1e-9);
		CHECK(std::fabs(d.area - kFourPi) < 1e-8);

		// a slit sphere's soul is the digon dual to the doubled slit
		Soul soul = soul_of(d);
		REQUIRE(soul.kind == SoulKind::Polygon);
		REQUIRE(soul.angles.size() == 2);
		for (double a : soul.angles) CHECK(std::fabs(a - 2.1415926535897931) < 1e-9);
		for (double l : soul.sides) CHECK(std::fabs(l - kPi) < 1e-9);
		check_duality_round_trip(d);
	}
}

TEST_CASE("degenerate souls") {
	ExteriorDomain digon;
	digon.shape = ExteriorDomain::Shape::FoliatedDigon;
	digon.digon_angle = kPi + 0.4;
	Soul seg = soul_of(digon);
	CHECK(seg.kind == SoulKind::Segment);
	CHECK(std::fabs(seg.length - 0.4) < 1e-12);

	ExteriorDomain hemi;
	hemi.shape = ExteriorDomain::Shape::HalfSphere;
	CHECK(soul_of(hemi).kind == SoulKind::Point);
}

TEST_CASE("domain input guards") {
	CHECK(raised([] { exterior_domains(build_singular_sphere(0.3)); }) ==
	      Errc::SingularSphereInput);
	CHECK(raised([] { exterior_domains(build_marked_sphere()); }) ==
	      Errc::RemovableSingularitiesOnly);
	CHECK(raised([] { exterior_domains(build_pearl_row(1, 1.0)); }) ==
	      Errc::RemovableSingularitiesOnly);
	CHECK(raised([] { exterior_domains(build_triangle(kPi / 2, kPi / 2, kPi / 2)); }) ==
	      Errc::InvalidParameter);
	CHECK(raised([] { core_report(build_singular_sphere(0.3)); }) ==
	      Errc::SingularSphereInput);
}

TEST_CASE("core census of the square complement torus") {
	CoreReport r = core_report(build_quad_complement_torus(1.0));
	CHECK(r.genus == 1);
	CHECK(r.cone_points == 1);
	CHECK(std::fabs(r.alpha_sum - 2.6307212218014753) < 1e-9);
	REQUIRE(r.domains.size() == 1);
	REQUIRE(r.boundary_arcs == std::vector<int>{4});
	CHECK(r.degenerate_core);
	CHECK(r.core_triangles.empty());
	CHECK(r.triangle_count == 0);
	CHECK(r.formula_count == 0); // 4g-4+2n+2p-sum b = 0+2+2-4
	CHECK(r.counts_consistent);
	CHECK(std::fabs(r.core_area) < 1e-8);
	CHECK(!r.has_half_sphere_domain);
	CHECK(!r.has_foliated_digon_domain);
	CHECK(r.bounds_ok);
	CHECK(std::fabs(r.domains_lower - -0.18463938909926236) < 1e-9);
	CHECK(std::fabs(r.domains_upper - 1.6307212218014753) < 1e-9);
	CHECK(!r.slit_domain_expected);
	CHECK(!r.slit_domain_found);
	CHECK(!r.discriminant_member);
	CHECK(std::fabs(r.discriminant_margin - kSoulSide) < 1e-9); // min |angle - pi|
}

TEST_CASE("core census of the small torus") {
	Surface qt = build_quad_torus(1.0);
	CoreReport r = core_report(qt);
	CHECK(r.genus == 1);
	CHECK(r.cone_points == 1);
	CHECK(std::fabs(r.alpha_sum - 1.3692787781985247) < 1e-9);
	CHECK(r.domains.empty());
	CHECK(!r.degenerate_core); // the core is the whole surface
	CHECK(r.triangle_count == 2);
	CHECK(r.formula_count == 2); // 0+2+0-0
	CHECK(r.counts_consistent);
	for (const Piece& p : r.core_triangles) CHECK(p.tag == PieceTag::Triangle);
	CHECK(std::fabs(r.core_area - qt.area()) < 1e-8);
	CHECK(std::fabs(r.core_area - 2.3202469934301995) < 1e-8);
	CHECK(std::fabs(r.core_angle - 8.6034323006097855) < 1e-8); // 2 pi + area
	CHECK(std::fabs(r.core_angle_bound - 6 * kPi) < 1e-12);
	CHECK(r.core_angle < r.core_angle_bound);
	CHECK(r.core_area < r.core_area_bound);
	CHECK(r.bounds_ok);
	CHECK(std::fabs(r.domains_lower - -0.8153606109007376) < 1e-9);
	CHECK(std::fabs(r.domains_upper - 0.3692787781985247) < 1e-9);
	CHECK(!r.slit_domain_expected);
	CHECK(!r.discriminant_member);
	CHECK(std::isinf(r.discriminant_margin));
}

TEST_CASE("core census of the pearl necklace") {
	CoreReport r = core_report(build_pearl_row(2, 1.0));
	CHECK(r.genus == 0);
	CHECK(r.cone_points == 2);
	CHECK(std::fabs(r.alpha_sum - 4.0) < 1e-9);
	REQUIRE(r.domains.size() == 2);
	REQUIRE(r.boundary_arcs == std::vector<int>({2, 2}));
	CHECK(r.degenerate_core);
	CHECK(r.triangle_count == 0);
	CHECK(r.formula_count == 0); // -4+4+4-4
	CHECK(r.counts_consistent);
	CHECK(r.bounds_ok);
	CHECK(std::fabs(r.domains_lower - 2.0) < 1e-9); // attained: p == 2
	CHECK(std::fabs(r.domains_upper - 4.0) < 1e-9);
	CHECK(r.slit_domain_expected);
	CHECK(r.slit_domain_found);
	CHECK(!r.discriminant_member);
	CHECK(std::fabs(r.discriminant_margin - kPi) < 1e-9);
}

TEST_CASE("core census of the pearl torus") {
	Surface pt = build_pearl_torus(2, 1.0);
	REQUIRE(pt.closed());
	CoreReport r = core_report(pt);
	CHECK(r.genus == 1);
	CHECK(r.cone_points == 1);
	CHECK(std::fabs(r.alpha_sum - 6.6307212218014753) < 1e-9); // cone angle > 10 pi
	REQUIRE(r.domains.size() == 3);
	auto order = sorted_domains(r.domains);
	CHECK(order[0]->vertices.size() == 2);
	CHECK(order[1]->vertices.size() == 2);
	CHECK(order[2]->vertices.size() == 4);
	CHECK(std::fabs(order[0]->area - kFourPi) < 1e-8);
	CHECK(std::fabs(order[1]->area - kFourPi) < 1e-8);
	CHECK(std::fabs(order[2]->area - kComplementArea) < 1e-8);
	for (double l : order[0]->sides) CHECK(std::fabs(l - kSquareSide) < 1e-9);
	CHECK(r.degenerate_core);
	CHECK(r.triangle_count == 0);
	CHECK(r.formula_count == 0); // 0+2+6-8
	CHECK(r.counts_consistent);
	CHECK(r.bounds_ok);
	CHECK(r.slit_domain_expected);
	CHECK(r.slit_domain_found);
	CHECK(std::fabs(domain_area_sum(r.domains) - pt.area()) < 1e-8);
}

TEST_CASE("area and bound audits across closed fixtures") {
	std::vector<Surface> fixtures;
	fixtures.push_back(build_quad_complement_torus(1.0));
	fixtures.push_back(build_quad_torus(1.0));
	fixtures.push_back(build_pearl_row(2, 1.0));
	fixtures.push_back(build_pearl_row(3, 0.5));
	fixtures.push_back(build_pearl_torus(2, 1.0));
	for (const Surface& s : fixtures) {
		CoreReport r = core_report(s);
		CHECK(std::fabs(domain_area_sum(r.domains) + r.core_area - s.area()) < 1e-8);
		for (const ExteriorDomain& d : r.domains) {
			if (d.shape == ExteriorDomain::Shape::FoliatedDigon) continue;
			CHECK(d.area > 2 * kPi - 1e-8);
			CHECK(d.area < 4 * kPi + 1e-8);
			for (double l : d.sides) CHECK(l < kPi - 1e-9);
			for (double a : d.angles) {
				CHECK(a > kPi - 1e-7);
				CHECK(a < 2 * kPi + 1e-7);
			}
		}
		CHECK(r.bounds_ok);
		CHECK(r.counts_consistent);
		if (!r.degenerate_core) CHECK(r.core_angle < r.core_angle_bound);
		if (r.slit_domain_expected) CHECK(r.slit_domain_found);
	}
}
