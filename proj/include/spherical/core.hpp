#pragma once

#include <vector>

#include "spherical/decompose.hpp"
#include "spherical/geodesics.hpp"
#include "spherical/surface.hpp"

namespace spherical {

// Whether the open half sphere centered at an interior point of a closed
// surface embeds isometrically.  Equivalent to: no singular vertex within
// pi/2 of the point and no geodesic loop at the point shorter than pi; both
// are decided by exact unfolding.  Throws SingularCenter when the point sits
// on a singular vertex.
bool embeds_half_sphere_at(const Surface& s, int face, const UnitVec& point,
                           const SearchOptions& opt = {});

// A connected component of the union of all embedded open half spheres.
// The boundary is a cyclic chain of geodesic arcs between singular vertices:
// side i runs from vertices[i] to vertices[(i+1) % b], and angles[i] is the
// angle on the domain side at vertices[i].  Every such component develops as
// the sphere minus a convex polygon contained in a closed half sphere; the
// degenerate shapes are flagged.
struct ExteriorDomain {
	enum class Shape {
		PolygonComplement,
		HalfSphere,     // every boundary angle is pi
		FoliatedDigon,  // two antipodal corners, every other angle pi
	};
	Shape shape = Shape::PolygonComplement;
	std::vector<int> vertices;            // singular classes of the parent surface
	std::vector<double> angles;           // domain-side angles, in [pi, 2 pi]
	std::vector<double> sides;            // side lengths, all < pi
	std::vector<std::vector<int>> words;  // crossing words of the sides
	double area = 0;
	double digon_angle = 0;               // corner angle when FoliatedDigon
	Surface geometry;                     // the domain cut out as its own surface
};

// All exterior domains of a closed surface.  Throws SingularSphereInput for
// the two-cone sphere swept by a single arc family (its one domain is not
// bounded by saddle connections) and RemovableSingularitiesOnly when no
// genuine cone point exists to anchor the search.
std::vector<ExteriorDomain> exterior_domains(const Surface& s,
                                             const SearchOptions& opt = {});

// Dual of the domain boundary: a side of length L contributes a soul angle
// pi - L and a corner of angle theta a soul side of length theta - pi.
// Half-sphere domains collapse to a point, foliated digons to a segment.
enum class SoulKind { Point, Segment, Polygon };

struct Soul {
	SoulKind kind = SoulKind::Polygon;
	double length = 0;           // Segment only
	std::vector<double> angles;  // Polygon: pi - sides[i]
	std::vector<double> sides;   // Polygon: angles[i] - pi
};

Soul soul_of(const ExteriorDomain& d);

// Census of the core, the complement of the union of embedded half spheres.
struct CoreReport {
	std::vector<ExteriorDomain> domains;
	int genus = 0;
	int cone_points = 0;             // n: non-removable singular classes
	double alpha_sum = 0;            // total cone angle over 2 pi
	std::vector<int> boundary_arcs;  // b_i, one entry per domain
	bool degenerate_core = false;    // core interior is empty
	bool has_half_sphere_domain = false;
	bool has_foliated_digon_domain = false;
	std::vector<Piece> core_triangles;  // triangulation of the core interior
	int triangle_count = 0;             // t, zero when degenerate
	int formula_count = 0;              // 4g - 4 + 2n + 2p - sum b_i
	bool counts_consistent = true;      // t matches the formula when applicable
	double core_area = 0;
	double core_angle = 0;       // total corner angle of the triangulation
	double core_area_bound = 0;  // (8g - 8 + 4n) pi, strict when positive
	double core_angle_bound = 0; // (12g - 12 + 6n) pi, strict when positive
	double domains_lower = 0;    // 3 - 3g - 3n/2 + alpha_sum/2; needs no digon domain
	double domains_upper = 0;    // 2 - 2g - n + alpha_sum
	bool bounds_ok = true;
	bool slit_domain_expected = false;  // alpha_sum >= 10g - 10 + 5n, no digon domain
	bool slit_domain_found = false;     // some domain has exactly two sides
	bool discriminant_member = false;   // some domain angle equals pi
	double discriminant_margin = 0;     // min |angle - pi|; infinite without corners
};

CoreReport core_report(const Surface& s, const SearchOptions& opt = {});

}  // namespace spherical
