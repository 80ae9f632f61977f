#pragma once

#include <optional>
#include <vector>

#include "spherical/geodesics.hpp"
#include "spherical/surface.hpp"

namespace spherical {

// Slit the surface along a traced geodesic whose endpoints are singular
// vertices (a closed loop based at one vertex counts).  The arc may cross
// faces transversally, run along mesh edges, and pass straight through
// removable vertices; crossed faces are refined so the slit becomes mesh
// boundary.  Returns the component surfaces: one if the slit does not
// disconnect, two if it does.  Throws BoundaryArc if the path only runs
// along edges that are already boundary.
std::vector<Surface> cut(const Surface& s, const TracePath& arc);

// Dichotomy for boundary vertices of a spherical polygon.  A vertex
// "reaches pi" if geodesics into some interior direction extend to length
// pi before leaving; otherwise the sup of exit lengths over all directions
// is strictly below pi and sup_exit certifies the bound.
struct VertexType {
	int vclass = -1;
	bool reaches_pi = false;
	double angle = 0;
	Corner witness_corner{};   // direction realizing pi (reaches_pi only)
	double witness_angle = 0;
	double sup_exit = 0;       // certified bound (!reaches_pi only)
};

VertexType classify_vertex(const Surface& s, int vclass, const SearchOptions& opt = {});

enum class PieceTag {
	Triangle,
	FoliatedDigon,
	HalfSphere,
	HalfSphericalConcave,
	ReduciblePolygon,
};

// Verdict for a boundary polygon: one of the three irreducible shapes, or
// reducible with a concrete witness (an interior arc, or a pi-family).
struct Classification {
	PieceTag tag = PieceTag::ReduciblePolygon;
	std::vector<double> angles;  // interior angles at singular boundary vertices, walk order
	std::vector<VertexType> vertex_types;
	std::optional<Connection> witness;
	std::optional<GeodesicFamily> family_witness;
};

// Throws NotAPolygon unless the surface is a genus-zero disk whose
// singularities all sit on the single boundary walk.
Classification classify_irreducible(const Surface& s, const SearchOptions& opt = {});

struct Piece {
	PieceTag tag = PieceTag::ReduciblePolygon;
	Surface geometry;
	std::vector<double> angles;       // singular boundary vertex angles, walk order
	std::vector<VertexType> vertex_types;
	double digon_angle = 0;           // foliated digons: angle at either end
	std::vector<int> marks;           // flagged vertex classes of the piece
};

// One slit applied during decomposition, recorded against the surface it
// was applied to at that moment.
struct ArcRecord {
	int from_class = -1;
	int to_class = -1;
	double length = 0;
	std::vector<int> word;
};

struct Decomposition {
	std::vector<ArcRecord> arcs;
	std::vector<Piece> pieces;
};

// Full pipeline: connect the singular locus, reduce genus, peel closed
// loops, slit interior arcs shortest-first, carve out pi-families as
// foliated digons, and classify what remains.  Piece areas always sum to
// the input area.
Decomposition decompose(const Surface& s, const SearchOptions& opt = {});

}  // namespace spherical
