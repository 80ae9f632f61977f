#pragma once

#include <optional>
#include <vector>

#include "spherical/surface.hpp"

namespace spherical {

// One sub-arc of a traced geodesic, in the chart of the face it crosses.
// For segments that run along a mesh edge, along_edge names that edge with
// its traversal direction (reversed = walked against the edge's own order).
struct TraceStep {
	int face = -1;
	UnitVec enter, exit;
	UnitVec pole; // of the great circle carrying the sub-arc
	EdgeRef along_edge{};
	bool reversed = false;
	EdgeRef exited{}; // glued edge the sub-arc left through; invalid otherwise
};

enum class TraceStop {
	Singularity, // reached a singular vertex
	Boundary,    // left through a boundary point that is not singular
	Budget,      // still going at max_len
};

struct TracePath {
	std::vector<TraceStep> steps;
	double length = 0;
	TraceStop stop = TraceStop::Budget;
	int end_class = -1; // set when stop == Singularity
	int end_face = -1;  // chart of the final point
	UnitVec end_point;
	// singular vertices passed straight through (extremal family sides only):
	// pairs of (vertex class, arc length at the hit)
	std::vector<std::pair<int, double>> through;
};

// How to proceed when a trace runs into a singular vertex.  Extremal sides of
// geodesic families continue straight across, completing the turn to pi on
// the given side of the incoming direction.
enum class SingularRule { Stop, ContinueCcw, ContinueCw };

struct TraceOptions {
	double max_len = 4 * M_PI;
	SingularRule singular = SingularRule::Stop;
};

// Geodesic from a point inside a face.
TracePath trace_from_point(const Surface& s, int face, const UnitVec& point, const UnitVec& dir,
                           const TraceOptions& opt = {});

// Geodesic leaving a vertex through the wedge of the given corner, at the
// given angle counterclockwise from the corner's outgoing edge.  Throws
// AmbiguousStart when the angle is within tolerance of either wedge side;
// use trace_along_edge for those directions.
TracePath trace_from_corner(const Surface& s, Corner c, double angle,
                            const TraceOptions& opt = {});

// Geodesic running along mesh edges, starting down the given edge (reversed =
// from its end vertex back toward its start).  Continues straight through
// flat vertices, possibly leaving the edge graph there.
TracePath trace_along_edge(const Surface& s, EdgeRef e, bool reversed,
                           const TraceOptions& opt = {});

// A geodesic arc between singular vertices with no singularity inside.
struct Connection {
	int from_class = -1, to_class = -1;
	double length = 0;
	Corner corner{};      // wedge the representative leaves through
	double angle = 0;     // direction within that wedge
	bool along_edges = false;
	bool on_boundary = false; // every step runs along boundary edges
	std::vector<int> word;    // canonical edge-crossing word (dedup key)
	TracePath path;
};

// Maximal one-parameter family of length-pi geodesics leaving one vertex, or
// of closed length-2pi geodesic loops through it (full_turn sweep).  Each
// maximal direction interval is a digon; its two extremal sides are geodesics
// broken at the singular vertices that bound the family.
struct FamilyDigon {
	double angle = 0;          // width of the direction interval
	int antipode_class = -1;   // arrival class (pi families)
	TracePath lo, hi;          // extremal sides
	TracePath mid;             // interior representative
	Corner mid_corner{};
	double mid_angle = 0;
	bool lo_on_boundary = false, hi_on_boundary = false;
	bool contains_half_sphere = false; // angle >= pi
};

struct GeodesicFamily {
	int source_class = -1;
	bool full_turn = false; // loops of length 2pi rather than arcs of length pi
	bool closes_up = false; // family sweeps the entire cone angle
	std::vector<FamilyDigon> digons;
};

// All isolated saddle connections up to max_len, plus the families found on
// the way.  Arcs of length pi (and closed loops of length 2pi) always come in
// continuous families and are reported only there.
struct Inventory {
	std::vector<Connection> connections;
	std::vector<GeodesicFamily> pi_families;
	std::vector<GeodesicFamily> loop_families;
};

struct SearchOptions {
	double max_len = 2 * M_PI;
	long budget = 400000; // unfolding states before giving up
};

Inventory enumerate_connections(const Surface& s, const SearchOptions& opt = {});

// Family sweep around one vertex class; full_turn selects closed loops.
GeodesicFamily sweep_family(const Surface& s, int vclass, bool full_turn,
                            const SearchOptions& opt = {});

// Exact development probe of one vertex: whether some direction stays inside
// the surface for a full half turn (reaching the developed antipode), and if
// not, the largest exit length over all directions.
struct VertexProbe {
	bool antipode_covered = false;
	double sup_exit = 0;            // meaningful when !antipode_covered
	Corner witness_corner{};        // direction that realizes the antipode
	double witness_angle = 0;
};

VertexProbe probe_vertex(const Surface& s, int vclass, const SearchOptions& opt = {});

// Shortest geodesic arc joining two components of the singular locus
// (indices into singular_components()).  When the shortest join has length
// pi it is a family generator; the representative returned is the family's
// interior midline and family is set.
struct Connector {
	Connection arc;
	bool family = false;
};

Connector shortest_connector(const Surface& s, int component_a, int component_b,
                             const SearchOptions& opt = {});

// The maximal family of length-pi arcs around one arc of length pi.
// Throws NotPiLength if the generator is not of length pi.
FamilyDigon extend_pi_family(const Surface& s, const Connection& generator,
                             const SearchOptions& opt = {});

// Shortest geodesic from an interior point to any singular vertex, up to the
// cutoff.  Returns nullopt when nothing is within reach.
std::optional<double> distance_to_singular(const Surface& s, int face, const UnitVec& point,
                                           double cutoff, const SearchOptions& opt = {});

// Shortest geodesic loop based at an interior point, up to the cutoff.
std::optional<double> shortest_loop_at(const Surface& s, int face, const UnitVec& point,
                                       double cutoff, const SearchOptions& opt = {});

} // namespace spherical
