#pragma once

#include <vector>

#include "spherical/surface.hpp"

namespace spherical {

// Result of splitting edge (f, k) at an interior point x: face f is replaced
// in place by the sub-triangle (start, x, opposite) and a new face
// (x, end, opposite) is appended.  edge_map tells where the three old edge
// slots of f went (the split slot maps to the first half; second_half holds
// the other one).  Slots of other faces are unchanged.
struct SplitResult {
	Surface surface;
	std::array<EdgeRef, 3> edge_map; // indexed by old edge slot of the split face
	EdgeRef first_half, second_half;
	Corner new_vertex; // corner at x on the first half
};

// Split a boundary edge at fraction t in (0,1) of its length, optionally
// flagging the new vertex as a marked point.
SplitResult split_boundary_edge(const Surface& s, EdgeRef e, double t, bool flag_new_vertex);

// Orientation-reversed copy (each chart reflected, faces rewound so they stay
// counterclockwise).
Surface mirrored(const Surface& s);

// Run of consecutive boundary edges in boundary-walk order.
using BoundaryRun = std::vector<EdgeRef>;

// Glue run_a of surface a to run_b of surface b, matching arc length forward
// on a against backward on b (so the identification reverses, as an oriented
// gluing must).  Edges are refined until the subdivision patterns agree.
// a and b may be the same surface if the runs are disjoint; overlapping runs
// would identify an edge with itself and are rejected.
Surface glue_along_boundary(const Surface& a, const BoundaryRun& run_a, const Surface& b,
                            const BoundaryRun& run_b);

// Split build data into connected components, each a valid surface.
std::vector<Surface> split_components(const Surface::BuildData& data);

Surface::BuildData to_build_data(const Surface& s);

} // namespace spherical
