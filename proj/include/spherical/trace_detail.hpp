#pragma once

// Shared between the tracer and the unfolding search; not part of the
// public surface of the library.

#include "spherical/surface.hpp"

namespace spherical::detail {

// Where a direction ends up after turning by a given angle around a vertex,
// walking through the corner fan.
struct Turn {
	enum Kind { Interior, AlongEdge, OffSurface } kind = OffSurface;
	Corner corner{};  // Interior: wedge that contains the result
	UnitVec dir;      // Interior: direction in that corner's chart
	EdgeRef edge{};   // AlongEdge: edge the result runs along
	bool reversed = false;
};

// Rotate direction `from` (a tangent at the vertex of `at`, in that face's
// chart) by `turn` radians around the vertex, counterclockwise or clockwise,
// crossing into neighbouring corners as needed.
Turn turn_at_vertex(const Surface& s, Corner at, const UnitVec& from, double turn, bool ccw);

// Vertex snap radius for traced arcs.
double snap_radius();

bool point_in_face(const Surface& s, int face, const UnitVec& x, double slack);

} // namespace spherical::detail
