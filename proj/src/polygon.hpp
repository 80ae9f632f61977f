#pragma once

// Shared between the classifier and the decomposition pipeline; not part of
// the public headers.

#include <vector>

#include "spherical/surface.hpp"

namespace spherical {

// Disk with all its singular vertices on the one boundary walk.
bool is_polygon(const Surface& s);

// A singular vertex around the boundary walk, with the straight side run up
// to the next singular vertex.
struct CycleVertex {
	int vclass = -1;
	double angle = 0;
	double side = 0;
	EdgeRef side_edge{}; // first boundary edge of the side
};

std::vector<CycleVertex> singular_cycle(const Surface& s);

// Direction angle of a wedge-relative direction within the whole vertex fan:
// cumulative angle of the class corners before the wedge plus the in-wedge
// angle.  Throws InvalidParameter when the corner is not in the class.
double fan_coordinate(const Surface& s, int vclass, Corner c, double angle);

} // namespace spherical
