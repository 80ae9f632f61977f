#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "spherical/vec3.hpp"

namespace spherical {

// Convex hull of points contained in the open hemisphere around witness_pole.
// Returns indices of the hull vertices in counterclockwise order (seen from
// outside the sphere, looking down the pole).  Computed by gnomonic
// projection to the tangent plane at the pole followed by a planar hull, then
// validated directly on the sphere: gnomonic projection maps great circles to
// straight lines, so hull membership transfers back exactly.
std::vector<std::size_t> hemisphere_convex_hull(std::span<const UnitVec> points,
                                                const UnitVec& witness_pole);

} // namespace spherical
