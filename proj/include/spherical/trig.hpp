#pragma once

#include <array>
#include <span>

#include "spherical/vec3.hpp"

namespace spherical {

// Geodesic distance between unit vectors.  Uses the chord/anti-chord form
// 2*atan2(|a-b|, |a+b|), which stays fully accurate near 0 and near pi where
// acos(dot) loses up to half the significant digits.
double arc_length(const UnitVec& a, const UnitVec& b);

// Interior angle at b of the wedge a-b-c, in [0, pi].
double corner_angle(const UnitVec& a, const UnitVec& b, const UnitVec& c);

// Area of a geodesic polygon with the given interior angles: sum - (k-2)*pi.
double spherical_excess(std::span<const double> angles);

// Side lengths (a, b, c) opposite to the angles (alpha, beta, gamma) of the
// spherical triangle with those interior angles.  Angles must lie in (0, pi)
// with positive excess; degenerate side solutions are rejected.
std::array<double, 3> triangle_from_angles(double alpha, double beta, double gamma);

} // namespace spherical
