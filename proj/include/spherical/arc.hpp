#pragma once

#include "spherical/vec3.hpp"

namespace spherical {

// Oriented great-circle arc.  The pole disambiguates which way around the
// circle the arc runs, so lengths up to 2*pi (closed circles through a
// basepoint) are representable.
struct Arc {
	UnitVec start;
	UnitVec end;
	UnitVec pole;   // start x direction; the arc turns counterclockwise about it
	double length = 0;

	UnitVec point_at(double t) const { // t in [0, length]
		UnitVec dir = cross(pole, start);
		return geodesic_point(start, dir, t);
	}

	UnitVec direction_at(double t) const {
		UnitVec dir = cross(pole, start);
		UnitVec p = geodesic_point(start, dir, t);
		return cross(pole, p);
	}

	// Shorter of the two arcs from a to b; requires a, b non-antipodal.
	static Arc through(const UnitVec& a, const UnitVec& b);
};

} // namespace spherical
