#include "spherical/arc.hpp"

#include "spherical/errors.hpp"
#include "spherical/trig.hpp"

namespace spherical {

Arc Arc::through(const UnitVec& a, const UnitVec& b) {
	Arc arc;
	arc.start = a;
	arc.end = b;
	arc.length = arc_length(a, b);
	Vec3 p = cross(a, b);
	double n = norm(p);
	if (n == 0) fail(Errc::InvalidParameter, "arc endpoints identical or antipodal");
	arc.pole = p / n;
	return arc;
}

} // namespace spherical
