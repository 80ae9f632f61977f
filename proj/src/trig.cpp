#include "spherical/trig.hpp"

#include <cmath>

#include "spherical/errors.hpp"
#include "spherical/tolerance.hpp"

namespace spherical {

double arc_length(const UnitVec& a, const UnitVec& b) {
	return 2.0 * std::atan2(norm(a - b), norm(a + b));
}

double corner_angle(const UnitVec& a, const UnitVec& b, const UnitVec& c) {
	UnitVec ta = tangent_toward(b, a);
	UnitVec tc = tangent_toward(b, c);
	return std::atan2(norm(cross(ta, tc)), dot(ta, tc));
}

double spherical_excess(std::span<const double> angles) {
	double s = 0;
	for (double a : angles) s += a;
	return s - (static_cast<double>(angles.size()) - 2.0) * M_PI;
}

std::array<double, 3> triangle_from_angles(double alpha, double beta, double gamma) {
	const Tolerance& tol = global_tolerance();
	const double angs[3] = {alpha, beta, gamma};
	for (double a : angs) {
		if (!(a > 0) || !(a < M_PI))
			fail(Errc::InvalidParameter, "triangle angles must lie in (0, pi)");
	}
	double excess = alpha + beta + gamma - M_PI;
	if (excess <= tol.angle) fail(Errc::NonPositiveExcess, "angle sum does not exceed pi");

	std::array<double, 3> side;
	for (int i = 0; i < 3; ++i) {
		double a = angs[i], b = angs[(i + 1) % 3], c = angs[(i + 2) % 3];
		// polar law of cosines
		double cosv = (std::cos(a) + std::cos(b) * std::cos(c)) / (std::sin(b) * std::sin(c));
		if (cosv > 1) cosv = 1;
		if (cosv < -1) cosv = -1;
		side[i] = std::acos(cosv);
	}
	for (double s : side) {
		if (s <= tol.length || s >= M_PI - tol.length)
			fail(Errc::DegenerateTriangle, "triangle side collapses");
	}
	return side;
}

} // namespace spherical
