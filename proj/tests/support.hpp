#pragma once

#include <cmath>
#include <optional>

#include "spherical/errors.hpp"
#include "spherical/vec3.hpp"

namespace spherical::testing {

// Error code raised by f, if any.
template <class F>
std::optional<Errc> raised(F&& f) {
	try {
		f();
	} catch (const Error& e) {
		return e.code();
	}
	return std::nullopt;
}

// Triangle area from side lengths alone (half-angle formula), an independent
// route around the angle-excess computation used by the library.
inline double area_from_sides(double a, double b, double c) {
	double s = (a + b + c) / 2;
	double t = std::tan(s / 2) * std::tan((s - a) / 2) * std::tan((s - b) / 2) *
	           std::tan((s - c) / 2);
	return 4 * std::atan(std::sqrt(std::max(0.0, t)));
}

// Residual of the angle law of cosines cos A = -cos B cos C + sin B sin C cos a
// linking a side to its opposite angle.
inline double angle_law_residual(double side_a, double ang_a, double ang_b, double ang_c) {
	return std::fabs(std::cos(ang_a) + std::cos(ang_b) * std::cos(ang_c) -
	                 std::sin(ang_b) * std::sin(ang_c) * std::cos(side_a));
}

// Rodrigues rotation about a unit axis, independent of the quaternion path.
inline Vec3 rodrigues(const UnitVec& axis, double angle, const Vec3& v) {
	Vec3 k = axis;
	return v * std::cos(angle) + cross(k, v) * std::sin(angle) +
	       k * (dot(k, v) * (1 - std::cos(angle)));
}

} // namespace spherical::testing
