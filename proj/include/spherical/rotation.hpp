#pragma once

#include <array>

#include "spherical/vec3.hpp"

namespace spherical {

// Rotation of the sphere, stored as a unit quaternion.  Compositions
// renormalize so that long products (path developments, monodromies) do not
// drift away from SO(3); conversion to a matrix happens only when a chart is
// evaluated.
class Rotation {
public:
	Rotation() = default;
	Rotation(double w, double x, double y, double z);

	static Rotation identity() { return {}; }
	static Rotation axis_angle(const UnitVec& axis, double theta);
	// Unique rotation taking a0 to b0 and the direction along the arc a0->a1
	// at a0 to the direction along b0->b1 at b0.  Pairs must be
	// non-degenerate (endpoints not identical or antipodal).
	static Rotation align(const UnitVec& a0, const UnitVec& a1, const UnitVec& b0,
	                      const UnitVec& b1);
	static Rotation from_matrix(const std::array<std::array<double, 3>, 3>& m);

	Rotation operator*(const Rotation& o) const; // composition: (a*b)(v) == a(b(v))
	Rotation inverse() const;
	Vec3 operator()(const Vec3& v) const;

	double angle() const;          // rotation angle folded into [0, pi]
	UnitVec axis() const;          // unit axis matching angle(); arbitrary for identity
	double distance_to_identity() const; // max displacement of a basis vector

	std::array<std::array<double, 3>, 3> matrix() const;

	double w = 1, x = 0, y = 0, z = 0;

private:
	void renormalize();
};

} // namespace spherical
