#pragma once

#include <cmath>

namespace spherical {

struct Vec3 {
	double x = 0, y = 0, z = 0;

	Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
	Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
	Vec3 operator-() const { return {-x, -y, -z}; }
	Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
	Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
	Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
};

// Points on the unit sphere are plain Vec3s kept at unit norm by the
// operations that produce them.
using UnitVec = Vec3;

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
	return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm2(const Vec3& v) { return dot(v, v); }
inline double norm(const Vec3& v) { return std::sqrt(norm2(v)); }

inline Vec3 normalized(const Vec3& v) {
	double n = norm(v);
	return {v.x / n, v.y / n, v.z / n};
}

inline double triple(const Vec3& a, const Vec3& b, const Vec3& c) { return dot(cross(a, b), c); }

inline bool is_unit(const Vec3& v, double eps) { return std::fabs(norm(v) - 1.0) <= eps; }

// Unit tangent at p pointing toward q.  Requires q not within eps of +-p.
inline UnitVec tangent_toward(const UnitVec& p, const UnitVec& q) {
	Vec3 t = q - dot(p, q) * p;
	return normalized(t);
}

// Some unit tangent at p; deterministic.
inline UnitVec any_tangent(const UnitVec& p) {
	Vec3 ref = std::fabs(p.z) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
	return normalized(cross(p, ref));
}

// Angle of tangent u at p, measured counterclockwise (seen from outside the
// sphere) from tangent ref.  Both must be unit and orthogonal to p.
inline double tangent_angle_ccw(const UnitVec& p, const UnitVec& ref, const UnitVec& u) {
	double s = dot(cross(ref, u), p);
	double c = dot(ref, u);
	double a = std::atan2(s, c);
	if (a < 0) a += 2 * M_PI;
	return a;
}

// Rotate tangent u at p counterclockwise by theta within the tangent plane.
inline UnitVec rotate_tangent(const UnitVec& p, const UnitVec& u, double theta) {
	UnitVec v = cross(p, u); // u rotated by +pi/2
	return normalized(std::cos(theta) * u + std::sin(theta) * v);
}

// Point at arc distance t from p along the geodesic with initial tangent u.
inline UnitVec geodesic_point(const UnitVec& p, const UnitVec& u, double t) {
	return normalized(std::cos(t) * p + std::sin(t) * u);
}

} // namespace spherical
