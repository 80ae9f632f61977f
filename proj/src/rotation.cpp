#include "spherical/rotation.hpp"

#include <cmath>

namespace spherical {

Rotation::Rotation(double w_, double x_, double y_, double z_) : w(w_), x(x_), y(y_), z(z_) {
	renormalize();
}

void Rotation::renormalize() {
	double n = std::sqrt(w * w + x * x + y * y + z * z);
	w /= n;
	x /= n;
	y /= n;
	z /= n;
}

Rotation Rotation::axis_angle(const UnitVec& axis, double theta) {
	double h = 0.5 * theta;
	double s = std::sin(h);
	return Rotation(std::cos(h), axis.x * s, axis.y * s, axis.z * s);
}

Rotation Rotation::operator*(const Rotation& o) const {
	return Rotation(w * o.w - x * o.x - y * o.y - z * o.z,
	                w * o.x + x * o.w + y * o.z - z * o.y,
	                w * o.y - x * o.z + y * o.w + z * o.x,
	                w * o.z + x * o.y - y * o.x + z * o.w);
}

Rotation Rotation::inverse() const {
	Rotation r;
	r.w = w;
	r.x = -x;
	r.y = -y;
	r.z = -z;
	return r;
}

Vec3 Rotation::operator()(const Vec3& v) const {
	// v' = v + 2 w (q x v) + 2 q x (q x v) with q the vector part
	Vec3 q{x, y, z};
	Vec3 t = cross(q, v) * 2.0;
	return v + w * t + cross(q, t);
}

double Rotation::angle() const {
	// Fold the quaternion double cover: result in [0, pi] about axis().
	double s = std::sqrt(x * x + y * y + z * z);
	return 2.0 * std::atan2(s, std::fabs(w));
}

UnitVec Rotation::axis() const {
	double s = std::sqrt(x * x + y * y + z * z);
	if (s == 0) return {0, 0, 1};
	double sign = (w < 0) ? -1.0 : 1.0; // keep (angle, axis) consistent
	return {sign * x / s, sign * y / s, sign * z / s};
}

double Rotation::distance_to_identity() const {
	auto m = matrix();
	double worst = 0;
	for (int i = 0; i < 3; ++i) {
		double dx = m[0][i] - (i == 0), dy = m[1][i] - (i == 1), dz = m[2][i] - (i == 2);
		worst = std::max(worst, std::sqrt(dx * dx + dy * dy + dz * dz));
	}
	return worst;
}

std::array<std::array<double, 3>, 3> Rotation::matrix() const {
	double xx = x * x, yy = y * y, zz = z * z;
	double xy = x * y, xz = x * z, yz = y * z;
	double wx = w * x, wy = w * y, wz = w * z;
	return {{{1 - 2 * (yy + zz), 2 * (xy - wz), 2 * (xz + wy)},
	         {2 * (xy + wz), 1 - 2 * (xx + zz), 2 * (yz - wx)},
	         {2 * (xz - wy), 2 * (yz + wx), 1 - 2 * (xx + yy)}}};
}

Rotation Rotation::from_matrix(const std::array<std::array<double, 3>, 3>& m) {
	// Shepperd's method: pick the largest diagonal combination.
	double tr = m[0][0] + m[1][1] + m[2][2];
	double w, x, y, z;
	if (tr > 0) {
		double s = std::sqrt(tr + 1.0) * 2;
		w = 0.25 * s;
		x = (m[2][1] - m[1][2]) / s;
		y = (m[0][2] - m[2][0]) / s;
		z = (m[1][0] - m[0][1]) / s;
	} else if (m[0][0] > m[1][1] && m[0][0] > m[2][2]) {
		double s = std::sqrt(1.0 + m[0][0] - m[1][1] - m[2][2]) * 2;
		w = (m[2][1] - m[1][2]) / s;
		x = 0.25 * s;
		y = (m[0][1] + m[1][0]) / s;
		z = (m[0][2] + m[2][0]) / s;
	} else if (m[1][1] > m[2][2]) {
		double s = std::sqrt(1.0 + m[1][1] - m[0][0] - m[2][2]) * 2;
		w = (m[0][2] - m[2][0]) / s;
		x = (m[0][1] + m[1][0]) / s;
		y = 0.25 * s;
		z = (m[1][2] + m[2][1]) / s;
	} else {
		double s = std::sqrt(1.0 + m[2][2] - m[0][0] - m[1][1]) * 2;
		w = (m[1][0] - m[0][1]) / s;
		x = (m[0][2] + m[2][0]) / s;
		y = (m[1][2] + m[2][1]) / s;
		z = 0.25 * s;
	}
	return Rotation(w, x, y, z);
}

Rotation Rotation::align(const UnitVec& a0, const UnitVec& a1, const UnitVec& b0,
                         const UnitVec& b1) {
	UnitVec ta = tangent_toward(a0, a1);
	UnitVec tb = tangent_toward(b0, b1);
	Vec3 na = cross(a0, ta);
	Vec3 nb = cross(b0, tb);
	// Columns of F_a are the frame (a0, ta, na); R = F_b * F_a^T.
	std::array<std::array<double, 3>, 3> m;
	const Vec3 acols[3] = {a0, ta, na};
	const Vec3 bcols[3] = {b0, tb, nb};
	for (int i = 0; i < 3; ++i) {
		for (int j = 0; j < 3; ++j) {
			double mij = 0;
			for (int k = 0; k < 3; ++k) {
				const Vec3& bc = bcols[k];
				const Vec3& ac = acols[k];
				double bi = (i == 0) ? bc.x : (i == 1) ? bc.y : bc.z;
				double aj = (j == 0) ? ac.x : (j == 1) ? ac.y : ac.z;
				mij += bi * aj;
			}
			m[i][j] = mij;
		}
	}
	return from_matrix(m);
}

} // namespace spherical
