#include "spherical/hull.hpp"

#include <algorithm>
#include <cmath>

#include "spherical/errors.hpp"
#include "spherical/tolerance.hpp"
#include "spherical/trig.hpp"

namespace spherical {

namespace {

struct P2 {
	double u, v;
	std::size_t idx;
};

double cross2(const P2& o, const P2& a, const P2& b) {
	return (a.u - o.u) * (b.v - o.v) - (a.v - o.v) * (b.u - o.u);
}

} // namespace

std::vector<std::size_t> hemisphere_convex_hull(std::span<const UnitVec> points,
                                                const UnitVec& pole) {
	const Tolerance& tol = global_tolerance();
	for (const UnitVec& p : points) {
		if (dot(p, pole) <= tol.vec)
			fail(Errc::NotInOpenHemisphere, "point not strictly inside the witness hemisphere");
	}
	if (points.size() < 3) fail(Errc::DegenerateHull, "need at least three points");

	UnitVec e1 = any_tangent(pole);
	UnitVec e2 = cross(pole, e1);
	std::vector<P2> pts(points.size());
	for (std::size_t i = 0; i < points.size(); ++i) {
		double h = dot(points[i], pole);
		pts[i] = {dot(points[i], e1) / h, dot(points[i], e2) / h, i};
	}
	std::sort(pts.begin(), pts.end(), [](const P2& a, const P2& b) {
		return a.u < b.u || (a.u == b.u && a.v < b.v);
	});
	pts.erase(std::unique(pts.begin(), pts.end(),
	                      [&](const P2& a, const P2& b) {
		                      return std::fabs(a.u - b.u) < 1e-15 && std::fabs(a.v - b.v) < 1e-15;
	                      }),
	          pts.end());
	if (pts.size() < 3) fail(Errc::DegenerateHull, "fewer than three distinct points");

	// Andrew's monotone chain, counterclockwise.
	std::vector<P2> h(2 * pts.size());
	std::size_t k = 0;
	for (const P2& p : pts) {
		while (k >= 2 && cross2(h[k - 2], h[k - 1], p) <= 0) --k;
		h[k++] = p;
	}
	for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
		const P2& p = pts[i];
		while (k >= lower && cross2(h[k - 2], h[k - 1], p) <= 0) --k;
		h[k++] = p;
	}
	h.resize(k - 1);
	if (h.size() < 3) fail(Errc::DegenerateHull, "points are collinear on a great circle");

	std::vector<std::size_t> out(h.size());
	for (std::size_t i = 0; i < h.size(); ++i) out[i] = h[i].idx;

	// Validate on the sphere: every input point sits on the inner side of each
	// directed hull edge, and hull corners stay strictly convex.
	for (std::size_t i = 0; i < out.size(); ++i) {
		const UnitVec& a = points[out[i]];
		const UnitVec& b = points[out[(i + 1) % out.size()]];
		Vec3 edge_pole = cross(a, b);
		for (const UnitVec& p : points) {
			if (dot(edge_pole, p) < -tol.vec * 10)
				fail(Errc::DegenerateHull, "hull validation failed on sphere");
		}
		const UnitVec& c = points[out[(i + 2) % out.size()]];
		double ang = corner_angle(a, b, c);
		if (!(ang < M_PI - tol.angle))
			fail(Errc::DegenerateHull, "hull corner not strictly convex");
	}
	return out;
}

} // namespace spherical
