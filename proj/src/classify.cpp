#include "spherical/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <optional>
#include <vector>

#include "polygon.hpp"
#include "spherical/errors.hpp"
#include "spherical/geodesics.hpp"
#include "spherical/rotation.hpp"
#include "spherical/trig.hpp"

namespace spherical {

bool is_polygon(const Surface& s) {
	if (s.closed() || s.genus() != 0 || s.num_boundary_components() != 1) return false;
	for (int c = 0; c < s.num_classes(); ++c)
		if (s.class_singular(c) && !s.class_boundary(c)) return false;
	return true;
}

std::vector<CycleVertex> singular_cycle(const Surface& s) {
	const auto& walk = s.boundary_walks()[0];
	int n = static_cast<int>(walk.size());
	int start = -1;
	for (int i = 0; i < n && start < 0; ++i)
		if (s.class_singular(s.vclass(walk[i].face, walk[i].edge))) start = i;
	if (start < 0) fail(Errc::Internal, "boundary walk without a singular vertex");
	std::vector<CycleVertex> cyc;
	for (int i = 0; i < n; ++i) {
		EdgeRef e = walk[(start + i) % n];
		int cl = s.vclass(e.face, e.edge);
		if (s.class_singular(cl)) cyc.push_back({cl, s.class_angle(cl), 0, e});
		cyc.back().side += s.edge_length(e);
	}
	return cyc;
}

namespace {

// Whether the development rooted at the support side stays in the closed
// half sphere the support circle bounds on the surface's side.
bool develops_into_half_sphere(const Surface& s, EdgeRef support) {
	UnitVec pole = normalized(cross(s.edge_start(support), s.edge_end(support)));
	std::vector<std::optional<Rotation>> dev(s.num_faces());
	std::deque<int> q{support.face};
	dev[support.face] = Rotation::identity();
	bool ok = true;
	while (!q.empty()) {
		int f = q.front();
		q.pop_front();
		const Rotation df = *dev[f];
		for (int k = 0; k < 3; ++k) {
			if (dot(df(s.vertex(f, k)), pole) < -1e-8) ok = false;
			EdgeRef e{f, k};
			if (s.is_boundary(e)) continue;
			int g = s.partner(e).face;
			if (!dev[g]) {
				dev[g] = df * s.transition(e);
				q.push_back(g);
			}
		}
	}
	return ok;
}

} // namespace

VertexType classify_vertex(const Surface& s, int vclass, const SearchOptions& opt) {
	if (!is_polygon(s)) fail(Errc::NotAPolygon, "vertex dichotomy applies to polygons");
	if (vclass < 0 || vclass >= s.num_classes())
		fail(Errc::InvalidParameter, "vertex class out of range");
	VertexProbe p = probe_vertex(s, vclass, opt);
	VertexType out;
	out.vclass = vclass;
	out.reaches_pi = p.antipode_covered;
	out.angle = s.class_angle(vclass);
	out.witness_corner = p.witness_corner;
	out.witness_angle = p.witness_angle;
	out.sup_exit = p.antipode_covered ? M_PI : p.sup_exit;
	return out;
}

Classification classify_irreducible(const Surface& s, const SearchOptions& opt) {
	if (!is_polygon(s)) fail(Errc::NotAPolygon, "classification applies to polygons");
	Classification out;

	// any interior join, family, or closed loop reduces the polygon
	Inventory inv = enumerate_connections(s, opt);
	const Connection* witness = nullptr;
	for (const Connection& c : inv.connections)
		if (!c.on_boundary && (!witness || c.length < witness->length)) witness = &c;
	if (witness) {
		out.tag = PieceTag::ReduciblePolygon;
		out.witness = *witness;
		return out;
	}
	for (auto* fams : {&inv.loop_families, &inv.pi_families})
		for (const GeodesicFamily& f : *fams)
			if (!f.digons.empty()) {
				out.tag = PieceTag::ReduciblePolygon;
				out.family_witness = f;
				return out;
			}

	auto cyc = singular_cycle(s);
	int n = static_cast<int>(cyc.size());
	for (const CycleVertex& v : cyc) out.angles.push_back(v.angle);
	for (const CycleVertex& v : cyc) out.vertex_types.push_back(classify_vertex(s, v.vclass, opt));

	const double ea = 1e-9;
	bool all_pi = true;
	std::vector<int> convex;
	for (int i = 0; i < n; ++i) {
		if (std::fabs(cyc[i].angle - M_PI) > ea) all_pi = false;
		if (cyc[i].angle < M_PI - ea) convex.push_back(i);
	}

	if (all_pi) {
		// smooth rim: must be a full great circle bounding half the sphere
		double rim = 0;
		std::vector<double> at;
		for (const CycleVertex& v : cyc) {
			at.push_back(rim);
			rim += v.side;
		}
		if (std::fabs(rim - 2 * M_PI) > 1e-6 || std::fabs(s.area() - 2 * M_PI) > 1e-6)
			fail(Errc::GeometryError, "smooth boundary does not bound a half sphere");
		for (int i = 0; i < n; ++i)
			for (int j = i + 1; j < n; ++j) {
				double d = std::fabs(at[j] - at[i]);
				d = std::min(d, 2 * M_PI - d);
				if (std::fabs(d - M_PI) <= 1e-9)
					fail(Errc::AntipodalMarks, "half sphere carries antipodal marks");
			}
		out.tag = PieceTag::HalfSphere;
		return out;
	}

	if (static_cast<int>(convex.size()) == n) {
		if (n != 3) fail(Errc::GeometryError, "convex polygon with more than three vertices");
		out.tag = PieceTag::Triangle;
		return out;
	}

	// mixed angles: a half sphere rim broken at exactly two convex vertices,
	// all other vertices at angle pi or more, content on the rim's side
	if (n < 3 || convex.size() != 2)
		fail(Errc::GeometryError, "concave polygon is not half-spherically supported");
	int a = convex[0], b = convex[1];
	int support = -1;
	if (b == a + 1)
		support = a;
	else if (a == 0 && b == n - 1)
		support = b;
	if (support < 0)
		fail(Errc::GeometryError, "supporting vertices are not consecutive");
	if (cyc[support].side <= M_PI + 1e-9)
		fail(Errc::GeometryError, "supporting side does not exceed half a turn");
	if (!develops_into_half_sphere(s, cyc[support].side_edge))
		fail(Errc::GeometryError, "development leaves the supporting half sphere");
	for (int i = 0; i < n; ++i) {
		bool cv = (i == a || i == b);
		if (out.vertex_types[i].reaches_pi != cv)
			fail(Errc::GeometryError, "vertex dichotomy disagrees with the support");
	}
	out.tag = PieceTag::HalfSphericalConcave;
	return out;
}

} // namespace spherical
