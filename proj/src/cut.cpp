#include "spherical/decompose.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "spherical/arc.hpp"
#include "spherical/errors.hpp"
#include "spherical/mesh_ops.hpp"
#include "spherical/trig.hpp"

namespace spherical {

namespace {

constexpr double kNode = 1e-9; // endpoint snap / dedup radius

// The canonical side of a glued edge pair (lower id); boundary edges are
// their own canonical side.  Subdivision points live on the canonical side.
EdgeRef canonical_edge(const Surface& s, EdgeRef e) {
	if (s.is_boundary(e)) return e;
	EdgeRef p = s.partner(e);
	return p.id() < e.id() ? p : e;
}

// An endpoint of one cut chord: an existing face corner, or an interior
// point of a side named by face slot plus the canonical arc parameter.
struct NodeSpec {
	int corner = -1; // face corner index when >= 0
	int slot = -1;   // face side otherwise
	double s = 0;    // arc length from the canonical side's start vertex
};

struct CutPlan {
	explicit CutPlan(const Surface& surface) : s(surface) {}

	const Surface& s;
	std::map<int, std::vector<double>> points; // canonical edge id -> sorted params
	std::vector<std::pair<int, std::array<NodeSpec, 2>>> chords; // face, endpoints
	std::set<int> unglued;           // canonical ids of edges cut open
	std::vector<Corner> cut_corners; // mesh corners the cut chain runs through
	bool any_cut = false;
};

// Register an interior point sitting on side e of its face (chart of
// e.face), merging with previously seen points within kNode.
NodeSpec register_point(CutPlan& plan, EdgeRef e, const UnitVec& y) {
	const Surface& s = plan.s;
	EdgeRef c = canonical_edge(s, e);
	UnitVec yc = y;
	if (c != e)
		yc = s.transition(c)(y); // into the canonical side's chart
	double param = arc_length(s.edge_start(c), yc);
	auto& list = plan.points[c.id()];
	for (double seen : list)
		if (std::fabs(seen - param) <= kNode) return {-1, e.edge, seen};
	if (param <= kNode || param >= s.edge_length(c) - kNode)
		fail(Errc::GeometryError, "cut point collides with a mesh vertex");
	list.push_back(param);
	return {-1, e.edge, param};
}

NodeSpec classify_endpoint(CutPlan& plan, int f, const UnitVec& p) {
	const Surface& s = plan.s;
	for (int k = 0; k < 3; ++k)
		if (arc_length(p, s.vertex(f, k)) <= kNode) {
			plan.cut_corners.push_back({f, k});
			return {k, -1, 0};
		}
	int best = -1;
	double best_gap = 1e-6;
	for (int k = 0; k < 3; ++k) {
		EdgeRef e{f, k};
		double gap = arc_length(s.edge_start(e), p) + arc_length(p, s.edge_end(e)) -
		             s.edge_length(e);
		if (gap < best_gap) {
			best_gap = gap;
			best = k;
		}
	}
	if (best < 0) fail(Errc::Internal, "cut endpoint is not on a face side");
	return register_point(plan, {f, best}, p);
}

void collect(CutPlan& plan, const TracePath& path) {
	const Surface& s = plan.s;
	if (path.steps.empty() || path.stop != TraceStop::Singularity)
		fail(Errc::InvalidParameter, "cut path must run between singular vertices");
	for (const TraceStep& st : path.steps) {
		if (st.along_edge.valid()) {
			EdgeRef e = st.along_edge;
			plan.cut_corners.push_back({e.face, e.edge});
			plan.cut_corners.push_back({e.face, (e.edge + 1) % 3});
			if (s.is_boundary(e)) continue; // nothing to open
			plan.unglued.insert(canonical_edge(s, e).id());
			plan.any_cut = true;
			continue;
		}
		if (arc_length(st.enter, st.exit) <= 1e-12) continue;
		int f = st.face;
		for (int k = 0; k < 3; ++k) {
			UnitVec pole = normalized(cross(s.vertex(f, k), s.vertex(f, (k + 1) % 3)));
			if (std::fabs(dot(st.enter, pole)) <= kNode &&
			    std::fabs(dot(st.exit, pole)) <= kNode)
				fail(Errc::GeometryError, "cut arc grazes a face side");
		}
		NodeSpec a = classify_endpoint(plan, f, st.enter);
		NodeSpec b = classify_endpoint(plan, f, st.exit);
		plan.chords.push_back({f, {a, b}});
		plan.any_cut = true;
	}
	if (!plan.any_cut) fail(Errc::BoundaryArc, "cut path lies on the boundary");
}

// One face after subdivision: ring nodes in counterclockwise order are
// corner 0, the side-0 points, corner 1, and so on.
struct FaceRing {
	std::vector<UnitVec> pos;             // by node id
	std::array<int, 3> corner_node{};
	std::array<std::vector<int>, 3> side_nodes;
	// unordered original-ring node pair -> (slot, sub-edge index 0..m)
	std::map<std::pair<int, int>, std::pair<int, int>> side_sub;
};

FaceRing build_ring(const CutPlan& plan, int f) {
	const Surface& s = plan.s;
	FaceRing r;
	for (int k = 0; k < 3; ++k) {
		r.corner_node[k] = static_cast<int>(r.pos.size());
		r.pos.push_back(s.vertex(f, k));
	}
	for (int k = 0; k < 3; ++k) {
		EdgeRef e{f, k};
		EdgeRef c = canonical_edge(s, e);
		auto it = plan.points.find(c.id());
		if (it != plan.points.end()) {
			Arc carrier = Arc::through(s.edge_start(c), s.edge_end(c));
			std::vector<UnitVec> pts;
			for (double t : it->second) pts.push_back(carrier.point_at(t));
			if (c != e) {
				for (UnitVec& p : pts) p = s.transition(e)(p); // into f's chart
				std::reverse(pts.begin(), pts.end());
			}
			for (const UnitVec& p : pts) {
				r.side_nodes[k].push_back(static_cast<int>(r.pos.size()));
				r.pos.push_back(p);
			}
		}
		int prev = r.corner_node[k];
		int idx = 0;
		for (int node : r.side_nodes[k]) {
			r.side_sub[std::minmax(prev, node)] = {k, idx++};
			prev = node;
		}
		r.side_sub[std::minmax(prev, r.corner_node[(k + 1) % 3])] = {k, idx};
	}
	return r;
}

int resolve_node(const CutPlan& plan, const FaceRing& r, int f, const NodeSpec& ns) {
	if (ns.corner >= 0) return r.corner_node[ns.corner];
	EdgeRef c = canonical_edge(plan.s, {f, ns.slot});
	const auto& list = plan.points.at(c.id());
	int idx = -1;
	for (int i = 0; i < static_cast<int>(list.size()); ++i)
		if (std::fabs(list[i] - ns.s) <= kNode) idx = i;
	if (idx < 0) fail(Errc::Internal, "cut lost track of a subdivision point");
	int m = static_cast<int>(list.size());
	int sub = (c == EdgeRef{f, ns.slot}) ? idx : m - 1 - idx;
	return r.side_nodes[ns.slot][sub];
}

// Fan triangulation of a chord-free region; tries each apex until every fan
// triangle is a strictly convex spherical triangle.
void fan_region(const std::vector<UnitVec>& pos, const std::vector<int>& ring,
                std::vector<std::array<int, 3>>& out) {
	int n = static_cast<int>(ring.size());
	if (n < 3) fail(Errc::Internal, "cut region degenerated");
	for (int j = 0; j < n; ++j) {
		bool ok = true;
		for (int i = 1; i + 1 < n && ok; ++i) {
			const UnitVec& a = pos[ring[j]];
			const UnitVec& b = pos[ring[(j + i) % n]];
			const UnitVec& c = pos[ring[(j + i + 1) % n]];
			ok = triple(a, b, c) > 1e-12 &&
			     arc_length(a, b) > 2e-9 && arc_length(b, c) > 2e-9 &&
			     arc_length(c, a) > 2e-9 &&
			     corner_angle(c, a, b) < M_PI - 2e-9 &&
			     corner_angle(a, b, c) < M_PI - 2e-9 &&
			     corner_angle(b, c, a) < M_PI - 2e-9;
		}
		if (!ok) continue;
		for (int i = 1; i + 1 < n; ++i)
			out.push_back({ring[j], ring[(j + i) % n], ring[(j + i + 1) % n]});
		return;
	}
	fail(Errc::GeometryError, "no valid triangulation of a cut face");
}

void split_region(const std::vector<UnitVec>& pos, const std::vector<int>& ring,
                  std::vector<std::array<int, 2>> chords,
                  std::vector<std::array<int, 3>>& out) {
	if (chords.empty()) {
		fan_region(pos, ring, out);
		return;
	}
	auto [a, b] = chords.back();
	chords.pop_back();
	int n = static_cast<int>(ring.size());
	int ia = -1, ib = -1;
	for (int i = 0; i < n; ++i) {
		if (ring[i] == a) ia = i;
		if (ring[i] == b) ib = i;
	}
	if (ia < 0 || ib < 0 || ia == ib)
		fail(Errc::Internal, "cut chord endpoints left the region boundary");
	std::vector<int> ring_a, ring_b;
	for (int i = ia;; i = (i + 1) % n) {
		ring_a.push_back(ring[i]);
		if (i == ib) break;
	}
	for (int i = ib;; i = (i + 1) % n) {
		ring_b.push_back(ring[i]);
		if (i == ia) break;
	}
	std::set<int> in_a(ring_a.begin() + 1, ring_a.end() - 1);
	std::set<int> in_b(ring_b.begin() + 1, ring_b.end() - 1);
	std::vector<std::array<int, 2>> chords_a, chords_b;
	for (const auto& ch : chords) {
		int probe = (ch[0] != a && ch[0] != b) ? ch[0] : ch[1];
		if (probe == a || probe == b)
			fail(Errc::Internal, "duplicate cut chord");
		int other = (probe == ch[0]) ? ch[1] : ch[0];
		if (in_a.count(probe)) {
			if (other != a && other != b && !in_a.count(other))
				fail(Errc::Internal, "cut chords cross inside a face");
			chords_a.push_back(ch);
		} else if (in_b.count(probe)) {
			if (other != a && other != b && !in_b.count(other))
				fail(Errc::Internal, "cut chords cross inside a face");
			chords_b.push_back(ch);
		} else {
			fail(Errc::Internal, "cut chord endpoint left the region boundary");
		}
	}
	split_region(pos, ring_a, chords_a, out);
	split_region(pos, ring_b, chords_b, out);
}

} // namespace

std::vector<Surface> cut(const Surface& s, const TracePath& arc) {
	CutPlan plan{s};
	collect(plan, arc);
	for (auto& [cid, list] : plan.points) std::sort(list.begin(), list.end());

	// Subdivide and retriangulate each face around its cut chords.
	std::vector<FaceRing> rings;
	std::vector<std::vector<std::array<int, 3>>> tris(s.num_faces());
	std::vector<std::vector<std::array<int, 2>>> face_chords(s.num_faces());
	std::vector<std::set<std::pair<int, int>>> chord_pairs(s.num_faces());
	for (int f = 0; f < s.num_faces(); ++f) rings.push_back(build_ring(plan, f));
	for (const auto& [f, ends] : plan.chords) {
		int u = resolve_node(plan, rings[f], f, ends[0]);
		int v = resolve_node(plan, rings[f], f, ends[1]);
		if (u == v) fail(Errc::GeometryError, "cut chord degenerated to a point");
		auto key = std::minmax(u, v);
		if (chord_pairs[f].insert(key).second)
			face_chords[f].push_back({u, v});
	}
	for (int f = 0; f < s.num_faces(); ++f) {
		std::vector<int> ring;
		for (int k = 0; k < 3; ++k) {
			ring.push_back(rings[f].corner_node[k]);
			for (int node : rings[f].side_nodes[k]) ring.push_back(node);
		}
		split_region(rings[f].pos, ring, face_chords[f], tris[f]);
	}

	// Assemble the cut mesh.  Sub-edges of original sides are glued across
	// the original pairing (index i meets index m-i), chords stay boundary,
	// and interior diagonals are glued to their twin within the face.
	Surface::BuildData data;
	std::map<std::array<int, 3>, EdgeRef> side_ref; // (face, slot, sub) -> new edge
	for (int f = 0; f < s.num_faces(); ++f) {
		std::map<std::pair<int, int>, std::vector<EdgeRef>> diagonals;
		for (const auto& t : tris[f]) {
			int g = static_cast<int>(data.faces.size());
			data.faces.push_back({{rings[f].pos[t[0]], rings[f].pos[t[1]], rings[f].pos[t[2]]}});
			for (int k = 0; k < 3; ++k) {
				auto key = std::minmax(t[k], t[(k + 1) % 3]);
				if (auto it = rings[f].side_sub.find(key); it != rings[f].side_sub.end()) {
					side_ref[{f, it->second.first, it->second.second}] = {g, k};
					continue;
				}
				if (chord_pairs[f].count(key)) continue; // new boundary
				diagonals[key].push_back({g, k});
			}
		}
		for (const auto& [key, refs] : diagonals) {
			if (refs.size() != 2) fail(Errc::Internal, "unmatched cut diagonal");
			data.gluings.emplace_back(refs[0], refs[1]);
		}
	}
	for (int f = 0; f < s.num_faces(); ++f) {
		for (int k = 0; k < 3; ++k) {
			EdgeRef e{f, k};
			if (s.is_boundary(e)) continue;
			EdgeRef p = s.partner(e);
			if (p.id() < e.id()) continue; // e is canonical; handle the pair once
			if (plan.unglued.count(e.id())) continue;
			auto it = plan.points.find(e.id());
			int m = it == plan.points.end() ? 0 : static_cast<int>(it->second.size());
			for (int i = 0; i <= m; ++i) {
				auto mine = side_ref.find({f, k, i});
				auto theirs = side_ref.find({p.face, p.edge, m - i});
				if (mine == side_ref.end() || theirs == side_ref.end())
					fail(Errc::Internal, "cut lost a sub-edge");
				data.gluings.emplace_back(mine->second, theirs->second);
			}
		}
	}

	// Flagged vertex classes keep their mark on every piece; in addition the
	// cut chain marks each singular vertex it runs through, so pieces whose
	// rim is otherwise smooth (angle exactly pi) still carry the basepoint.
	std::vector<bool> mark_class(s.num_classes(), false);
	for (int c = 0; c < s.num_classes(); ++c) mark_class[c] = s.class_flagged(c);
	for (Corner c : plan.cut_corners) {
		int cl = s.vclass(c);
		if (s.class_singular(cl) || s.class_flagged(cl)) mark_class[cl] = true;
	}
	int g = 0;
	for (int f = 0; f < s.num_faces(); ++f)
		for (const auto& t : tris[f]) {
			for (int j = 0; j < 3; ++j)
				for (int k = 0; k < 3; ++k)
					if (rings[f].corner_node[k] == t[j] && mark_class[s.vclass(f, k)])
						data.marked.push_back({g, j});
			++g;
		}
	data.metadata = s.metadata();
	return split_components(data);
}

} // namespace spherical
