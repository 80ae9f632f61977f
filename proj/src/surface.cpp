#include "spherical/surface.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "spherical/errors.hpp"
#include "spherical/trig.hpp"

namespace spherical {

double Surface::edge_length(EdgeRef e) const {
	return arc_length(edge_start(e), edge_end(e));
}

double Surface::corner_angle_at(Corner c) const {
	const Face& f = faces_[c.face];
	int k = c.corner;
	return corner_angle(f.v[(k + 2) % 3], f.v[k], f.v[(k + 1) % 3]);
}

double Surface::face_area(int f) const {
	double s = 0;
	for (int k = 0; k < 3; ++k) s += corner_angle_at({f, k});
	return s - M_PI;
}

double Surface::area() const {
	double s = 0;
	for (int f = 0; f < num_faces(); ++f) s += face_area(f);
	return s;
}

Corner Surface::next_corner_ccw(Corner c) const {
	// Cross the incoming edge of the corner (counterclockwise end of the wedge).
	EdgeRef in{c.face, (c.corner + 2) % 3};
	EdgeRef p = partner(in);
	if (!p.valid()) return {};
	return {p.face, p.edge};
}

Corner Surface::next_corner_cw(Corner c) const {
	EdgeRef out{c.face, c.corner};
	EdgeRef p = partner(out);
	if (!p.valid()) return {};
	return {p.face, (p.edge + 1) % 3};
}

EdgeRef Surface::next_boundary_edge(EdgeRef e) const {
	if (!e.valid() || partner(e).valid()) fail(Errc::InvalidParameter, "not a boundary edge");
	Corner corner{e.face, (e.edge + 1) % 3};
	for (int guard = 0; guard <= 3 * num_faces(); ++guard) {
		EdgeRef out{corner.face, corner.corner};
		if (!partner(out).valid()) return out;
		corner = next_corner_cw(corner);
		if (corner.face < 0) break;
	}
	fail(Errc::Internal, "boundary walk lost its rim");
}

Surface Surface::build(BuildData data) {
	Surface s;
	s.faces_ = std::move(data.faces);
	int slots = 3 * s.num_faces();
	s.partner_.assign(slots, EdgeRef{});
	s.trans_.assign(slots, Rotation::identity());
	s.marked_.assign(slots, false);
	s.metadata_ = std::move(data.metadata);

	for (const auto& [a, b] : data.gluings) {
		auto check = [&](EdgeRef e) {
			if (e.face < 0 || e.face >= s.num_faces() || e.edge < 0 || e.edge > 2)
				fail(Errc::GeometryError, "gluing references missing edge");
			if (s.partner_[e.id()].valid())
				fail(Errc::GeometryError, "edge glued twice");
		};
		check(a);
		check(b);
		if (a == b) fail(Errc::GeometryError, "edge glued to itself");
		s.partner_[a.id()] = b;
		s.partner_[b.id()] = a;
	}
	for (Corner c : data.marked) {
		if (c.face < 0 || c.face >= s.num_faces() || c.corner < 0 || c.corner > 2)
			fail(Errc::GeometryError, "mark references missing corner");
		s.marked_[c.id()] = true;
	}

	s.derive();
	s.validate();
	return s;
}

void Surface::derive() {
	const Tolerance& tol = global_tolerance();
	int slots = 3 * num_faces();

	// transitions: partner chart -> own chart, swapping edge endpoints
	for (int f = 0; f < num_faces(); ++f) {
		for (int k = 0; k < 3; ++k) {
			EdgeRef e{f, k};
			EdgeRef p = partner_[e.id()];
			if (!p.valid()) continue;
			trans_[e.id()] =
			    Rotation::align(edge_start(p), edge_end(p), edge_end(e), edge_start(e));
		}
	}

	// the euler characteristic below assumes a connected dual graph
	if (num_faces() > 0) {
		std::vector<char> reach(num_faces(), 0);
		std::vector<int> stack{0};
		reach[0] = 1;
		while (!stack.empty()) {
			int f = stack.back();
			stack.pop_back();
			for (int k = 0; k < 3; ++k) {
				EdgeRef p = partner_[EdgeRef{f, k}.id()];
				if (p.valid() && !reach[p.face]) {
					reach[p.face] = 1;
					stack.push_back(p.face);
				}
			}
		}
		for (char r : reach)
			if (!r) fail(Errc::GeometryError, "surface is not connected");
	}

	// vertex classes via union-find over corners
	std::vector<int> parent(slots);
	std::iota(parent.begin(), parent.end(), 0);
	auto find = [&](int a) {
		while (parent[a] != a) a = parent[a] = parent[parent[a]];
		return a;
	};
	auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
	for (int f = 0; f < num_faces(); ++f) {
		for (int k = 0; k < 3; ++k) {
			Corner c{f, k};
			Corner n = next_corner_ccw(c);
			if (n.face >= 0) unite(c.id(), n.id());
		}
	}

	corner_class_.assign(slots, -1);
	classes_.clear();
	std::map<int, int> root_to_class;
	for (int cid = 0; cid < slots; ++cid) {
		int r = find(cid);
		auto [it, fresh] = root_to_class.try_emplace(r, static_cast<int>(classes_.size()));
		if (fresh) classes_.emplace_back();
		corner_class_[cid] = it->second;
	}

	// fan order within each class: walk clockwise to the rim, then collect ccw
	std::vector<char> seen(slots, 0);
	for (int cid = 0; cid < slots; ++cid) {
		if (seen[cid]) continue;
		Corner c{cid / 3, cid % 3};
		ClassInfo& info = classes_[corner_class_[cid]];

		Corner start = c;
		bool boundary = false;
		{
			Corner cur = c;
			for (int guard = 0; guard <= slots; ++guard) {
				Corner prev = next_corner_cw(cur);
				if (prev.face < 0) {
					boundary = true;
					start = cur;
					break;
				}
				if (prev == c) break; // closed fan
				cur = prev;
				if (guard == slots) fail(Errc::Internal, "vertex fan does not close");
			}
			if (!boundary) start = c;
		}
		Corner cur = start;
		for (int guard = 0; guard <= slots; ++guard) {
			info.corners.push_back(cur);
			seen[cur.id()] = 1;
			info.angle += corner_angle_at(cur);
			if (marked_[cur.id()]) info.flagged = true;
			Corner nxt = next_corner_ccw(cur);
			if (nxt.face < 0) {
				info.boundary = true;
				break;
			}
			if (nxt == start) break;
			cur = nxt;
			if (guard == slots) fail(Errc::Internal, "vertex fan does not close");
		}
		info.boundary = info.boundary || boundary;
	}
	for (ClassInfo& info : classes_) {
		double flat = info.boundary ? M_PI : 2 * M_PI;
		info.removable = std::fabs(info.angle - flat) <= tol.angle;
		info.singular = info.flagged || !info.removable;
	}

	marked_list_.clear();
	for (int cid = 0; cid < slots; ++cid)
		if (marked_[cid]) marked_list_.push_back({cid / 3, cid % 3});

	// boundary walks
	walks_.clear();
	std::vector<char> walked(slots, 0);
	for (int f = 0; f < num_faces(); ++f) {
		for (int k = 0; k < 3; ++k) {
			EdgeRef e{f, k};
			if (partner_[e.id()].valid() || walked[e.id()]) continue;
			std::vector<EdgeRef> walk;
			EdgeRef cur = e;
			for (int guard = 0; guard <= slots; ++guard) {
				walk.push_back(cur);
				walked[cur.id()] = 1;
				cur = next_boundary_edge(cur);
				if (cur == e) break;
				if (guard == slots) fail(Errc::OpenWalk, "boundary walk does not close");
			}
			walks_.push_back(std::move(walk));
		}
	}

	int nboundary = 0;
	for (const auto& w : walks_) nboundary += static_cast<int>(w.size());
	num_edges_ = (3 * num_faces() + nboundary) / 2;
	chi_ = num_classes() - num_edges_ + num_faces();
	int p = static_cast<int>(walks_.size());
	if ((2 - chi_ - p) % 2 != 0) fail(Errc::Internal, "euler characteristic parity");
	genus_ = (2 - chi_ - p) / 2;
	if (genus_ < 0) fail(Errc::Internal, "negative genus");
}

void Surface::validate() const {
	const Tolerance& tol = global_tolerance();
	if (faces_.empty()) fail(Errc::GeometryError, "surface has no faces");

	for (int f = 0; f < num_faces(); ++f) {
		const Face& fc = faces_[f];
		for (int k = 0; k < 3; ++k) {
			if (!is_unit(fc.v[k], 1e-9))
				fail(Errc::GeometryError, "face " + std::to_string(f) + " vertex off the sphere");
		}
		if (triple(fc.v[0], fc.v[1], fc.v[2]) <= 0)
			fail(Errc::GeometryError, "face " + std::to_string(f) + " not counterclockwise");
		for (int k = 0; k < 3; ++k) {
			double len = edge_length({f, k});
			if (!(len > tol.length) || !(len < M_PI - tol.length))
				fail(Errc::GeometryError,
				     "face " + std::to_string(f) + " side length " + std::to_string(len) +
				         " outside (0, pi)");
			double ang = corner_angle_at({f, k});
			if (!(ang > tol.vec) || !(ang < M_PI - tol.angle))
				fail(Errc::GeometryError,
				     "face " + std::to_string(f) + " angle " + std::to_string(ang) +
				         " outside (0, pi)");
		}
	}

	for (int f = 0; f < num_faces(); ++f) {
		for (int k = 0; k < 3; ++k) {
			EdgeRef e{f, k};
			EdgeRef p = partner_[e.id()];
			if (!p.valid()) continue;
			if (partner_[p.id()] != e) fail(Errc::GeometryError, "gluing not involutive");
			double la = edge_length(e), lb = edge_length(p);
			if (std::fabs(la - lb) > tol.length)
				fail(Errc::LengthMismatch, "glued edges " + std::to_string(e.id()) + "/" +
				                               std::to_string(p.id()) + " differ in length");
			// transition maps the partner edge onto this edge reversed
			const Rotation& t = trans_[e.id()];
			double r1 = norm(t(edge_start(p)) - edge_end(e));
			double r2 = norm(t(edge_end(p)) - edge_start(e));
			if (r1 > 1e-9 || r2 > 1e-9)
				fail(Errc::GeometryError, "transition does not match glued edge endpoints");
		}
	}

	bool any_singular = false;
	for (int c = 0; c < num_classes(); ++c) any_singular = any_singular || class_singular(c);
	if (!any_singular) fail(Errc::GeometryError, "surface has no singularity");

	for (const auto& walk : walks_) {
		bool has = false;
		for (EdgeRef e : walk) has = has || class_singular(vclass(e.face, e.edge));
		if (!has) fail(Errc::GeometryError, "boundary component without a singularity");
	}
}

std::vector<Surface::ConePoint> Surface::cone_points(bool normalize) const {
	std::vector<ConePoint> out;
	for (int c = 0; c < num_classes(); ++c) {
		const ClassInfo& info = classes_[c];
		bool singular = normalize ? !info.removable : info.singular;
		if (!singular) continue;
		out.push_back({c, info.angle, info.boundary, info.flagged, info.removable});
	}
	return out;
}

double Surface::gauss_bonnet_residual() const {
	double lhs = area() / (2 * M_PI);
	double rhs = 2.0 - 2.0 * genus_ - static_cast<double>(walks_.size());
	for (const ConePoint& cp : cone_points()) {
		if (cp.boundary)
			rhs += cp.angle / (2 * M_PI) - 0.5;
		else
			rhs += cp.angle / (2 * M_PI) - 1.0;
	}
	return std::fabs(lhs - rhs);
}

std::vector<std::vector<int>> Surface::singular_components() const {
	std::vector<std::vector<int>> out;
	std::vector<char> used(num_classes(), 0);
	for (const auto& walk : walks_) {
		std::vector<int> comp;
		for (EdgeRef e : walk) {
			int c = vclass(e.face, e.edge);
			if (!used[c] && class_singular(c)) {
				used[c] = 1;
				comp.push_back(c);
			}
		}
		out.push_back(std::move(comp));
	}
	for (int c = 0; c < num_classes(); ++c) {
		if (!used[c] && class_singular(c) && !class_boundary(c)) out.push_back({c});
	}
	return out;
}

Rotation monodromy(const Surface& s, std::span<const EdgeRef> crossings) {
	if (crossings.empty()) fail(Errc::OpenWalk, "empty walk");
	int at = crossings.front().face;
	Rotation acc = Rotation::identity();
	for (EdgeRef e : crossings) {
		if (e.face != at) fail(Errc::OpenWalk, "walk does not chain through shared faces");
		EdgeRef p = s.partner(e);
		if (!p.valid()) fail(Errc::OpenWalk, "walk crosses a boundary edge");
		acc = acc * s.transition(e);
		at = p.face;
	}
	if (at != crossings.front().face) fail(Errc::OpenWalk, "walk does not return to start");
	return acc;
}

std::vector<EdgeRef> star_loop(const Surface& s, int vclass) {
	if (s.class_boundary(vclass)) fail(Errc::OpenWalk, "star loop needs an interior vertex");
	std::vector<EdgeRef> loop;
	for (Corner c : s.class_corners(vclass)) loop.push_back({c.face, (c.corner + 2) % 3});
	return loop;
}

std::vector<std::vector<EdgeRef>> generator_loops(const Surface& s) {
	// spanning tree of the dual graph
	int F = s.num_faces();
	std::vector<int> tree_parent(F, -2);
	std::vector<EdgeRef> tree_edge(F); // edge crossed from parent into this face
	std::vector<int> order;
	tree_parent[0] = -1;
	order.push_back(0);
	for (std::size_t head = 0; head < order.size(); ++head) {
		int f = order[head];
		for (int k = 0; k < 3; ++k) {
			EdgeRef p = s.partner({f, k});
			if (!p.valid() || tree_parent[p.face] != -2) continue;
			tree_parent[p.face] = f;
			tree_edge[p.face] = {f, k};
			order.push_back(p.face);
		}
	}

	auto path_to_root = [&](int f) {
		std::vector<EdgeRef> path; // crossings from f up to the root
		while (tree_parent[f] >= 0) {
			EdgeRef down = tree_edge[f];
			path.push_back(s.partner(down)); // crossing from f into parent
			f = tree_parent[f];
		}
		return path;
	};

	std::vector<std::vector<EdgeRef>> loops;
	for (int f = 0; f < F; ++f) {
		for (int k = 0; k < 3; ++k) {
			EdgeRef e{f, k};
			EdgeRef p = s.partner(e);
			if (!p.valid() || p.id() < e.id()) continue;
			if (tree_parent[f] >= 0 && tree_edge[f] == p) continue; // tree edge (f is child)
			if (tree_parent[p.face] >= 0 && tree_edge[p.face] == e) continue;
			// root -> f, cross e, p.face -> root
			std::vector<EdgeRef> loop = path_to_root(f);
			std::reverse(loop.begin(), loop.end());
			for (auto& step : loop) step = s.partner(step);
			loop.push_back(e);
			auto back = path_to_root(p.face);
			loop.insert(loop.end(), back.begin(), back.end());
			loops.push_back(std::move(loop));
		}
	}
	return loops;
}

} // namespace spherical
