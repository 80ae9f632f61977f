#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "polygon.hpp"
#include "spherical/core.hpp"
#include "spherical/decompose.hpp"
#include "spherical/errors.hpp"
#include "spherical/tolerance.hpp"
#include "spherical/trace_detail.hpp"
#include "spherical/trig.hpp"

namespace spherical {

namespace {

double wrap_fan(double x, double theta) {
	double m = std::fmod(x, theta);
	if (m < 0) m += theta;
	return m;
}

// Fan coordinate of the backward direction where a trace ran into a vertex.
// The final sub-arc lies in the end face, so the back ray sits inside that
// face's wedge at the vertex; locate the wedge and measure from its zero ray.
double arrival_psi(const Surface& s, const TracePath& p) {
	if (p.steps.empty() || p.stop != TraceStop::Singularity)
		fail(Errc::Internal, "arrival direction needs a trace ending at a vertex");
	const TraceStep& last = p.steps.back();
	const UnitVec& q = p.end_point;
	UnitVec back = normalized(cross(q, last.pole));
	int f = p.end_face;
	int k = -1;
	for (int i = 0; i < 3; ++i)
		if (arc_length(s.vertex(f, i), q) < 1e-7) k = i;
	if (k < 0) fail(Errc::Internal, "trace endpoint is not a vertex of its end face");
	UnitVec zero = tangent_toward(q, s.vertex(f, (k + 1) % 3));
	double a = tangent_angle_ccw(q, zero, back);
	double theta = s.corner_angle_at(Corner{f, k});
	if (a > theta + 1e-3) {
		if (a < 2 * M_PI - 1e-3)
			fail(Errc::Internal, "arrival direction falls outside the end wedge");
		a = 0; // tiny negative wrapped around
	}
	a = std::min(a, theta);
	return fan_coordinate(s, p.end_class, Corner{f, k}, a);
}

// A boundary arc candidate with a traversal direction.  Domain boundaries are
// walked with the domain on the left; start_psi is the fan coordinate of the
// outgoing ray at `from`, end_psi the fan coordinate of the incoming back ray
// at `to`.  The reverse of an arc swaps the two coordinates.
struct DirectedArc {
	const Connection* conn = nullptr;
	bool forward = true;
	int from = -1, to = -1;
	double start_psi = 0, end_psi = 0;
};

std::vector<DirectedArc> directed_arcs(const Surface& s, const Inventory& inv) {
	std::vector<DirectedArc> out;
	for (const Connection& c : inv.connections) {
		if (c.length >= M_PI - 1e-9) continue; // domain sides are strictly shorter
		double fwd = fan_coordinate(s, c.from_class, c.corner, c.angle);
		double bwd = arrival_psi(s, c.path);
		DirectedArc a;
		a.conn = &c;
		a.forward = true;
		a.from = c.from_class;
		a.to = c.to_class;
		a.start_psi = fwd;
		a.end_psi = bwd;
		out.push_back(a);
		DirectedArc r;
		r.conn = &c;
		r.forward = false;
		r.from = c.to_class;
		r.to = c.from_class;
		r.start_psi = bwd;
		r.end_psi = fwd;
		out.push_back(r);
	}
	return out;
}

// Angle swept on the domain side when arc `a` arrives at a vertex and arc `b`
// leaves it: counterclockwise from b's outgoing ray to a's back ray, measured
// in the vertex fan.  Domain-side angles sit in [pi, 2 pi]; anything else
// disqualifies the junction.
std::optional<double> junction_angle(const Surface& s, const DirectedArc& a, const DirectedArc& b) {
	if (a.to != b.from) return std::nullopt;
	double theta = s.class_angle(a.to);
	double d = wrap_fan(a.end_psi - b.start_psi, theta);
	if (d < M_PI - 1e-7 || d > 2 * M_PI + 1e-7) return std::nullopt;
	return d;
}

struct Chain {
	std::vector<int> arcs;
	std::vector<double> angles; // angles[i] = junction entering arcs[i]
};

// All cyclic chains of distinct directed arcs whose junctions all qualify as
// domain-side angles.  Canonical form: the smallest arc id leads.
std::vector<Chain> enumerate_chains(const Surface& s, const std::vector<DirectedArc>& arcs,
                                    long budget) {
	int m = static_cast<int>(arcs.size());
	std::vector<std::vector<std::pair<int, double>>> next(m);
	for (int a = 0; a < m; ++a)
		for (int b = 0; b < m; ++b) {
			if (b == (a ^ 1)) continue; // immediate backtrack
			if (auto d = junction_angle(s, arcs[a], arcs[b])) next[a].push_back({b, *d});
		}

	const std::size_t cap = 24;
	long visits = 0;
	std::vector<Chain> out;
	std::vector<int> stack;
	std::vector<double> deltas;
	std::vector<char> used(m, 0);
	std::function<void(int)> grow = [&](int root) {
		if (++visits > budget)
			fail(Errc::BudgetExceeded, "domain boundary search exceeded the budget");
		int last = stack.back();
		for (auto [b, d] : next[last]) {
			if (b == root) {
				Chain c;
				c.arcs = stack;
				c.angles.assign(stack.size(), 0);
				c.angles[0] = d;
				for (std::size_t i = 1; i < stack.size(); ++i) c.angles[i] = deltas[i - 1];
				out.push_back(std::move(c));
				continue;
			}
			if (b < root || used[b] || stack.size() >= cap) continue;
			used[b] = 1;
			stack.push_back(b);
			deltas.push_back(d);
			grow(root);
			deltas.pop_back();
			stack.pop_back();
			used[b] = 0;
		}
	};
	for (int root = 0; root < m; ++root) {
		stack.assign(1, root);
		deltas.clear();
		used.assign(m, 0);
		used[root] = 1;
		grow(root);
	}
	return out;
}

void append_steps(TracePath& out, const TracePath& src, bool forward) {
	if (forward) {
		for (const TraceStep& st : src.steps) out.steps.push_back(st);
		return;
	}
	for (auto it = src.steps.rbegin(); it != src.steps.rend(); ++it) {
		TraceStep st = *it;
		std::swap(st.enter, st.exit);
		st.pole = -st.pole;
		st.reversed = !st.reversed;
		st.exited = EdgeRef{};
		out.steps.push_back(st);
	}
}

TracePath chain_path(const std::vector<DirectedArc>& arcs, const Chain& c) {
	TracePath p;
	for (int id : c.arcs) {
		const DirectedArc& a = arcs[id];
		append_steps(p, a.conn->path, a.forward);
		p.length += a.conn->length;
	}
	p.stop = TraceStop::Singularity;
	const DirectedArc& last = arcs[c.arcs.back()];
	p.end_class = last.to;
	if (last.forward) {
		p.end_face = last.conn->path.end_face;
		p.end_point = last.conn->path.end_point;
	} else {
		p.end_face = last.conn->path.steps.front().face;
		p.end_point = last.conn->path.steps.front().enter;
	}
	return p;
}

// A point just left of a traversed sub-arc, in the chart of the face it
// crosses.  Two chains bound the same domain exactly when their witness sets
// agree; twin chains sharing a full boundary sit on opposite sides and so get
// disjoint witnesses.
struct Witness {
	int face = -1;
	Vec3 p;
};

void add_witnesses(std::vector<Witness>& w, const DirectedArc& a) {
	for (const TraceStep& st : a.conn->path.steps) {
		if (arc_length(st.enter, st.exit) < 1e-3) continue;
		UnitVec m = normalized(st.enter + st.exit);
		UnitVec t = tangent_toward(m, a.forward ? st.exit : st.enter);
		UnitVec left = normalized(cross(m, t));
		w.push_back({st.face, geodesic_point(m, left, 1e-4)});
	}
}

bool same_witnesses(const std::vector<Witness>& a, const std::vector<Witness>& b) {
	if (a.size() != b.size()) return false;
	auto covered = [](const std::vector<Witness>& x, const std::vector<Witness>& y) {
		for (const Witness& u : x) {
			bool hit = false;
			for (const Witness& v : y)
				if (u.face == v.face && norm(u.p - v.p) < 1e-6) hit = true;
			if (!hit) return false;
		}
		return true;
	};
	return covered(a, b) && covered(b, a);
}

bool multiset_close(std::vector<double> a, std::vector<double> b, double tol) {
	if (a.size() != b.size()) return false;
	std::sort(a.begin(), a.end());
	std::sort(b.begin(), b.end());
	for (std::size_t i = 0; i < a.size(); ++i)
		if (std::fabs(a[i] - b[i]) > tol) return false;
	return true;
}

std::vector<Rotation> develop_piece(const Surface& p) {
	std::vector<Rotation> dev(p.num_faces());
	std::vector<char> seen(p.num_faces(), 0);
	std::vector<int> stack = {0};
	seen[0] = 1;
	while (!stack.empty()) {
		int f = stack.back();
		stack.pop_back();
		for (int k = 0; k < 3; ++k) {
			EdgeRef e{f, k};
			if (p.is_boundary(e)) continue;
			int g = p.partner(e).face;
			if (seen[g]) continue;
			seen[g] = 1;
			dev[g] = dev[f] * p.transition(e);
			stack.push_back(g);
		}
	}
	for (char c : seen)
		if (!c) fail(Errc::Internal, "piece development did not reach every face");
	return dev;
}

bool strictly_inside_tri(const UnitVec& a, const UnitVec& b, const UnitVec& c, const UnitVec& x) {
	return triple(a, b, x) > 1e-9 && triple(b, c, x) > 1e-9 && triple(c, a, x) > 1e-9;
}

bool strictly_within_arc(const UnitVec& a, const UnitVec& b, const UnitVec& x) {
	double ab = arc_length(a, b);
	return arc_length(a, x) > 1e-7 && arc_length(b, x) > 1e-7 &&
	       arc_length(a, x) + arc_length(x, b) <= ab + 1e-12;
}

bool triangles_overlap(const UnitVec* A, const UnitVec* B) {
	for (int i = 0; i < 3; ++i)
		if (strictly_inside_tri(A[0], A[1], A[2], B[i]) ||
		    strictly_inside_tri(B[0], B[1], B[2], A[i]))
			return true;
	for (int i = 0; i < 3; ++i)
		for (int j = 0; j < 3; ++j) {
			Vec3 n1 = cross(A[i], A[(i + 1) % 3]);
			Vec3 n2 = cross(B[j], B[(j + 1) % 3]);
			Vec3 d = cross(n1, n2);
			if (norm(d) < 1e-12) continue; // same great circle
			UnitVec x = normalized(d);
			for (const UnitVec& c : {x, UnitVec(-x)})
				if (strictly_within_arc(A[i], A[(i + 1) % 3], c) &&
				    strictly_within_arc(B[j], B[(j + 1) % 3], c))
					return true;
		}
	return false;
}

// The development of a domain must lay the piece out injectively with its
// boundary polygon inside some closed half sphere.
bool develops_as_polygon_complement(const Surface& p) {
	std::vector<Rotation> dev = develop_piece(p);
	std::vector<std::array<UnitVec, 3>> tri(p.num_faces());
	for (int f = 0; f < p.num_faces(); ++f)
		for (int k = 0; k < 3; ++k) tri[f][k] = dev[f](p.vertex(f, k));
	for (int f = 0; f < p.num_faces(); ++f)
		for (int g = f + 1; g < p.num_faces(); ++g)
			if (triangles_overlap(tri[f].data(), tri[g].data())) return false;

	auto walks = p.boundary_walks();
	if (walks.size() != 1) return false;
	std::vector<UnitVec> q;
	for (EdgeRef e : walks[0]) q.push_back(dev[e.face](p.vertex(e.face, e.edge)));

	std::vector<UnitVec> cand = q;
	Vec3 sum{0, 0, 0};
	for (const UnitVec& v : q) sum = sum + v;
	if (norm(sum) > 1e-9) cand.push_back(normalized(sum));
	for (std::size_t i = 0; i < q.size(); ++i)
		for (std::size_t j = i + 1; j < q.size(); ++j) {
			Vec3 d = cross(q[i], q[j]);
			if (norm(d) < 1e-9) continue;
			cand.push_back(normalized(d));
			cand.push_back(UnitVec(-normalized(d)));
		}
	for (const UnitVec& c : cand) {
		bool ok = true;
		for (const UnitVec& v : q)
			if (dot(c, v) < -1e-6) ok = false;
		if (ok) return true;
	}
	return false;
}

struct PieceData {
	std::vector<double> angles, sides;
	double area = 0;
};

// Structural certificate that a cut piece really is an exterior domain with
// the given number of boundary arcs: a polygon whose angles and sides sit in
// the domain ranges, whose area exceeds a half sphere, and whose development
// embeds with the boundary in a closed half sphere.
std::optional<PieceData> certify_piece(const Surface& p, std::size_t expected_arcs) {
	if (!is_polygon(p)) return std::nullopt;
	std::vector<CycleVertex> cyc = singular_cycle(p);
	if (cyc.size() != expected_arcs) return std::nullopt;
	PieceData d;
	bool flat = true;
	for (const CycleVertex& v : cyc) {
		if (v.angle < M_PI - 1e-7 || v.angle > 2 * M_PI + 1e-7) return std::nullopt;
		if (v.side <= 1e-9 || v.side >= M_PI - 1e-9) return std::nullopt;
		if (std::fabs(v.angle - M_PI) > 1e-6) flat = false;
		d.angles.push_back(v.angle);
		d.sides.push_back(v.side);
	}
	d.area = p.area();
	bool above_half = d.area > 2 * M_PI + 1e-9 || (flat && d.area > 2 * M_PI - 1e-9);
	if (!above_half || d.area > 4 * M_PI + 1e-7) return std::nullopt;
	if (!develops_as_polygon_complement(p)) return std::nullopt;
	return d;
}

ExteriorDomain::Shape classify_shape(const std::vector<double>& angles,
                                     const std::vector<double>& sides, double& digon_angle) {
	std::size_t n = angles.size();
	std::vector<std::size_t> bent;
	for (std::size_t i = 0; i < n; ++i)
		if (std::fabs(angles[i] - M_PI) > 1e-6) bent.push_back(i);
	digon_angle = 0;
	if (bent.empty()) return ExteriorDomain::Shape::HalfSphere;
	if (bent.size() == 2 && std::fabs(angles[bent[0]] - angles[bent[1]]) < 1e-6) {
		double run = 0;
		for (std::size_t i = bent[0]; i != bent[1]; i = (i + 1) % n) run += sides[i];
		double rest = 0;
		for (std::size_t i = bent[1]; i != bent[0]; i = (i + 1) % n) rest += sides[i];
		if (std::fabs(run - M_PI) < 1e-6 && std::fabs(rest - M_PI) < 1e-6) {
			digon_angle = angles[bent[0]];
			return ExteriorDomain::Shape::FoliatedDigon;
		}
	}
	return ExteriorDomain::Shape::PolygonComplement;
}

// Input contract shared by the domain search and the census.
void require_domain_input(const Surface& s, const SearchOptions& opt) {
	if (!s.closed()) fail(Errc::InvalidParameter, "exterior domains need a closed surface");
	bool any = false, essential = false;
	for (int c = 0; c < s.num_classes(); ++c) {
		if (!s.class_singular(c)) continue;
		any = true;
		if (!s.class_removable(c)) essential = true;
	}
	if (!any) fail(Errc::InvalidParameter, "no singular vertices to anchor the search");
	if (!essential)
		fail(Errc::RemovableSingularitiesOnly, "all singularities are removable marks");
	if (s.genus() == 0) {
		std::vector<int> cones;
		for (int c = 0; c < s.num_classes(); ++c)
			if (s.class_singular(c) && !s.class_removable(c)) cones.push_back(c);
		if (cones.size() == 2) {
			SearchOptions o = opt;
			o.max_len = std::max(o.max_len, M_PI + 1e-3);
			GeodesicFamily fam = sweep_family(s, cones[0], false, o);
			bool antipodal = !fam.digons.empty();
			for (const FamilyDigon& dg : fam.digons)
				if (dg.antipode_class != cones[1]) antipodal = false;
			if (fam.closes_up && antipodal)
				fail(Errc::SingularSphereInput,
				     "two-cone sphere: half spheres embed everywhere off the axis");
		}
	}
}

struct FoundDomain {
	ExteriorDomain dom;
	TracePath path;
};

std::vector<FoundDomain> find_domains(const Surface& s, const SearchOptions& opt) {
	require_domain_input(s, opt);
	SearchOptions eopt = opt;
	eopt.max_len = M_PI;
	Inventory inv = enumerate_connections(s, eopt);
	std::vector<DirectedArc> arcs = directed_arcs(s, inv);
	std::vector<Chain> chains = enumerate_chains(s, arcs, opt.budget);

	std::vector<FoundDomain> out;
	std::vector<std::vector<Witness>> seen;
	std::vector<char> arc_used(arcs.size(), 0);
	for (const Chain& c : chains) {
		TracePath path = chain_path(arcs, c);
		std::vector<double> lens;
		for (int id : c.arcs) lens.push_back(arcs[id].conn->length);

		std::vector<Surface> pieces = cut(s, path);
		const Surface* match = nullptr;
		std::optional<PieceData> data;
		for (const Surface& p : pieces) {
			auto cert = certify_piece(p, c.arcs.size());
			if (!cert) continue;
			if (!multiset_close(cert->angles, c.angles, 1e-6)) continue;
			if (!multiset_close(cert->sides, lens, 1e-6)) continue;
			match = &p;
			data = cert;
			break;
		}
		if (!match) continue;

		std::vector<Witness> wit;
		for (int id : c.arcs) add_witnesses(wit, arcs[id]);
		bool dup = false;
		for (const auto& w : seen)
			if (same_witnesses(w, wit)) dup = true;
		if (dup) continue;

		for (int id : c.arcs) {
			if (arc_used[id])
				fail(Errc::GeometryError, "two exterior domains share a boundary arc");
			arc_used[id] = 1;
		}
		seen.push_back(std::move(wit));

		FoundDomain fd;
		fd.dom.vertices.reserve(c.arcs.size());
		for (int id : c.arcs) fd.dom.vertices.push_back(arcs[id].from);
		fd.dom.angles = c.angles;
		for (int id : c.arcs) {
			fd.dom.sides.push_back(arcs[id].conn->length);
			fd.dom.words.push_back(arcs[id].conn->word);
		}
		fd.dom.area = data->area;
		fd.dom.geometry = *match;
		fd.dom.shape = classify_shape(fd.dom.angles, fd.dom.sides, fd.dom.digon_angle);
		fd.path = std::move(path);
		out.push_back(std::move(fd));
	}
	return out;
}

} // namespace

bool embeds_half_sphere_at(const Surface& s, int face, const UnitVec& point,
                           const SearchOptions& opt) {
	if (!s.closed()) fail(Errc::InvalidParameter, "open surface cannot contain a half sphere");
	if (face < 0 || face >= s.num_faces() || !detail::point_in_face(s, face, point, 1e-9))
		fail(Errc::InvalidParameter, "probe point is not in the given face");
	for (int k = 0; k < 3; ++k)
		if (arc_length(s.vertex(face, k), point) < 1e-9 && s.class_singular(s.vclass(face, k)))
			fail(Errc::SingularCenter, "probe point sits on a singular vertex");
	// exp is defined on the open half sphere iff no singularity comes closer
	// than pi/2, injective iff no geodesic loop at the center is shorter
	// than pi (the first conjugate radius, pi, lies beyond the half sphere)
	auto d = distance_to_singular(s, face, point, M_PI / 2 + 1e-6, opt);
	if (d && *d < M_PI / 2 - 1e-9) return false;
	auto l = shortest_loop_at(s, face, point, M_PI + 1e-6, opt);
	return !(l && *l < M_PI - 1e-9);
}

std::vector<ExteriorDomain> exterior_domains(const Surface& s, const SearchOptions& opt) {
	std::vector<FoundDomain> found = find_domains(s, opt);
	std::vector<ExteriorDomain> out;
	out.reserve(found.size());
	for (FoundDomain& f : found) out.push_back(std::move(f.dom));
	return out;
}

Soul soul_of(const ExteriorDomain& d) {
	Soul s;
	if (d.shape == ExteriorDomain::Shape::HalfSphere) {
		s.kind = SoulKind::Point;
		return s;
	}
	if (d.shape == ExteriorDomain::Shape::FoliatedDigon) {
		s.kind = SoulKind::Segment;
		s.length = d.digon_angle - M_PI;
		return s;
	}
	s.kind = SoulKind::Polygon;
	for (std::size_t i = 0; i < d.sides.size(); ++i) {
		s.angles.push_back(M_PI - d.sides[i]);
		s.sides.push_back(d.angles[i] - M_PI);
		s.length += d.angles[i] - M_PI;
	}
	return s;
}

CoreReport core_report(const Surface& s, const SearchOptions& opt) {
	std::vector<FoundDomain> found = find_domains(s, opt);
	CoreReport r;
	r.genus = s.genus();
	for (const Surface::ConePoint& cp : s.cone_points(true)) {
		++r.cone_points;
		r.alpha_sum += cp.angle / (2 * M_PI);
	}

	for (FoundDomain& f : found) {
		r.boundary_arcs.push_back(static_cast<int>(f.dom.sides.size()));
		if (f.dom.shape == ExteriorDomain::Shape::HalfSphere) r.has_half_sphere_domain = true;
		if (f.dom.shape == ExteriorDomain::Shape::FoliatedDigon)
			r.has_foliated_digon_domain = true;
		if (f.dom.sides.size() == 2) r.slit_domain_found = true;
		r.domains.push_back(f.dom); // keep a copy; paths still needed below
	}
	r.discriminant_margin = std::numeric_limits<double>::infinity();
	for (const ExteriorDomain& d : r.domains)
		for (double a : d.angles)
			r.discriminant_margin = std::min(r.discriminant_margin, std::fabs(a - M_PI));
	r.discriminant_member = r.discriminant_margin <= global_tolerance().angle;

	int p = static_cast<int>(r.domains.size());
	int b_sum = 0;
	for (int b : r.boundary_arcs) b_sum += b;
	r.formula_count = 4 * r.genus - 4 + 2 * r.cone_points + 2 * p - b_sum;

	// carve the domains out and triangulate what is left
	std::vector<Surface> core_pieces;
	if (p == 0) {
		core_pieces.push_back(s);
	} else {
		TracePath all;
		for (const FoundDomain& f : found) {
			for (const TraceStep& st : f.path.steps) all.steps.push_back(st);
			all.length += f.path.length;
		}
		all.stop = TraceStop::Singularity;
		all.end_class = found.back().path.end_class;
		all.end_face = found.back().path.end_face;
		all.end_point = found.back().path.end_point;
		std::vector<Surface> pieces = cut(s, all);
		std::vector<char> taken(pieces.size(), 0);
		for (const ExteriorDomain& d : r.domains) {
			bool hit = false;
			for (std::size_t i = 0; i < pieces.size(); ++i) {
				if (taken[i]) continue;
				if (std::fabs(pieces[i].area() - d.area) < 1e-6 * (1 + d.area)) {
					taken[i] = 1;
					hit = true;
					break;
				}
			}
			if (!hit)
				fail(Errc::GeometryError, "no cut piece matches an exterior domain's area");
		}
		for (std::size_t i = 0; i < pieces.size(); ++i)
			if (!taken[i]) core_pieces.push_back(std::move(pieces[i]));
		if (core_pieces.size() > 1)
			fail(Errc::GeometryError, "core of the surface is disconnected");
		r.degenerate_core = core_pieces.empty();
	}

	bool all_triangles = true;
	for (const Surface& cp : core_pieces) {
		Decomposition dec = decompose(cp, opt);
		for (Piece& pc : dec.pieces) {
			if (pc.tag == PieceTag::Triangle) ++r.triangle_count;
			else all_triangles = false;
			r.core_area += pc.geometry.area();
			for (double a : pc.angles) r.core_angle += a;
			r.core_triangles.push_back(std::move(pc));
		}
	}

	r.core_area_bound = (8 * r.genus - 8 + 4 * r.cone_points) * M_PI;
	r.core_angle_bound = (12 * r.genus - 12 + 6 * r.cone_points) * M_PI;
	r.domains_lower = 3 - 3 * r.genus - 1.5 * r.cone_points + 0.5 * r.alpha_sum;
	r.domains_upper = 2 - 2 * r.genus - r.cone_points + r.alpha_sum;
	r.bounds_ok = p <= r.domains_upper + 1e-9 &&
	              (r.has_foliated_digon_domain || p >= r.domains_lower - 1e-9);
	r.counts_consistent = r.degenerate_core || r.has_foliated_digon_domain ||
	                      (all_triangles && r.triangle_count == r.formula_count);
	r.slit_domain_expected =
	    r.alpha_sum >= 10 * r.genus - 10 + 5 * r.cone_points - 1e-9 &&
	    !r.has_foliated_digon_domain;
	return r;
}

} // namespace spherical
