#include <cmath>
#include <limits>

#include "spherical/errors.hpp"
#include "spherical/geodesics.hpp"
#include "spherical/tolerance.hpp"
#include "spherical/trace_detail.hpp"
#include "spherical/trig.hpp"

namespace spherical {

namespace detail {

double snap_radius() {
	// Crossings that miss an edge endpoint by less than this count as hits on
	// the vertex.  Kept a little above the chart tolerance so that the same
	// crossing is classified the same way on both sides of a gluing.
	return std::max(global_tolerance().vec, 1e-11);
}

bool point_in_face(const Surface& s, int face, const UnitVec& x, double slack) {
	for (int k = 0; k < 3; ++k)
		if (triple(s.vertex(face, k), s.vertex(face, (k + 1) % 3), x) < -slack) return false;
	return true;
}

// Walks corner wedges around the vertex, consuming the turn angle wedge by
// wedge.  After each fan crossing the reference direction is the shared edge
// itself, so nothing accumulates except the consumed angle.
Turn turn_at_vertex(const Surface& s, Corner at, const UnitVec& from, double turn, bool ccw) {
	const double eps = global_tolerance().angle;
	Corner cur = at;
	const UnitVec* v = &s.vertex(cur.face, cur.corner);
	UnitVec out_dir = tangent_toward(*v, s.vertex(cur.face, (cur.corner + 1) % 3));
	double theta = s.corner_angle_at(cur);
	double phi = tangent_angle_ccw(*v, out_dir, from); // ccw offset from the out edge
	if (phi > theta + 1.0) phi -= 2 * M_PI;            // from just below the out edge
	double left = turn;
	int guard = 6 * s.num_faces() + 8;
	for (;;) {
		if (--guard < 0) fail(Errc::Internal, "turn exceeds the angle around the vertex");
		double avail = ccw ? theta - phi : phi;
		if (std::fabs(left - avail) <= eps) {
			Turn r;
			r.kind = Turn::AlongEdge;
			r.corner = cur;
			if (ccw) { // lands on the incoming edge, walked backwards
				r.edge = EdgeRef{cur.face, (cur.corner + 2) % 3};
				r.reversed = true;
			} else { // lands on the outgoing edge
				r.edge = EdgeRef{cur.face, cur.corner};
				r.reversed = false;
			}
			return r;
		}
		if (left < avail) {
			Turn r;
			r.kind = Turn::Interior;
			r.corner = cur;
			r.dir = rotate_tangent(*v, out_dir, ccw ? phi + left : phi - left);
			return r;
		}
		left -= avail;
		Corner nc = ccw ? s.next_corner_ccw(cur) : s.next_corner_cw(cur);
		if (nc.face < 0) {
			Turn r;
			r.kind = Turn::OffSurface;
			r.corner = cur;
			return r;
		}
		cur = nc;
		v = &s.vertex(cur.face, cur.corner);
		out_dir = tangent_toward(*v, s.vertex(cur.face, (cur.corner + 1) % 3));
		theta = s.corner_angle_at(cur);
		phi = ccw ? 0 : theta; // continue from the just-crossed shared edge
	}
}

} // namespace detail

namespace {

using detail::Turn;

struct Pending {
	enum Kind { Circle, Edge, Done } kind = Done;
	// Circle
	int face = -1;
	UnitVec x, u;
	int entry = -1; // edge slot just crossed into this face, or -1
	// Edge
	EdgeRef e{};
	bool rev = false;
};

class Tracer {
public:
	Tracer(const Surface& s, const TraceOptions& opt) : s_(s), opt_(opt) {}

	TracePath take() { return std::move(out_); }

	void run(Pending p) {
		while (p.kind != Pending::Done) p = p.kind == Pending::Circle ? circle_step(p) : edge_step(p);
	}

	static Pending circle(int face, const UnitVec& x, const UnitVec& u, int entry) {
		Pending p;
		p.kind = Pending::Circle;
		p.face = face;
		p.x = x;
		p.u = u;
		p.entry = entry;
		return p;
	}

	static Pending edge(EdgeRef e, bool rev) {
		Pending p;
		p.kind = Pending::Edge;
		p.e = e;
		p.rev = rev;
		return p;
	}

private:
	// One face crossing of a transversal arc.
	Pending circle_step(const Pending& in) {
		int f = in.face;
		UnitVec x = in.x;
		UnitVec u = normalized(in.u - dot(in.u, x) * x);
		UnitVec w = normalized(cross(x, u));
		const double snap = detail::snap_radius();

		double best_d = std::numeric_limits<double>::infinity();
		UnitVec best_y;
		int best_k = -1;
		for (int k = 0; k < 3; ++k) {
			if (k == in.entry) continue;
			const UnitVec& a = s_.vertex(f, k);
			const UnitVec& b = s_.vertex(f, (k + 1) % 3);
			Vec3 c = cross(w, normalized(cross(a, b)));
			double cn = norm(c);
			if (cn < 1e-13) continue; // arc lies on the trace circle
			double len = s_.edge_length(EdgeRef{f, k});
			for (double sgn : {1.0, -1.0}) {
				UnitVec y = c * (sgn / cn);
				if (arc_length(a, y) + arc_length(y, b) > len + snap) continue;
				double d = std::atan2(dot(y, u), dot(y, x));
				if (d < 0) d += 2 * M_PI;
				// ignore the point we are standing on (vertex starts touch
				// their two adjacent edges at distance zero)
				if (d <= 1e-11) d += 2 * M_PI;
				if (d < best_d) {
					best_d = d;
					best_y = y;
					best_k = k;
				}
			}
		}
		if (best_k < 0) fail(Errc::Internal, "transversal arc found no exit from a face");

		if (t_ + best_d >= opt_.max_len - 1e-12) return budget_stop(f, x, u, w);

		// hits on an endpoint of the crossed edge take precedence
		for (int j : {best_k, (best_k + 1) % 3}) {
			const UnitVec& v = s_.vertex(f, j);
			if (arc_length(best_y, v) > snap) continue;
			double d = std::atan2(dot(v, u), dot(v, x));
			if (d < 0) d += 2 * M_PI;
			push_step(f, x, v, w, {}, false, {});
			t_ += d;
			UnitVec w_in = normalized(u * std::cos(d) - x * std::sin(d));
			return at_vertex(Corner{f, j}, w_in);
		}

		EdgeRef e{f, best_k};
		EdgeRef p = s_.partner(e);
		push_step(f, x, best_y, w, {}, false, p.valid() ? e : EdgeRef{});
		t_ += best_d;
		if (!p.valid()) {
			out_.stop = TraceStop::Boundary;
			finish(f, best_y);
			return {};
		}
		UnitVec dir = normalized(u * std::cos(best_d) - x * std::sin(best_d));
		const Rotation& T = s_.transition(p); // f's chart into p.face's chart
		return circle(p.face, normalized(T(best_y)), T(dir), p.edge);
	}

	// One edge of an arc running along the edge graph.
	Pending edge_step(const Pending& in) {
		EdgeRef e = in.e;
		int f = e.face;
		UnitVec a = in.rev ? s_.edge_end(e) : s_.edge_start(e);
		UnitVec b = in.rev ? s_.edge_start(e) : s_.edge_end(e);
		double len = s_.edge_length(e);
		UnitVec u = tangent_toward(a, b);
		UnitVec w = normalized(cross(a, u));
		if (t_ + len >= opt_.max_len - 1e-12) return budget_stop(f, a, u, w);
		push_step(f, a, b, w, e, in.rev, {});
		t_ += len;
		int far_slot = in.rev ? e.edge : (e.edge + 1) % 3;
		UnitVec w_in = normalized(u * std::cos(len) - a * std::sin(len));
		return at_vertex(Corner{f, far_slot}, w_in);
	}

	Pending budget_stop(int f, const UnitVec& x, const UnitVec& u, const UnitVec& w) {
		double dt = opt_.max_len - t_;
		UnitVec y = geodesic_point(x, u, dt);
		push_step(f, x, y, w, {}, false, {});
		t_ = opt_.max_len;
		out_.stop = TraceStop::Budget;
		finish(f, y);
		return {};
	}

	// Arrived at a vertex with travel direction w_in (tangent at the vertex in
	// the chart of c.face).
	Pending at_vertex(Corner c, const UnitVec& w_in) {
		int cls = s_.vclass(c);
		UnitVec back = -w_in;
		if (s_.class_singular(cls)) {
			if (opt_.singular == SingularRule::Stop) {
				out_.stop = TraceStop::Singularity;
				out_.end_class = cls;
				finish(c.face, s_.vertex(c.face, c.corner));
				return {};
			}
			out_.through.push_back({cls, t_});
			Turn tn = detail::turn_at_vertex(s_, c, back, M_PI,
			                                 opt_.singular == SingularRule::ContinueCcw);
			return resume(tn);
		}
		// flat vertex: straight continuation, whichever side has room
		Turn tn = detail::turn_at_vertex(s_, c, back, M_PI, true);
		if (tn.kind == Turn::OffSurface) tn = detail::turn_at_vertex(s_, c, back, M_PI, false);
		return resume(tn);
	}

	Pending resume(const Turn& tn) {
		switch (tn.kind) {
		case Turn::Interior:
			return circle(tn.corner.face, s_.vertex(tn.corner.face, tn.corner.corner), tn.dir, -1);
		case Turn::AlongEdge:
			return edge(tn.edge, tn.reversed);
		case Turn::OffSurface:
		default:
			out_.stop = TraceStop::Boundary;
			finish(tn.corner.face, s_.vertex(tn.corner.face, tn.corner.corner));
			return {};
		}
	}

	void push_step(int f, const UnitVec& enter, const UnitVec& exit, const UnitVec& pole,
	               EdgeRef along, bool rev, EdgeRef exited) {
		TraceStep st;
		st.face = f;
		st.enter = enter;
		st.exit = exit;
		st.pole = pole;
		st.along_edge = along;
		st.reversed = rev;
		st.exited = exited;
		out_.steps.push_back(st);
	}

	void finish(int f, const UnitVec& p) {
		out_.end_face = f;
		out_.end_point = p;
		out_.length = t_;
	}

	const Surface& s_;
	TraceOptions opt_;
	TracePath out_;
	double t_ = 0;
};

} // namespace

TracePath trace_from_point(const Surface& s, int face, const UnitVec& point, const UnitVec& dir,
                           const TraceOptions& opt) {
	if (face < 0 || face >= s.num_faces()) fail(Errc::InvalidParameter, "face index out of range");
	if (!is_unit(point, 1e-9)) fail(Errc::InvalidParameter, "trace start must be a unit vector");
	if (!detail::point_in_face(s, face, point, 1e-9))
		fail(Errc::InvalidParameter, "trace start outside its face");
	Vec3 t = dir - dot(dir, point) * point;
	if (norm(t) < 1e-9) fail(Errc::InvalidParameter, "trace direction has no tangential part");
	Tracer tr(s, opt);
	tr.run(Tracer::circle(face, point, normalized(t), -1));
	return tr.take();
}

TracePath trace_from_corner(const Surface& s, Corner c, double angle, const TraceOptions& opt) {
	if (c.face < 0 || c.face >= s.num_faces() || c.corner < 0 || c.corner > 2)
		fail(Errc::InvalidParameter, "corner out of range");
	double theta = s.corner_angle_at(c);
	const double eps = global_tolerance().angle;
	if (angle <= eps || angle >= theta - eps)
		fail(Errc::AmbiguousStart, "direction runs along a wedge side; trace the edge instead");
	const UnitVec& v = s.vertex(c.face, c.corner);
	UnitVec o = tangent_toward(v, s.vertex(c.face, (c.corner + 1) % 3));
	Tracer tr(s, opt);
	tr.run(Tracer::circle(c.face, v, rotate_tangent(v, o, angle), -1));
	return tr.take();
}

TracePath trace_along_edge(const Surface& s, EdgeRef e, bool reversed, const TraceOptions& opt) {
	if (e.face < 0 || e.face >= s.num_faces() || e.edge < 0 || e.edge > 2)
		fail(Errc::InvalidParameter, "edge out of range");
	Tracer tr(s, opt);
	tr.run(Tracer::edge(e, reversed));
	return tr.take();
}

} // namespace spherical
