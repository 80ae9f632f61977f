#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

#include "spherical/errors.hpp"
#include "spherical/geodesics.hpp"
#include "spherical/tolerance.hpp"
#include "spherical/trace_detail.hpp"
#include "spherical/trig.hpp"

// Saddle-connection search by unfolding: a breadth-first development of face
// chains into the chart of a source point.  Each state carries an interval of
// directions whose rays all cross the same chain of faces; far vertices of a
// state split its interval and become connection candidates.  Arc-length
// parameters are lifted through full turns so that hits beyond the antipode
// keep their true length.

namespace spherical {

namespace {

constexpr double kTau = 2 * M_PI;
// Developed vertices this close to the source point or its antipode are
// treated as exact refocusing hits.
constexpr double kCoincide = 1e-9;

struct UState {
	int face = -1;
	Rotation dev;          // face chart -> probe chart
	bool at_vertex = false;
	int entry = -1;        // edge slot the rays enter through (edge states)
	int corner = -1;       // corner slot at the developed source copy (vertex states)
	double lo = 0, hi = 0; // direction interval, lifted, lo < hi
	double t_lo = 0, t_hi = 0; // ray parameter at the interval-end entry crossings
	double t_floor = 0;        // lower bound for parameters on the entry edge
};

struct Probe {
	const Surface* s = nullptr;
	UnitVec v0;  // source point, in the probe chart
	UnitVec ref; // azimuth zero direction
	double max_len = kTau;

	std::function<void(int cls, double t, double psi, const UState&)> on_vertex;
	std::function<void(int cls, double t, const UState&)> on_antipode;
	std::function<void(int cls, double t, const UState&)> on_return;
	std::function<void(const UState&, EdgeRef, const UnitVec&, const UnitVec&)> on_boundary;
	std::function<void(const UState&)> on_state;
};

double azimuth(const Probe& p, const UnitVec& y) {
	return tangent_angle_ccw(p.v0, p.ref, tangent_toward(p.v0, y));
}

UnitVec ray_dir(const Probe& p, double psi) { return rotate_tangent(p.v0, p.ref, psi); }

// Smallest lift raw + 2*pi*k that is >= floor - 1e-6.
double lift_min(double raw, double floor) {
	double k = std::ceil((floor - 1e-6 - raw) / kTau);
	return raw + kTau * k;
}

// Representative of a within (center - pi, center + pi].
double lift_center(double a, double center) { return a + kTau * std::round((center - a) / kTau); }

// First crossing of the ray with the developed arc A->B at parameter >= floor.
std::optional<std::pair<UnitVec, double>> ray_edge_crossing(const Probe& p, double psi,
                                                            const UnitVec& A, const UnitVec& B,
                                                            double floor) {
	UnitVec u = ray_dir(p, psi);
	UnitVec w = cross(p.v0, u);
	Vec3 q = cross(A, B);
	double qn = norm(q);
	if (qn < 1e-13) return std::nullopt;
	q = q / qn;
	Vec3 c = cross(w, q);
	double cn = norm(c);
	double ab = arc_length(A, B);
	if (cn < 1e-12) {
		// ray runs along the arc's circle; neighboring rays all meet that
		// circle at +-v0, so the crossing degenerates to whichever of the
		// two the arc contains
		for (double sgn : {-1.0, 1.0}) {
			UnitVec y = p.v0 * sgn;
			if (arc_length(A, y) + arc_length(y, B) > ab + 1e-9) continue;
			return std::make_pair(y, lift_min(sgn < 0 ? M_PI : 0.0, floor));
		}
		return std::nullopt;
	}
	for (double sgn : {1.0, -1.0}) {
		UnitVec y = c * (sgn / cn);
		if (arc_length(A, y) + arc_length(y, B) > ab + 1e-9) continue;
		double raw = std::atan2(dot(y, u), dot(y, p.v0));
		return std::make_pair(y, lift_min(raw, floor));
	}
	return std::nullopt;
}

// Ray of the state's pencil passing through a developed point, with the arc
// parameter at which it gets there.  A point past the source antipode sits on
// the +pi branch of its azimuth (the shorter-arc direction flips there), so
// both branches are tried against the interval.  The pencil is narrower than
// pi, hence at most one branch fits.
std::optional<std::pair<double, double>> resolve_ray(const Probe& p, const UState& st,
                                                     const UnitVec& y) {
	double center = 0.5 * (st.lo + st.hi);
	double a = azimuth(p, y);
	for (double cand : {a, a + M_PI}) {
		double psi = lift_center(cand, center);
		if (psi < st.lo - 1e-9 || psi > st.hi + 1e-9) continue;
		double t = lift_min(std::atan2(dot(y, ray_dir(p, psi)), dot(y, p.v0)), st.t_floor);
		return std::make_pair(std::clamp(psi, st.lo, st.hi), t);
	}
	return std::nullopt;
}

// Branch lift closest to the pencil, for points that may sit outside it.
double nearest_ray(const Probe& p, const UState& st, const UnitVec& y) {
	double center = 0.5 * (st.lo + st.hi);
	double a = azimuth(p, y);
	double best = 0, best_d = std::numeric_limits<double>::infinity();
	for (double cand : {a, a + M_PI}) {
		double psi = lift_center(cand, center);
		double d = std::max({0.0, st.lo - psi, psi - st.hi});
		if (d < best_d) {
			best_d = d;
			best = psi;
		}
	}
	return best;
}

// Child state for the sub-interval (a, b) of the pencil.  With the interval
// cut at the far vertex ray, all its rays leave the face through one edge;
// which of the two far edges that is flips whenever the pencil refocuses at
// the source antipode inside the face, so slot < 0 means find it by sampling
// interior rays instead of trusting orientation.  Boundary edges report an
// exit segment instead of spawning.
void spawn_sub(const Probe& p, const UState& st, double a, double b, int slot,
               std::deque<UState>& q) {
	if (b - a <= 1e-12) return;
	const Surface& s = *p.s;
	std::optional<std::pair<UnitVec, double>> cm;
	if (slot < 0) {
		for (double frac : {0.5, 0.25, 0.75}) {
			double mid = a + (b - a) * frac;
			for (int sl : {(st.entry + 1) % 3, (st.entry + 2) % 3}) {
				EdgeRef me{st.face, sl};
				auto c = ray_edge_crossing(p, mid, st.dev(s.edge_start(me)),
				                           st.dev(s.edge_end(me)), st.t_floor);
				if (c && (!cm || c->second < cm->second)) {
					cm = c;
					slot = sl;
				}
			}
			if (cm) break;
		}
		if (slot < 0) return; // sliver grazing a vertex
	}
	EdgeRef e{st.face, slot};
	UnitVec A = st.dev(s.edge_start(e));
	UnitVec B = st.dev(s.edge_end(e));
	auto ca = ray_edge_crossing(p, a, A, B, st.t_floor);
	auto cb = ray_edge_crossing(p, b, A, B, st.t_floor);
	if (!ca && !cb && !cm) return;
	// an endpoint ray can graze past the end of the arc and miss it; any one
	// crossing bounds the others to within the arc length, so substitute
	const auto& fb = cm ? *cm : (ca ? *ca : *cb);
	double t_a = ca ? ca->second : fb.second;
	double t_b = cb ? cb->second : fb.second;
	if (s.is_boundary(e)) {
		if (p.on_boundary) {
			auto end_near = [&](double x) {
				return std::abs(nearest_ray(p, st, A) - x) <= std::abs(nearest_ray(p, st, B) - x)
				           ? A
				           : B;
			};
			p.on_boundary(st, e, ca ? ca->first : end_near(a), cb ? cb->first : end_near(b));
		}
		return;
	}
	EdgeRef pr = s.partner(e);
	UState ch;
	ch.face = pr.face;
	ch.entry = pr.edge;
	ch.dev = st.dev * s.transition(e);
	ch.lo = a;
	ch.hi = b;
	ch.t_lo = t_a;
	ch.t_hi = t_b;
	// any entry parameter is within the edge length of a known crossing
	ch.t_floor = std::max(st.t_floor, std::max(t_a, t_b) - s.edge_length(e));
	if (ch.t_floor < 0) ch.t_floor = 0;
	if (ch.t_floor > p.max_len + 1e-3) return;
	q.push_back(std::move(ch));
}

// Continuation through a flat vertex whose developed copy sits on the source
// point (t = 2*pi*k) or its antipode (t = odd pi): the ray pencil refocuses
// there and fans out into the corner wedges around the vertex.
void spawn_through(const Probe& p, const UState& st, Corner start, double t_hit, bool at_antipode,
                   std::deque<UState>& q) {
	const Surface& s = *p.s;
	std::vector<std::pair<Corner, Rotation>> fan;
	bool wrapped = false;
	Corner cur = start;
	Rotation dev = st.dev;
	int guard = 3 * s.num_faces() + 3;
	for (;;) {
		fan.push_back({cur, dev});
		if (--guard < 0) fail(Errc::Internal, "vertex fan walk did not close");
		EdgeRef in{cur.face, (cur.corner + 2) % 3};
		Corner nc = s.next_corner_ccw(cur);
		if (nc.face < 0) break;
		if (nc == start) {
			wrapped = true;
			break;
		}
		dev = dev * s.transition(in);
		cur = nc;
	}
	if (!wrapped) { // boundary fan: also collect the clockwise side
		cur = start;
		dev = st.dev;
		for (;;) {
			if (--guard < 0) fail(Errc::Internal, "vertex fan walk did not close");
			EdgeRef out{cur.face, cur.corner};
			Corner nc = s.next_corner_cw(cur);
			if (nc.face < 0 || nc == start) break;
			dev = dev * s.transition(out);
			cur = nc;
			fan.push_back({cur, dev});
		}
	}

	double center = 0.5 * (st.lo + st.hi);
	for (const auto& [cn, dv] : fan) {
		const UnitVec& v = s.vertex(cn.face, cn.corner);
		UnitVec to = dv(tangent_toward(v, s.vertex(cn.face, (cn.corner + 1) % 3)));
		UnitVec ti = dv(tangent_toward(v, s.vertex(cn.face, (cn.corner + 2) % 3)));
		// ray azimuth whose continuation at the refocus point runs along a
		// given wedge tangent: the travel direction there is -u at the
		// antipode and +u at the source
		auto psi_of = [&](const UnitVec& tau) {
			UnitVec u = at_antipode ? -tau : tau;
			u = normalized(u - dot(u, p.v0) * p.v0);
			return lift_center(tangent_angle_ccw(p.v0, p.ref, u), center);
		};
		double pa = psi_of(to), pb = psi_of(ti);
		double lo = std::max(std::min(pa, pb), st.lo);
		double hi = std::min(std::max(pa, pb), st.hi);
		if (hi - lo <= 1e-12) continue;
		UState ch;
		ch.face = cn.face;
		ch.at_vertex = true;
		ch.corner = cn.corner;
		ch.dev = dv;
		ch.lo = lo;
		ch.hi = hi;
		ch.t_lo = ch.t_hi = ch.t_floor = t_hit;
		if (ch.t_floor > p.max_len + 1e-3) continue;
		q.push_back(std::move(ch));
	}
}

void expand_edge(const Probe& p, const UState& st, std::deque<UState>& q) {
	const Surface& s = *p.s;
	int f = st.face;
	int j = (st.entry + 2) % 3; // far vertex slot
	UnitVec W = st.dev(s.vertex(f, j));
	int wcls = s.vclass(f, j);

	if (arc_length(W, p.v0) <= kCoincide) {
		double t_hit = lift_min(0.0, std::max(st.t_floor, 1.0)); // first positive full turn
		if (t_hit <= p.max_len + 1e-6 && p.on_return) p.on_return(wcls, t_hit, st);
		if (!s.class_singular(wcls)) spawn_through(p, st, Corner{f, j}, t_hit, false, q);
		return;
	}
	if (arc_length(W, -p.v0) <= kCoincide) {
		double t_hit = lift_min(M_PI, st.t_floor);
		if (t_hit <= p.max_len + 1e-6 && p.on_antipode) p.on_antipode(wcls, t_hit, st);
		if (!s.class_singular(wcls)) spawn_through(p, st, Corner{f, j}, t_hit, true, q);
		return;
	}

	auto rw = resolve_ray(p, st, W);
	if (rw && s.class_singular(wcls) && p.on_vertex) {
		if (rw->second > 1e-9 && rw->second <= p.max_len + 1e-9)
			p.on_vertex(wcls, rw->second, rw->first, st);
	}

	// the far vertex ray splits the pencil; each side leaves through a single
	// far edge
	double cut = rw ? rw->first : std::clamp(nearest_ray(p, st, W), st.lo, st.hi);
	spawn_sub(p, st, st.lo, cut, -1, q);
	spawn_sub(p, st, cut, st.hi, -1, q);
}

void bfs_run(const Probe& p, std::deque<UState>& q, long& budget) {
	while (!q.empty()) {
		if (--budget < 0) fail(Errc::BudgetExceeded, "unfolding state budget exhausted");
		UState st = std::move(q.front());
		q.pop_front();
		if (p.on_state) p.on_state(st);
		if (st.at_vertex)
			spawn_sub(p, st, st.lo, st.hi, (st.corner + 1) % 3, q); // opposite edge
		else
			expand_edge(p, st, q);
	}
}

Probe corner_probe(const Surface& s, Corner c, double max_len) {
	Probe p;
	p.s = &s;
	p.v0 = s.vertex(c.face, c.corner);
	p.ref = tangent_toward(p.v0, s.vertex(c.face, (c.corner + 1) % 3));
	p.max_len = max_len;
	return p;
}

UState corner_root(const Surface& s, Corner c) {
	UState st;
	st.face = c.face;
	st.at_vertex = true;
	st.corner = c.corner;
	st.lo = 0;
	st.hi = s.corner_angle_at(c);
	return st;
}

Probe point_probe(const Surface& s, const UnitVec& x, double max_len) {
	Probe p;
	p.s = &s;
	p.v0 = x;
	p.ref = any_tangent(x);
	p.max_len = max_len;
	return p;
}

// Seed states for an interior source point: one per glued edge of its face.
std::deque<UState> point_roots(const Probe& p, int face) {
	const Surface& s = *p.s;
	std::deque<UState> q;
	double az[3];
	for (int k = 0; k < 3; ++k) az[k] = azimuth(p, s.vertex(face, k));
	for (int m = 0; m < 3; ++m) {
		EdgeRef e{face, m};
		if (s.is_boundary(e)) continue;
		double lo = az[m];
		double hi = az[(m + 1) % 3];
		if (hi <= lo) hi += kTau;
		EdgeRef pr = s.partner(e);
		UState st;
		st.face = pr.face;
		st.entry = pr.edge;
		st.dev = s.transition(e);
		st.lo = lo;
		st.hi = hi;
		st.t_lo = arc_length(p.v0, s.vertex(face, m));
		st.t_hi = arc_length(p.v0, s.vertex(face, (m + 1) % 3));
		st.t_floor = std::max(0.0, std::max(st.t_lo, st.t_hi) - s.edge_length(e));
		q.push_back(std::move(st));
	}
	return q;
}

std::vector<int> word_of(const Surface& s, const TracePath& path) {
	std::vector<int> w;
	for (const TraceStep& st : path.steps) {
		bool along = st.along_edge.valid();
		EdgeRef e = along ? st.along_edge : st.exited;
		if (!e.valid()) continue;
		EdgeRef pr = s.partner(e);
		int uid = pr.valid() ? std::min(e.id(), pr.id()) : e.id();
		w.push_back(2 * uid + (along ? 1 : 0));
	}
	std::vector<int> r(w.rbegin(), w.rend());
	return std::min(w, r);
}

bool all_boundary(const Surface& s, const TracePath& path) {
	if (path.steps.empty()) return false;
	for (const TraceStep& st : path.steps)
		if (!st.along_edge.valid() || !s.is_boundary(st.along_edge)) return false;
	return true;
}

struct EdgeStart {
	EdgeRef e{};
	bool rev = false;
	Corner corner{};
	double angle = 0;
};

// Directions along the edge graph out of a vertex class, one per incident
// edge, each with the corner/angle that names the direction in the fan.
std::vector<EdgeStart> edge_starts(const Surface& s, int cls) {
	std::vector<EdgeStart> v;
	const auto& cs = s.class_corners(cls);
	for (Corner c : cs) v.push_back({EdgeRef{c.face, c.corner}, false, c, 0.0});
	if (s.class_boundary(cls)) {
		Corner lc = cs.back();
		v.push_back({EdgeRef{lc.face, (lc.corner + 2) % 3}, true, lc, s.corner_angle_at(lc)});
	}
	return v;
}

} // namespace

Inventory enumerate_connections(const Surface& s, const SearchOptions& opt) {
	Inventory inv;
	std::vector<int> scls;
	for (int c = 0; c < s.num_classes(); ++c)
		if (s.class_singular(c)) scls.push_back(c);

	struct Cand {
		Corner corner;
		double psi = 0, t = 0;
		int from = -1, to = -1;
	};
	std::vector<Cand> cands;
	std::set<int> pi_src, loop_src;

	for (int cls : scls) {
		for (Corner c : s.class_corners(cls)) {
			Probe p = corner_probe(s, c, opt.max_len);
			p.on_vertex = [&](int tcls, double t, double psi, const UState&) {
				if (t > 1e-9 && t <= opt.max_len + 1e-9) cands.push_back({c, psi, t, cls, tcls});
			};
			p.on_antipode = [&](int tcls, double t, const UState&) {
				if (s.class_singular(tcls) && std::fabs(t - M_PI) <= 1e-6) pi_src.insert(cls);
			};
			p.on_return = [&](int tcls, double t, const UState&) {
				if (tcls == cls && std::fabs(t - kTau) <= 1e-6) loop_src.insert(cls);
			};
			std::deque<UState> q{corner_root(s, c)};
			long budget = opt.budget;
			bfs_run(p, q, budget);
		}
	}

	using Key = std::tuple<int, int, long long, std::vector<int>>;
	std::map<Key, Connection> ded;
	auto offer = [&](Connection&& cn) {
		Key k{std::min(cn.from_class, cn.to_class), std::max(cn.from_class, cn.to_class),
		      std::llround(cn.length * 1e8), cn.word};
		ded.try_emplace(std::move(k), std::move(cn));
	};

	const double ea = global_tolerance().angle;
	for (const Cand& cd : cands) {
		double theta = s.corner_angle_at(cd.corner);
		if (cd.psi <= 2 * ea || cd.psi >= theta - 2 * ea) continue; // edge phase owns these
		if (std::fabs(cd.t - M_PI) <= 1e-9) continue;
		TraceOptions topt;
		topt.max_len = cd.t + 1e-6;
		TracePath tr = trace_from_corner(s, cd.corner, cd.psi, topt);
		if (tr.stop != TraceStop::Singularity) continue;
		if (std::fabs(tr.length - cd.t) > 1e-9 * (1 + cd.t)) continue;
		if (tr.end_class != cd.to) continue;
		Connection cn;
		cn.from_class = cd.from;
		cn.to_class = cd.to;
		cn.length = tr.length;
		cn.corner = cd.corner;
		cn.angle = cd.psi;
		cn.along_edges = false;
		cn.on_boundary = false;
		cn.word = word_of(s, tr);
		cn.path = std::move(tr);
		offer(std::move(cn));
	}

	for (int cls : scls) {
		for (const EdgeStart& es : edge_starts(s, cls)) {
			TraceOptions topt;
			topt.max_len = opt.max_len;
			TracePath tr = trace_along_edge(s, es.e, es.rev, topt);
			if (tr.stop != TraceStop::Singularity) continue;
			double L = tr.length;
			if (L <= 1e-9) continue;
			if (std::fabs(L - M_PI) <= 1e-9) {
				pi_src.insert(cls);
				continue;
			}
			if (std::fabs(L - kTau) <= 1e-9 && tr.end_class == cls) {
				loop_src.insert(cls);
				continue;
			}
			Connection cn;
			cn.from_class = cls;
			cn.to_class = tr.end_class;
			cn.length = L;
			cn.corner = es.corner;
			cn.angle = es.angle;
			cn.along_edges = true;
			cn.on_boundary = all_boundary(s, tr);
			cn.word = word_of(s, tr);
			cn.path = std::move(tr);
			offer(std::move(cn));
		}
	}

	for (auto& [k, cn] : ded) inv.connections.push_back(std::move(cn));
	std::sort(inv.connections.begin(), inv.connections.end(),
	          [](const Connection& a, const Connection& b) {
		          return std::tie(a.length, a.from_class, a.to_class, a.word) <
		                 std::tie(b.length, b.from_class, b.to_class, b.word);
	          });

	for (int cls : pi_src) inv.pi_families.push_back(sweep_family(s, cls, false, opt));
	for (int cls : loop_src) inv.loop_families.push_back(sweep_family(s, cls, true, opt));
	return inv;
}

namespace {

// Direction g (global fan angle) of a vertex class, resolved to either a
// transversal wedge direction or an edge of the fan.
struct FanLoc {
	bool along_edge = false;
	Corner corner{};
	double local = 0;
	EdgeRef e{};
	bool rev = false;
};

struct FanFrame {
	const Surface* s;
	int cls;
	std::vector<Corner> corners;
	std::vector<double> offs;
	double total = 0;
	bool boundary = false;

	FanFrame(const Surface& surf, int vclass) : s(&surf), cls(vclass) {
		corners = surf.class_corners(vclass);
		boundary = surf.class_boundary(vclass);
		double cum = 0;
		for (Corner c : corners) {
			offs.push_back(cum);
			cum += surf.corner_angle_at(c);
		}
		total = cum;
	}

	double fold(double g) const {
		if (boundary) return std::clamp(g, 0.0, total);
		g = std::fmod(g, total);
		if (g < 0) g += total;
		return g;
	}

	FanLoc locate(double g) const {
		g = fold(g);
		std::size_t i = 0;
		while (i + 1 < offs.size() && offs[i + 1] <= g + 1e-12) ++i;
		double local = g - offs[i];
		double theta = s->corner_angle_at(corners[i]);
		FanLoc l;
		l.corner = corners[i];
		if (local <= 1e-8) {
			l.along_edge = true;
			l.local = 0;
			l.e = EdgeRef{corners[i].face, corners[i].corner};
			l.rev = false;
		} else if (local >= theta - 1e-8) {
			l.along_edge = true;
			l.local = theta;
			l.e = EdgeRef{corners[i].face, (corners[i].corner + 2) % 3};
			l.rev = true;
		} else {
			l.local = local;
		}
		return l;
	}
};

bool near_vertex_of_class(const Surface& s, int face, const UnitVec& pt, int cls, double tol) {
	for (int k = 0; k < 3; ++k)
		if (s.vclass(face, k) == cls && arc_length(pt, s.vertex(face, k)) <= tol) return true;
	return false;
}

// Extremal side of a family digon: a straight trace that completes the turn
// at every singular vertex it meets on the family side.
TracePath side_trace(const Surface& s, const FanFrame& fan, double g, bool lo_side, double t0,
                     int expect_cls) {
	FanLoc l = fan.locate(g);
	TracePath best;
	bool have = false;
	for (int attempt = 0; attempt < 2; ++attempt) {
		bool ccw = (attempt == 0) ? lo_side : !lo_side;
		TraceOptions so;
		so.max_len = t0;
		so.singular = ccw ? SingularRule::ContinueCcw : SingularRule::ContinueCw;
		TracePath tr = l.along_edge ? trace_along_edge(s, l.e, l.rev, so)
		                            : trace_from_corner(s, l.corner, l.local, so);
		bool ok = all_boundary(s, tr) ||
		          (std::fabs(tr.length - t0) <= 1e-6 &&
		           near_vertex_of_class(s, tr.end_face, tr.end_point, expect_cls, 1e-6));
		if (!have) {
			best = tr;
			have = true;
		}
		if (ok) return tr;
	}
	return best;
}

} // namespace

GeodesicFamily sweep_family(const Surface& s, int vclass, bool full_turn,
                            const SearchOptions& opt) {
	if (vclass < 0 || vclass >= s.num_classes())
		fail(Errc::InvalidParameter, "vertex class out of range");
	GeodesicFamily fam;
	fam.source_class = vclass;
	fam.full_turn = full_turn;
	FanFrame fan(s, vclass);
	double t0 = full_turn ? kTau : M_PI;

	struct Iv {
		double lo, hi;
		int cls;
	};
	std::vector<Iv> ivs;
	std::vector<double> breaks; // directions whose arc breaks before t0

	for (std::size_t i = 0; i < fan.corners.size(); ++i) {
		Probe p = corner_probe(s, fan.corners[i], t0 + 1e-6);
		auto hook = [&, i](int tcls, double t, const UState& st) {
			if (std::fabs(t - t0) > 1e-6) return;
			if (full_turn && tcls != vclass) return;
			if (!full_turn && !s.class_singular(tcls)) return;
			ivs.push_back({fan.offs[i] + st.lo, fan.offs[i] + st.hi, tcls});
		};
		if (full_turn)
			p.on_return = hook;
		else
			p.on_antipode = hook;
		p.on_vertex = [&, i](int, double t, double psi, const UState&) {
			if (t < t0 - 1e-9) breaks.push_back(fan.offs[i] + psi);
		};
		std::deque<UState> q{corner_root(s, fan.corners[i])};
		long budget = opt.budget;
		bfs_run(p, q, budget);
	}
	// fan-edge directions whose straight continuation breaks early
	for (const EdgeStart& es : edge_starts(s, vclass)) {
		TraceOptions topt;
		topt.max_len = t0;
		TracePath tr = trace_along_edge(s, es.e, es.rev, topt);
		if (tr.stop == TraceStop::Singularity && tr.length < t0 - 1e-9) {
			auto it = std::find(fan.corners.begin(), fan.corners.end(), es.corner);
			breaks.push_back(fan.offs[it - fan.corners.begin()] + es.angle);
		}
	}
	if (ivs.empty()) return fam;

	std::sort(breaks.begin(), breaks.end());
	auto has_break_near = [&](double g) {
		for (double b : breaks) {
			double d = std::fabs(b - g);
			if (!fan.boundary) d = std::min(d, std::fabs(fan.total - d));
			if (d <= 1e-9) return true;
		}
		return false;
	};

	std::sort(ivs.begin(), ivs.end(), [](const Iv& a, const Iv& b) { return a.lo < b.lo; });
	std::vector<Iv> merged;
	for (const Iv& iv : ivs) {
		if (!merged.empty() && iv.lo <= merged.back().hi + 1e-9 &&
		    !has_break_near(0.5 * (merged.back().hi + iv.lo))) {
			merged.back().hi = std::max(merged.back().hi, iv.hi);
		} else {
			merged.push_back(iv);
		}
	}
	if (!fan.boundary && merged.size() >= 2 && merged.front().lo <= 1e-9 &&
	    merged.back().hi >= fan.total - 1e-9 && !has_break_near(0.0)) {
		merged.front().lo = merged.back().lo - fan.total;
		merged.pop_back();
	}

	double covered = 0;
	for (const Iv& iv : merged) covered += iv.hi - iv.lo;
	fam.closes_up = covered >= fan.total - 1e-6;

	for (const Iv& iv : merged) {
		FamilyDigon d;
		d.angle = iv.hi - iv.lo;
		d.antipode_class = full_turn ? vclass : iv.cls;
		d.contains_half_sphere = d.angle >= M_PI - 1e-9;

		double gmid = fan.fold(0.5 * (iv.lo + iv.hi));
		FanLoc lm = fan.locate(gmid);
		TraceOptions mo;
		mo.max_len = t0 + 1e-6;
		TracePath mid = lm.along_edge ? trace_along_edge(s, lm.e, lm.rev, mo)
		                              : trace_from_corner(s, lm.corner, lm.local, mo);
		if (mid.stop != TraceStop::Singularity || std::fabs(mid.length - t0) > 1e-6 ||
		    mid.end_class != d.antipode_class)
			continue; // refocus hit did not survive an authoritative trace
		d.mid = std::move(mid);
		d.mid_corner = lm.corner;
		d.mid_angle = lm.local;

		if (!fam.closes_up) {
			d.lo = side_trace(s, fan, iv.lo, true, t0, d.antipode_class);
			d.hi = side_trace(s, fan, iv.hi, false, t0, d.antipode_class);
			d.lo_on_boundary = all_boundary(s, d.lo);
			d.hi_on_boundary = all_boundary(s, d.hi);
		}
		fam.digons.push_back(std::move(d));
	}
	return fam;
}

VertexProbe probe_vertex(const Surface& s, int vclass, const SearchOptions& opt) {
	if (vclass < 0 || vclass >= s.num_classes())
		fail(Errc::InvalidParameter, "vertex class out of range");
	VertexProbe out;
	bool witness_set = false;
	double sup = 0;
	const double reach = M_PI + 1e-3;

	for (Corner c : s.class_corners(vclass)) {
		if (out.antipode_covered && witness_set) break;
		Probe p = corner_probe(s, c, reach);
		UnitVec anti = -p.v0;
		p.on_state = [&](const UState& st) {
			if (out.antipode_covered || st.t_floor > M_PI + 1e-9) return;
			const Surface::Face& F = s.face(st.face);
			UnitVec d0 = st.dev(F.v[0]), d1 = st.dev(F.v[1]), d2 = st.dev(F.v[2]);
			if (triple(d0, d1, anti) < -1e-9 || triple(d1, d2, anti) < -1e-9 ||
			    triple(d2, d0, anti) < -1e-9)
				return;
			out.antipode_covered = true;
			out.witness_corner = c;
			out.witness_angle = 0.5 * (st.lo + st.hi);
			witness_set = true;
		};
		p.on_antipode = [&](int, double t, const UState& st) {
			if (std::fabs(t - M_PI) > 1e-6 || out.antipode_covered) return;
			out.antipode_covered = true;
			out.witness_corner = c;
			out.witness_angle = 0.5 * (st.lo + st.hi);
			witness_set = true;
		};
		p.on_vertex = [&](int, double t, double, const UState&) {
			if (t <= M_PI) sup = std::max(sup, t);
		};
		p.on_boundary = [&](const UState& st, EdgeRef e, const UnitVec& ya, const UnitVec& yb) {
			double m = std::max(arc_length(p.v0, ya), arc_length(p.v0, yb));
			UnitVec A = st.dev(s.edge_start(e));
			UnitVec B = st.dev(s.edge_end(e));
			Vec3 q = cross(A, B);
			double qn = norm(q);
			// farthest point of the exit segment: either an endpoint or the
			// far foot of the carrying circle (when v0 is the circle's pole
			// the whole circle sits at pi/2 and the endpoints already cover it)
			Vec3 ip = qn > 1e-13 ? p.v0 - dot(p.v0, q / qn) * (q / qn) : Vec3{};
			double n = norm(ip);
			if (n > 1e-12) {
				UnitVec far = ip * (-1.0 / n);
				if (arc_length(ya, far) + arc_length(far, yb) <= arc_length(ya, yb) + 1e-9)
					m = std::max(m, arc_length(p.v0, far));
			}
			sup = std::max(sup, m);
		};
		std::deque<UState> q{corner_root(s, c)};
		long budget = opt.budget;
		bfs_run(p, q, budget);
	}

	for (const EdgeStart& es : edge_starts(s, vclass)) {
		TraceOptions topt;
		topt.max_len = reach;
		TracePath tr = trace_along_edge(s, es.e, es.rev, topt);
		if (tr.length >= M_PI - 1e-9) {
			if (!out.antipode_covered) {
				out.antipode_covered = true;
				out.witness_corner = es.corner;
				out.witness_angle = es.angle;
			}
		} else {
			sup = std::max(sup, tr.length);
		}
	}

	out.sup_exit = out.antipode_covered ? M_PI : sup;
	return out;
}

std::optional<double> distance_to_singular(const Surface& s, int face, const UnitVec& point,
                                           double cutoff, const SearchOptions& opt) {
	if (face < 0 || face >= s.num_faces()) fail(Errc::InvalidParameter, "face index out of range");
	if (!detail::point_in_face(s, face, point, 1e-9))
		fail(Errc::InvalidParameter, "probe point outside its face");
	double best = std::numeric_limits<double>::infinity();
	for (int k = 0; k < 3; ++k)
		if (s.class_singular(s.vclass(face, k)))
			best = std::min(best, arc_length(point, s.vertex(face, k)));
	Probe p = point_probe(s, point, cutoff);
	p.on_vertex = [&](int, double t, double, const UState&) { best = std::min(best, t); };
	p.on_antipode = [&](int cls, double t, const UState&) {
		if (s.class_singular(cls)) best = std::min(best, t);
	};
	std::deque<UState> q = point_roots(p, face);
	long budget = opt.budget;
	bfs_run(p, q, budget);
	if (best <= cutoff + 1e-12) return best;
	return std::nullopt;
}

std::optional<double> shortest_loop_at(const Surface& s, int face, const UnitVec& point,
                                       double cutoff, const SearchOptions& opt) {
	if (face < 0 || face >= s.num_faces()) fail(Errc::InvalidParameter, "face index out of range");
	if (!detail::point_in_face(s, face, point, 1e-9))
		fail(Errc::InvalidParameter, "probe point outside its face");
	Probe p = point_probe(s, point, cutoff);
	std::vector<std::pair<double, double>> cands; // (psi, t)
	p.on_state = [&](const UState& st) {
		if (st.face != face) return;
		UnitVec X = st.dev(point); // this chain's copy of the base point
		if (arc_length(X, p.v0) <= 1e-9 || arc_length(X, -p.v0) <= 1e-9) return;
		auto r = resolve_ray(p, st, X);
		if (r && r->second > 1e-9 && r->second <= cutoff + 1e-6)
			cands.push_back({r->first, r->second});
	};
	std::deque<UState> q = point_roots(p, face);
	long budget = opt.budget;
	bfs_run(p, q, budget);

	std::sort(cands.begin(), cands.end(),
	          [](const auto& a, const auto& b) { return a.second < b.second; });
	for (const auto& [psi, t] : cands) {
		TraceOptions topt;
		topt.max_len = t;
		TracePath tr = trace_from_point(s, face, point, ray_dir(p, psi), topt);
		if (tr.stop == TraceStop::Budget && tr.end_face == face &&
		    arc_length(tr.end_point, point) <= 1e-7)
			return t;
	}
	return std::nullopt;
}

} // namespace spherical
