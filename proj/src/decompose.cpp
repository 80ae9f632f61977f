#include "spherical/decompose.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <vector>

#include "polygon.hpp"
#include "spherical/errors.hpp"
#include "spherical/geodesics.hpp"
#include "spherical/trig.hpp"

namespace spherical {

namespace {

struct Pipeline {
	SearchOptions opt;
	long cuts_left = 0;
	Decomposition out;

	void record(int from, int to, double length, std::vector<int> word = {}) {
		out.arcs.push_back({from, to, length, std::move(word)});
	}

	std::vector<Surface> take_cut(const Surface& s, const TracePath& path) {
		if (--cuts_left < 0) fail(Errc::BudgetExceeded, "decomposition cut budget exhausted");
		return cut(s, path);
	}

	void process(const Surface& s);
	bool connect_components(const Surface& s);
	bool open_handles(const Surface& s);
	bool peel_loops(const Surface& s);
	bool split_polygon(const Surface& s);
	void emit(const Surface& s, Classification cl);
	void emit_foliated(const Surface& s, double beta);
};

// Search caps for the staged enumerations: short arcs dominate, so start
// small and widen only when nothing shows up.
std::array<double, 4> search_caps(const SearchOptions& opt) {
	double top = std::max(opt.max_len, 4 * M_PI);
	return {std::min(M_PI / 2, top), std::min(M_PI, top), std::min(2 * M_PI, top), top};
}

void Pipeline::process(const Surface& s) {
	if (connect_components(s)) return;
	if (open_handles(s)) return;
	if (peel_loops(s)) return;
	if (split_polygon(s)) return;
	Classification cl = classify_irreducible(s, opt);
	if (cl.tag == PieceTag::ReduciblePolygon) {
		// the staged search declined but the classifier still found a join
		if (cl.witness) {
			record(cl.witness->from_class, cl.witness->to_class, cl.witness->length,
			       cl.witness->word);
			for (const Surface& p : take_cut(s, cl.witness->path)) process(p);
			return;
		}
		const GeodesicFamily& f = *cl.family_witness;
		const FamilyDigon& d = f.digons.at(0);
		record(f.source_class, d.mid.end_class, d.mid.length);
		for (const Surface& p : take_cut(s, d.mid)) process(p);
		return;
	}
	emit(s, std::move(cl));
}

bool Pipeline::connect_components(const Surface& s) {
	auto comps = s.singular_components();
	int nc = static_cast<int>(comps.size());
	if (nc < 2) return false;
	std::vector<int> comp_of(s.num_classes(), -1);
	for (int i = 0; i < nc; ++i)
		for (int c : comps[i]) comp_of[c] = i;
	auto crossing = [&](int a, int b) { return comp_of[a] >= 0 && comp_of[a] != comp_of[b]; };

	for (double cap : search_caps(opt)) {
		SearchOptions o = opt;
		o.max_len = cap;
		Inventory inv = enumerate_connections(s, o);
		for (const Connection& c : inv.connections) {
			if (!crossing(c.from_class, c.to_class)) continue;
			if (c.length >= M_PI - 1e-9) break; // a family join at pi wins below
			record(c.from_class, c.to_class, c.length, c.word);
			for (const Surface& p : take_cut(s, c.path)) process(p);
			return true;
		}
		for (const GeodesicFamily& f : inv.pi_families)
			for (const FamilyDigon& d : f.digons) {
				if (!crossing(f.source_class, d.antipode_class)) continue;
				record(f.source_class, d.antipode_class, M_PI);
				for (const Surface& p : take_cut(s, d.mid)) process(p);
				return true;
			}
		for (const Connection& c : inv.connections) {
			if (!crossing(c.from_class, c.to_class)) continue;
			record(c.from_class, c.to_class, c.length, c.word);
			for (const Surface& p : take_cut(s, c.path)) process(p);
			return true;
		}
	}
	fail(Errc::GeometryError, "singular components stay apart at the search cap");
}

bool Pipeline::open_handles(const Surface& s) {
	if (s.genus() == 0) return false;
	for (double cap : search_caps(opt)) {
		SearchOptions o = opt;
		o.max_len = cap;
		Inventory inv = enumerate_connections(s, o);
		for (const Connection& c : inv.connections) {
			if (c.from_class != c.to_class) continue; // only loops touch the genus
			std::vector<Surface> pieces;
			try {
				pieces = cut(s, c.path);
			} catch (const Error&) {
				continue;
			}
			int worst = 0;
			for (const Surface& p : pieces) worst = std::max(worst, p.genus());
			if (worst >= s.genus()) continue;
			if (--cuts_left < 0)
				fail(Errc::BudgetExceeded, "decomposition cut budget exhausted");
			record(c.from_class, c.to_class, c.length, c.word);
			for (const Surface& p : pieces) process(p);
			return true;
		}
	}
	fail(Errc::GeometryError, "no loop opens the handle within the search cap");
}

bool Pipeline::peel_loops(const Surface& s) {
	for (int c = 0; c < s.num_classes(); ++c) {
		if (!s.class_singular(c)) continue;
		GeodesicFamily fam = sweep_family(s, c, true, opt);
		for (const FamilyDigon& d : fam.digons) {
			if (d.mid.steps.empty()) continue;
			std::vector<Surface> pieces;
			try {
				pieces = take_cut(s, d.mid);
			} catch (const Error& e) {
				if (e.code() == Errc::BudgetExceeded) throw;
				continue;
			}
			record(c, c, d.mid.length);
			for (const Surface& p : pieces) process(p);
			return true;
		}
	}
	return false;
}

bool Pipeline::split_polygon(const Surface& s) {
	if (!is_polygon(s)) return false;
	auto cyc = singular_cycle(s);
	int n = static_cast<int>(cyc.size());
	std::set<std::pair<int, int>> adjacent;
	for (int i = 0; i < n; ++i) {
		int u = cyc[i].vclass, v = cyc[(i + 1) % n].vclass;
		adjacent.insert(std::minmax(u, v));
	}

	Inventory inv = enumerate_connections(s, opt);
	auto try_cut = [&](const Connection& c) {
		std::vector<Surface> pieces;
		try {
			pieces = take_cut(s, c.path);
		} catch (const Error& e) {
			if (e.code() == Errc::BudgetExceeded) throw;
			return false;
		}
		record(c.from_class, c.to_class, c.length, c.word);
		for (const Surface& p : pieces) process(p);
		return true;
	};
	// diagonals between nonconsecutive vertices first, shortest first
	for (const Connection& c : inv.connections) {
		if (c.on_boundary || c.from_class == c.to_class) continue;
		if (adjacent.count(std::minmax(c.from_class, c.to_class))) continue;
		if (try_cut(c)) return true;
	}
	// then joins of consecutive vertices, which peel off fat digons
	for (const Connection& c : inv.connections) {
		if (c.on_boundary) continue;
		if (try_cut(c)) return true;
	}
	// finally the pi families
	for (const GeodesicFamily& fam : inv.pi_families) {
		if (fam.digons.empty()) continue;
		int src = fam.source_class;
		if (fam.closes_up && n == 2) {
			double beta = s.class_angle(src);
			// flagged flat vertices per boundary side of the 2-gon
			std::array<bool, 2> marked{false, false};
			const auto& walk = s.boundary_walks()[0];
			int nw = static_cast<int>(walk.size());
			int at = 0;
			while (walk[at] != cyc[0].side_edge) ++at;
			int side = 0;
			for (int i = 1; i < nw; ++i) {
				EdgeRef e = walk[(at + i) % nw];
				int cl = s.vclass(e.face, e.edge);
				if (cl == cyc[1].vclass)
					side = 1;
				else if (s.class_flagged(cl) && std::fabs(s.class_angle(cl) - M_PI) <= 1e-9)
					marked[side] = true;
			}
			if (std::fabs(cyc[1].angle - beta) <= 1e-6 &&
			    std::fabs(s.area() - 2 * beta) <= 1e-6 && !(marked[0] && marked[1])) {
				emit_foliated(s, beta);
				return true;
			}
			const FamilyDigon& d = fam.digons[0];
			record(src, d.antipode_class, M_PI);
			for (const Surface& p : take_cut(s, d.mid)) process(p);
			return true;
		}
		for (const FamilyDigon& d : fam.digons) {
			const TracePath* side = nullptr;
			if (!d.lo_on_boundary && !d.lo.steps.empty())
				side = &d.lo;
			else if (!d.hi_on_boundary && !d.hi.steps.empty())
				side = &d.hi;
			else if (fam.closes_up && !d.mid.steps.empty())
				side = &d.mid;
			if (!side) continue;
			std::vector<Surface> pieces;
			try {
				pieces = take_cut(s, *side);
			} catch (const Error& e) {
				if (e.code() == Errc::BudgetExceeded) throw;
				continue;
			}
			record(src, side->end_class, side->length);
			for (const Surface& p : pieces) process(p);
			return true;
		}
	}
	return false;
}

void Pipeline::emit(const Surface& s, Classification cl) {
	Piece p;
	p.tag = cl.tag;
	p.geometry = s;
	p.angles = std::move(cl.angles);
	p.vertex_types = std::move(cl.vertex_types);
	for (int c = 0; c < s.num_classes(); ++c)
		if (s.class_flagged(c)) p.marks.push_back(c);
	out.pieces.push_back(std::move(p));
}

void Pipeline::emit_foliated(const Surface& s, double beta) {
	auto cyc = singular_cycle(s);
	Piece p;
	p.tag = PieceTag::FoliatedDigon;
	p.geometry = s;
	p.digon_angle = beta;
	for (const CycleVertex& v : cyc) {
		p.angles.push_back(v.angle);
		p.vertex_types.push_back(classify_vertex(s, v.vclass, opt));
	}
	for (int c = 0; c < s.num_classes(); ++c)
		if (s.class_flagged(c)) p.marks.push_back(c);
	out.pieces.push_back(std::move(p));
}

} // namespace

Decomposition decompose(const Surface& s, const SearchOptions& opt) {
	bool any = false;
	for (int c = 0; c < s.num_classes() && !any; ++c) any = s.class_singular(c);
	if (!any) fail(Errc::InvalidParameter, "surface carries no singular vertex");
	Pipeline pl;
	pl.opt = opt;
	pl.cuts_left = 64 + 8L * s.num_faces();
	pl.process(s);
	return std::move(pl.out);
}

} // namespace spherical
