#include <algorithm>
#include <cmath>
#include <vector>

#include "polygon.hpp"
#include "spherical/errors.hpp"
#include "spherical/geodesics.hpp"
#include "spherical/trig.hpp"

namespace spherical {

namespace {

bool runs_on_boundary(const Surface& s, const TracePath& p) {
	if (p.steps.empty()) return false;
	for (const TraceStep& st : p.steps)
		if (!st.along_edge.valid() || !s.is_boundary(st.along_edge)) return false;
	return true;
}

} // namespace

double fan_coordinate(const Surface& s, int vclass, Corner c, double angle) {
	double off = 0;
	for (Corner k : s.class_corners(vclass)) {
		if (k == c) return off + angle;
		off += s.corner_angle_at(k);
	}
	fail(Errc::InvalidParameter, "corner does not belong to the vertex class");
}

Connector shortest_connector(const Surface& s, int component_a, int component_b,
                             const SearchOptions& opt) {
	auto comps = s.singular_components();
	int n = static_cast<int>(comps.size());
	if (component_a < 0 || component_b < 0 || component_a >= n || component_b >= n ||
	    component_a == component_b)
		fail(Errc::InvalidParameter, "need two distinct singular components");
	std::vector<int> comp_of(s.num_classes(), -1);
	for (int i = 0; i < n; ++i)
		for (int c : comps[i]) comp_of[c] = i;
	auto joins = [&](int from, int to) {
		return (comp_of[from] == component_a && comp_of[to] == component_b) ||
		       (comp_of[from] == component_b && comp_of[to] == component_a);
	};

	// grow the search length; most joins are short and a full sweep is dear
	for (double cap = std::min(M_PI / 2, opt.max_len);; cap = std::min(2 * cap, opt.max_len)) {
		SearchOptions o = opt;
		o.max_len = cap;
		Inventory inv = enumerate_connections(s, o);
		const Connection* best = nullptr;
		for (const Connection& c : inv.connections) {
			if (!joins(c.from_class, c.to_class)) continue;
			if (!best || c.length < best->length - 1e-12 ||
			    (c.length < best->length + 1e-12 && c.word < best->word))
				best = &c;
		}
		bool family = false;
		Connection rep;
		for (const GeodesicFamily& fam : inv.pi_families) {
			for (const FamilyDigon& d : fam.digons) {
				if (!joins(fam.source_class, d.antipode_class)) continue;
				if (best && best->length < M_PI - 1e-12) continue;
				if (family) continue; // keep the first family hit
				rep.from_class = fam.source_class;
				rep.to_class = d.antipode_class;
				rep.length = M_PI;
				rep.corner = d.mid_corner;
				rep.angle = d.mid_angle;
				rep.path = d.mid;
				family = true;
			}
			if (family) break;
		}
		if (family && (!best || best->length >= M_PI - 1e-12)) return {std::move(rep), true};
		if (best) return {*best, false};
		if (cap >= opt.max_len - 1e-12)
			fail(Errc::GeometryError, "components not joined within the search length");
	}
}

FamilyDigon extend_pi_family(const Surface& s, const Connection& generator,
                             const SearchOptions& opt) {
	if (std::fabs(generator.length - M_PI) > 1e-9)
		fail(Errc::NotPiLength, "family generators have length pi");
	int cls = generator.from_class;
	if (cls < 0 || cls >= s.num_classes())
		fail(Errc::InvalidParameter, "generator start class out of range");
	double total = s.class_angle(cls);
	bool interior = !s.class_boundary(cls);
	double psi = fan_coordinate(s, cls, generator.corner, generator.angle);

	GeodesicFamily fam = sweep_family(s, cls, false, opt);
	for (FamilyDigon& d : fam.digons) {
		double mid = fan_coordinate(s, cls, d.mid_corner, d.mid_angle);
		double lo = mid - d.angle / 2, hi = mid + d.angle / 2;
		auto inside = [&](double g) { return g >= lo - 1e-7 && g <= hi + 1e-7; };
		bool in = inside(psi);
		if (interior) in = in || inside(psi - total) || inside(psi + total);
		if (!in) continue;
		if (generator.to_class >= 0 && d.antipode_class != generator.to_class)
			fail(Errc::GeometryError, "generator endpoints disagree with the family");
		if (fam.closes_up && !interior) {
			// the whole wedge sweeps: the extremal arcs are the boundary sides
			Corner c0 = s.class_corners(cls).front();
			Corner c1 = s.class_corners(cls).back();
			TraceOptions topt;
			topt.max_len = M_PI + 1e-6;
			d.lo = trace_along_edge(s, EdgeRef{c0.face, c0.corner}, false, topt);
			d.hi = trace_along_edge(s, EdgeRef{c1.face, (c1.corner + 2) % 3}, true, topt);
			d.lo_on_boundary = runs_on_boundary(s, d.lo);
			d.hi_on_boundary = runs_on_boundary(s, d.hi);
		}
		return std::move(d);
	}
	fail(Errc::GeometryError, "generator does not lie in any family at its vertex");
}

} // namespace spherical
