#include "spherical/mesh_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "spherical/errors.hpp"
#include "spherical/tolerance.hpp"
#include "spherical/trig.hpp"

namespace spherical {

Surface::BuildData to_build_data(const Surface& s) {
	Surface::BuildData data;
	for (int f = 0; f < s.num_faces(); ++f)
		data.faces.push_back({{s.vertex(f, 0), s.vertex(f, 1), s.vertex(f, 2)}});
	for (int f = 0; f < s.num_faces(); ++f) {
		for (int k = 0; k < 3; ++k) {
			EdgeRef e{f, k};
			EdgeRef p = s.partner(e);
			if (p.valid() && e.id() < p.id()) data.gluings.push_back({e, p});
		}
	}
	data.marked = s.marked_corners();
	data.metadata = s.metadata();
	return data;
}

SplitResult split_boundary_edge(const Surface& s, EdgeRef e, double t, bool flag_new_vertex) {
	if (!e.valid() || e.face >= s.num_faces()) fail(Errc::InvalidParameter, "bad edge reference");
	if (s.partner(e).valid()) fail(Errc::InvalidParameter, "edge to split is glued");
	if (!(t > 0 && t < 1)) fail(Errc::InvalidParameter, "split fraction outside (0,1)");

	int f = e.face, k = e.edge;
	UnitVec a = s.edge_start(e), b = s.edge_end(e);
	UnitVec c = s.vertex(f, (k + 2) % 3);
	UnitVec x = geodesic_point(a, tangent_toward(a, b), t * s.edge_length(e));

	Surface::BuildData data = to_build_data(s);
	int nf = s.num_faces();
	data.faces[f] = {{a, x, c}};
	data.faces.push_back({{x, b, c}});

	std::array<EdgeRef, 3> emap;
	emap[k] = {f, 0};
	emap[(k + 1) % 3] = {nf, 1};
	emap[(k + 2) % 3] = {f, 2};
	auto remap_edge = [&](EdgeRef r) { return r.face == f ? emap[r.edge] : r; };
	for (auto& [ga, gb] : data.gluings) {
		ga = remap_edge(ga);
		gb = remap_edge(gb);
	}
	data.gluings.push_back({EdgeRef{f, 1}, EdgeRef{nf, 2}});

	std::array<Corner, 3> cmap = {Corner{f, 0}, Corner{nf, 1}, Corner{f, 2}};
	for (Corner& m : data.marked)
		if (m.face == f) m = cmap[(m.corner - k + 3) % 3];
	if (flag_new_vertex) data.marked.push_back({f, 1});

	SplitResult r;
	r.surface = Surface::build(std::move(data));
	r.edge_map = emap;
	r.first_half = {f, 0};
	r.second_half = {nf, 0};
	r.new_vertex = {f, 1};
	return r;
}

Surface mirrored(const Surface& s) {
	auto M = [](const UnitVec& v) { return UnitVec{v.x, -v.y, v.z}; };
	auto m = [](int k) { return (2 - k) % 3; }; // edge/corner slot after rewinding
	Surface::BuildData data;
	for (int f = 0; f < s.num_faces(); ++f)
		data.faces.push_back({{M(s.vertex(f, 0)), M(s.vertex(f, 2)), M(s.vertex(f, 1))}});
	for (int f = 0; f < s.num_faces(); ++f) {
		for (int k = 0; k < 3; ++k) {
			EdgeRef e{f, k};
			EdgeRef p = s.partner(e);
			if (p.valid() && e.id() < p.id())
				data.gluings.push_back({EdgeRef{e.face, m(e.edge)}, EdgeRef{p.face, m(p.edge)}});
		}
	}
	// corner at vertex j lands at slot 0->0, 1->2, 2->1
	for (Corner c : s.marked_corners()) data.marked.push_back({c.face, (3 - c.corner) % 3});
	data.metadata = s.metadata();
	return Surface::build(std::move(data));
}

namespace {

std::vector<double> run_breaks(const Surface& s, const BoundaryRun& run) {
	std::vector<double> cum{0.0};
	for (EdgeRef e : run) cum.push_back(cum.back() + s.edge_length(e));
	return cum;
}

void check_run(const Surface& s, const BoundaryRun& run) {
	if (run.empty()) fail(Errc::InvalidParameter, "empty boundary run");
	for (EdgeRef e : run)
		if (!e.valid() || e.face >= s.num_faces() || s.partner(e).valid())
			fail(Errc::InvalidParameter, "run edge is not a boundary edge");
	for (std::size_t i = 0; i + 1 < run.size(); ++i)
		if (s.next_boundary_edge(run[i]) != run[i + 1])
			fail(Errc::InvalidParameter, "run edges are not consecutive");
}

// Split run edges at the given arc-length positions, keeping every tracked
// run valid across face renumbering.
void refine_run(Surface& s, std::vector<BoundaryRun*> tracked, BoundaryRun& run,
                const std::vector<double>& targets) {
	const Tolerance& tol = global_tolerance();
	for (double pos : targets) {
		std::vector<double> cum = run_breaks(s, run);
		bool hit = false;
		for (double c : cum)
			if (std::fabs(c - pos) <= tol.length) hit = true;
		if (hit) continue;
		auto it = std::upper_bound(cum.begin(), cum.end(), pos);
		if (it == cum.begin() || it == cum.end()) fail(Errc::Internal, "split position outside run");
		std::size_t j = static_cast<std::size_t>(it - cum.begin()) - 1;
		double t = (pos - cum[j]) / (cum[j + 1] - cum[j]);
		SplitResult r = split_boundary_edge(s, run[j], t, false);
		for (BoundaryRun* tr : tracked) {
			for (EdgeRef& e : *tr) {
				if (e == run[j]) continue; // rewritten below if in this run
				if (e.face == run[j].face) e = r.edge_map[e.edge];
			}
		}
		run[j] = r.first_half;
		run.insert(run.begin() + static_cast<std::ptrdiff_t>(j) + 1, r.second_half);
		s = std::move(r.surface);
	}
}

} // namespace

Surface glue_along_boundary(const Surface& a, const BoundaryRun& run_a, const Surface& b,
                            const BoundaryRun& run_b) {
	const Tolerance& tol = global_tolerance();
	check_run(a, run_a);
	check_run(b, run_b);
	bool same = &a == &b;
	if (same) {
		std::set<int> ids;
		for (EdgeRef e : run_a) ids.insert(e.id());
		for (EdgeRef e : run_b)
			if (ids.count(e.id()))
				fail(Errc::OrientationMismatch, "runs overlap; an edge cannot be glued to itself");
	}

	std::vector<double> ca = run_breaks(a, run_a);
	std::vector<double> cb = run_breaks(b, run_b);
	double len = ca.back();
	if (std::fabs(len - cb.back()) > tol.length)
		fail(Errc::LengthMismatch, "boundary runs have different lengths");

	// Common subdivision: a-side positions plus b-side positions reflected
	// through the reversing identification t <-> len - t.
	std::vector<double> ta, tb;
	for (std::size_t j = 1; j + 1 < cb.size(); ++j) ta.push_back(len - cb[j]);
	for (std::size_t j = 1; j + 1 < ca.size(); ++j) tb.push_back(len - ca[j]);
	std::sort(ta.begin(), ta.end());
	std::sort(tb.begin(), tb.end());

	Surface wa = a;
	BoundaryRun ra = run_a;
	if (same) {
		BoundaryRun rb = run_b;
		refine_run(wa, {&ra, &rb}, ra, ta);
		refine_run(wa, {&ra, &rb}, rb, tb);
		Surface::BuildData data = to_build_data(wa);
		if (ra.size() != rb.size()) fail(Errc::Internal, "refined runs disagree");
		for (std::size_t i = 0; i < ra.size(); ++i)
			data.gluings.push_back({ra[i], rb[rb.size() - 1 - i]});
		return Surface::build(std::move(data));
	}

	Surface wb = b;
	BoundaryRun rb = run_b;
	refine_run(wa, {&ra}, ra, ta);
	refine_run(wb, {&rb}, rb, tb);
	if (ra.size() != rb.size()) fail(Errc::Internal, "refined runs disagree");

	Surface::BuildData data = to_build_data(wa);
	Surface::BuildData db = to_build_data(wb);
	int off = static_cast<int>(data.faces.size());
	for (auto& fc : db.faces) data.faces.push_back(fc);
	for (auto [ga, gb] : db.gluings)
		data.gluings.push_back({EdgeRef{ga.face + off, ga.edge}, EdgeRef{gb.face + off, gb.edge}});
	for (Corner c : db.marked) data.marked.push_back({c.face + off, c.corner});
	for (const auto& [k, v] : db.metadata) data.metadata.try_emplace(k, v);
	for (std::size_t i = 0; i < ra.size(); ++i) {
		EdgeRef other = rb[rb.size() - 1 - i];
		data.gluings.push_back({ra[i], EdgeRef{other.face + off, other.edge}});
	}
	return Surface::build(std::move(data));
}

std::vector<Surface> split_components(const Surface::BuildData& data) {
	int nf = static_cast<int>(data.faces.size());
	std::vector<int> parent(nf);
	std::iota(parent.begin(), parent.end(), 0);
	auto find = [&](int v) {
		while (parent[v] != v) v = parent[v] = parent[parent[v]];
		return v;
	};
	for (auto [ga, gb] : data.gluings) parent[find(ga.face)] = find(gb.face);

	std::vector<int> comp(nf, -1);
	int ncomp = 0;
	for (int f = 0; f < nf; ++f)
		if (find(f) == f) comp[f] = ncomp++;
	for (int f = 0; f < nf; ++f) comp[f] = comp[find(f)];

	std::vector<Surface::BuildData> parts(static_cast<std::size_t>(ncomp));
	std::vector<int> local(nf, -1);
	std::vector<int> count(static_cast<std::size_t>(ncomp), 0);
	for (int f = 0; f < nf; ++f) {
		local[f] = count[comp[f]]++;
		parts[comp[f]].faces.push_back(data.faces[f]);
	}
	for (auto [ga, gb] : data.gluings) {
		if (comp[ga.face] != comp[gb.face]) fail(Errc::Internal, "gluing spans components");
		parts[comp[ga.face]].gluings.push_back(
		    {EdgeRef{local[ga.face], ga.edge}, EdgeRef{local[gb.face], gb.edge}});
	}
	for (Corner c : data.marked) parts[comp[c.face]].marked.push_back({local[c.face], c.corner});
	for (auto& p : parts) p.metadata = data.metadata;

	std::vector<Surface> out;
	for (auto& p : parts) out.push_back(Surface::build(std::move(p)));
	return out;
}

} // namespace spherical
