#include "spherical/builders.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "spherical/errors.hpp"
#include "spherical/mesh_ops.hpp"
#include "spherical/tolerance.hpp"
#include "spherical/trig.hpp"

namespace spherical {

namespace {

constexpr double kPi = M_PI;

UnitVec on_sphere(double colat, double lon) {
	return {std::sin(colat) * std::cos(lon), std::sin(colat) * std::sin(lon), std::cos(colat)};
}

// Fan of faces (apex, E_i, E_i+1) over one chart.  Returns face count.
void append_fan(Surface::BuildData& data, const UnitVec& apex, const std::vector<UnitVec>& rim) {
	for (std::size_t i = 0; i + 1 < rim.size(); ++i)
		data.faces.push_back({{apex, rim[i], rim[i + 1]}});
}

} // namespace

Surface build_triangle(double alpha, double beta, double gamma) {
	auto sides = triangle_from_angles(alpha, beta, gamma);
	UnitVec a{0, 0, 1};
	UnitVec to_b{1, 0, 0};
	UnitVec b = geodesic_point(a, to_b, sides[2]);
	UnitVec c = geodesic_point(a, rotate_tangent(a, to_b, alpha), sides[1]);
	Surface::BuildData data;
	data.faces.push_back({{a, b, c}});
	data.marked = {{0, 0}, {0, 1}, {0, 2}};
	return Surface::build(std::move(data));
}

Surface build_half_sphere(std::span<const double> mark_longitudes) {
	const Tolerance& tol = global_tolerance();
	if (mark_longitudes.empty()) fail(Errc::InvalidParameter, "need at least one boundary mark");
	std::vector<double> marks(mark_longitudes.begin(), mark_longitudes.end());
	for (double& m : marks) {
		m = std::fmod(m, 2 * kPi);
		if (m < 0) m += 2 * kPi;
	}
	std::sort(marks.begin(), marks.end());
	for (std::size_t i = 0; i < marks.size(); ++i) {
		for (std::size_t j = i + 1; j < marks.size(); ++j) {
			double d = marks[j] - marks[i];
			if (d <= tol.angle || 2 * kPi - d <= tol.angle)
				fail(Errc::InvalidParameter, "duplicate boundary marks");
			if (std::fabs(d - kPi) <= tol.angle)
				fail(Errc::AntipodalMarks, "antipodal marks do not pin down the boundary circle");
		}
	}

	// equator points: marks plus fill so every gap is at most a quarter turn
	std::vector<double> lons;
	std::vector<char> is_mark;
	for (std::size_t i = 0; i < marks.size(); ++i) {
		double lo = marks[i];
		double hi = (i + 1 < marks.size()) ? marks[i + 1] : marks[0] + 2 * kPi;
		double gap = hi - lo;
		int pieces = std::max(1, static_cast<int>(std::ceil(gap / (kPi / 2))));
		for (int j = 0; j < pieces; ++j) {
			lons.push_back(lo + gap * j / pieces);
			is_mark.push_back(j == 0);
		}
	}

	int n = static_cast<int>(lons.size());
	UnitVec north{0, 0, 1};
	Surface::BuildData data;
	std::vector<UnitVec> rim;
	for (double l : lons) rim.push_back(on_sphere(kPi / 2, l));
	rim.push_back(rim[0]);
	append_fan(data, north, rim);
	for (int i = 0; i < n; ++i) data.gluings.push_back({EdgeRef{i, 2}, EdgeRef{(i + 1) % n, 0}});
	for (int i = 0; i < n; ++i)
		if (is_mark[i]) data.marked.push_back({i, 1});
	return Surface::build(std::move(data));
}

namespace {

// Common lune strip for digons and spheres of revolution: k lunes of width
// beta, each split along the equator, faces (up_i, low_i) = (2i, 2i+1).
Surface::BuildData lune_strip(int k, double beta) {
	UnitVec p{0, 0, 1}, q{0, 0, -1};
	UnitVec mlo{1, 0, 0};
	UnitVec mhi{std::cos(beta), std::sin(beta), 0};
	Surface::BuildData data;
	for (int i = 0; i < k; ++i) {
		data.faces.push_back({{p, mlo, mhi}});
		data.faces.push_back({{q, mhi, mlo}});
		data.gluings.push_back({EdgeRef{2 * i, 1}, EdgeRef{2 * i + 1, 1}});
	}
	for (int i = 0; i + 1 < k; ++i) {
		data.gluings.push_back({EdgeRef{2 * i, 2}, EdgeRef{2 * i + 2, 0}});
		data.gluings.push_back({EdgeRef{2 * i + 1, 0}, EdgeRef{2 * i + 3, 2}});
	}
	data.marked = {{0, 0}, {1, 0}};
	return data;
}

} // namespace

Surface build_foliated_digon(double alpha, std::span<const double> marks) {
	const Tolerance& tol = global_tolerance();
	if (!(alpha > 0)) fail(Errc::InvalidParameter, "digon angle must be positive");
	double total = alpha * kPi;
	int k = std::max(2, static_cast<int>(std::ceil(total / (kPi / 2))));
	Surface s = Surface::build(lune_strip(k, total / k));

	if (marks.empty()) return s;
	std::vector<double> ms(marks.begin(), marks.end());
	std::sort(ms.begin(), ms.end());
	for (std::size_t i = 0; i < ms.size(); ++i) {
		if (!(ms[i] > tol.length && ms[i] < kPi - tol.length))
			fail(Errc::InvalidParameter, "mark position outside the open side");
		if (i > 0 && ms[i] - ms[i - 1] <= tol.length)
			fail(Errc::InvalidParameter, "duplicate marks");
	}
	// first side of the digon, from the north vertex down
	BoundaryRun run{{0, 0}, {1, 2}};
	for (double d : ms) {
		double cum = 0;
		bool placed = false;
		for (std::size_t j = 0; j < run.size() && !placed; ++j) {
			double next = cum + s.edge_length(run[j]);
			if (std::fabs(cum - d) <= tol.length && j > 0) {
				// mark falls on an existing subdivision vertex
				Surface::BuildData data = to_build_data(s);
				data.marked.push_back({run[j].face, run[j].edge});
				s = Surface::build(std::move(data));
				placed = true;
			} else if (d < next - tol.length) {
				SplitResult r = split_boundary_edge(s, run[j], (d - cum) / (next - cum), true);
				for (std::size_t j2 = 0; j2 < run.size(); ++j2)
					if (j2 != j && run[j2].face == run[j].face) run[j2] = r.edge_map[run[j2].edge];
				run[j] = r.first_half;
				run.insert(run.begin() + static_cast<std::ptrdiff_t>(j) + 1, r.second_half);
				s = std::move(r.surface);
				placed = true;
			}
			cum = next;
		}
		if (!placed) fail(Errc::Internal, "mark placement fell off the side");
	}
	return s;
}

Surface build_singular_sphere(double alpha) {
	if (!(alpha > 0)) fail(Errc::InvalidParameter, "cone parameter must be positive");
	double total = 2 * kPi * alpha;
	int k = std::max(3, static_cast<int>(std::ceil(total / (kPi / 2))));
	Surface::BuildData data = lune_strip(k, total / k);
	data.gluings.push_back({EdgeRef{2 * (k - 1), 2}, EdgeRef{0, 0}});
	data.gluings.push_back({EdgeRef{2 * (k - 1) + 1, 0}, EdgeRef{1, 2}});
	return Surface::build(std::move(data));
}

namespace {

// Sphere as north and south fans over a common equator polygon, with the
// first slit_pieces equator edges left unglued.  Face i is the north face
// over gap i; face n+i the south face.
Surface sphere_with_slit(const std::vector<double>& lons, int slit_pieces,
                         std::vector<Corner> marked) {
	int n = static_cast<int>(lons.size());
	Surface::BuildData data;
	std::vector<UnitVec> eq;
	for (double l : lons) eq.push_back(on_sphere(kPi / 2, l));
	for (int i = 0; i < n; ++i)
		data.faces.push_back({{UnitVec{0, 0, 1}, eq[i], eq[(i + 1) % n]}});
	for (int i = 0; i < n; ++i)
		data.faces.push_back({{UnitVec{0, 0, -1}, eq[(i + 1) % n], eq[i]}});
	for (int i = 0; i < n; ++i) {
		data.gluings.push_back({EdgeRef{i, 2}, EdgeRef{(i + 1) % n, 0}});
		data.gluings.push_back({EdgeRef{n + i, 0}, EdgeRef{n + (i + 1) % n, 2}});
		if (i >= slit_pieces) data.gluings.push_back({EdgeRef{i, 1}, EdgeRef{n + i, 1}});
	}
	data.marked = std::move(marked);
	return Surface::build(std::move(data));
}

std::vector<double> slit_equator(double slit_length, int& slit_pieces) {
	std::vector<double> lons;
	slit_pieces = std::max(1, static_cast<int>(std::ceil(slit_length / (kPi / 2))));
	for (int j = 0; j < slit_pieces; ++j) lons.push_back(slit_length * j / slit_pieces);
	double rest = 2 * kPi - slit_length;
	int pieces = std::max(1, static_cast<int>(std::ceil(rest / (kPi / 2))));
	for (int j = 0; j < pieces; ++j) lons.push_back(slit_length + rest * j / pieces);
	return lons;
}

} // namespace

Surface build_slit_sphere(double slit_length) {
	const Tolerance& tol = global_tolerance();
	if (!(slit_length > tol.length && slit_length < kPi - tol.length))
		fail(Errc::InvalidParameter, "slit length must lie in (0, pi)");
	int sp = 0;
	std::vector<double> lons = slit_equator(slit_length, sp);
	return sphere_with_slit(lons, sp, {{0, 1}, {sp, 1}});
}

Surface build_pearl_row(int m, double slit_length) {
	const Tolerance& tol = global_tolerance();
	if (m < 1) fail(Errc::InvalidParameter, "need at least one pearl");
	if (!(slit_length > tol.length && slit_length < kPi - tol.length))
		fail(Errc::InvalidParameter, "slit length must lie in (0, pi)");
	int sp = 0;
	std::vector<double> lons = slit_equator(slit_length, sp);
	int n = static_cast<int>(lons.size());
	Surface one = sphere_with_slit(lons, sp, {});
	Surface::BuildData base = to_build_data(one);

	Surface::BuildData data;
	int stride = 2 * n;
	for (int j = 0; j < m; ++j) {
		for (const auto& fc : base.faces) data.faces.push_back(fc);
		for (auto [ga, gb] : base.gluings)
			data.gluings.push_back(
			    {EdgeRef{ga.face + j * stride, ga.edge}, EdgeRef{gb.face + j * stride, gb.edge}});
	}
	// close the necklace: north slit side of pearl j onto south slit side of
	// pearl j+1; both run along the same equator arc, so charts already agree
	for (int j = 0; j < m; ++j) {
		int nj = ((j + 1) % m) * stride;
		for (int i = 0; i < sp; ++i)
			data.gluings.push_back({EdgeRef{j * stride + i, 1}, EdgeRef{nj + n + i, 1}});
	}
	data.marked = {{0, 1}, {sp, 1}};
	return Surface::build(std::move(data));
}

Surface build_marked_sphere() {
	std::vector<double> lons{0, kPi / 2, kPi, 3 * kPi / 2};
	return sphere_with_slit(lons, 0, {{0, 0}});
}

namespace {

std::array<UnitVec, 4> square_vertices(double colatitude) {
	if (!(colatitude > 0 && colatitude < kPi / 2))
		fail(Errc::InvalidParameter, "square colatitude must lie in (0, pi/2)");
	std::array<UnitVec, 4> v;
	for (int i = 0; i < 4; ++i) v[i] = on_sphere(colatitude, i * kPi / 2);
	return v;
}

} // namespace

Surface build_quad_torus(double colatitude) {
	auto v = square_vertices(colatitude);
	Surface::BuildData data;
	data.faces.push_back({{v[0], v[1], v[2]}});
	data.faces.push_back({{v[0], v[2], v[3]}});
	data.gluings.push_back({EdgeRef{0, 2}, EdgeRef{1, 0}}); // diagonal
	data.gluings.push_back({EdgeRef{0, 0}, EdgeRef{1, 1}}); // side 01 ~ side 23
	data.gluings.push_back({EdgeRef{0, 1}, EdgeRef{1, 2}}); // side 12 ~ side 30
	data.marked = {{0, 0}};
	return Surface::build(std::move(data));
}

Surface build_quad_complement_torus(double colatitude) {
	auto v = square_vertices(colatitude);
	UnitVec south{0, 0, -1};
	Surface::BuildData data;
	for (int i = 0; i < 4; ++i) data.faces.push_back({{v[(i + 1) % 4], v[i], south}});
	for (int i = 0; i < 4; ++i)
		data.gluings.push_back({EdgeRef{i, 1}, EdgeRef{(i + 3) % 4, 2}}); // meridians
	data.gluings.push_back({EdgeRef{0, 0}, EdgeRef{2, 0}});
	data.gluings.push_back({EdgeRef{1, 0}, EdgeRef{3, 0}});
	data.marked = {{0, 0}};
	return Surface::build(std::move(data));
}

Surface build_pearl_torus(int pearls, double colatitude) {
	if (pearls < 1) fail(Errc::InvalidParameter, "need at least one pearl");
	auto v = square_vertices(colatitude);
	double side = arc_length(v[0], v[1]); // < pi/2 for any valid colatitude
	UnitVec south{0, 0, -1};
	Surface::BuildData data;
	for (int i = 0; i < 4; ++i) data.faces.push_back({{v[(i + 1) % 4], v[i], south}});
	for (int i = 0; i < 4; ++i)
		data.gluings.push_back({EdgeRef{i, 1}, EdgeRef{(i + 3) % 4, 2}}); // meridians
	data.gluings.push_back({EdgeRef{1, 0}, EdgeRef{3, 0}});

	int sp = 0;
	std::vector<double> lons = slit_equator(side, sp);
	int n = static_cast<int>(lons.size());
	Surface::BuildData pearl = to_build_data(sphere_with_slit(lons, sp, {}));
	int stride = 2 * n;
	auto off = [&](int j) { return 4 + j * stride; };
	for (int j = 0; j < pearls; ++j) {
		for (const auto& fc : pearl.faces) data.faces.push_back(fc);
		for (auto [ga, gb] : pearl.gluings)
			data.gluings.push_back(
			    {EdgeRef{ga.face + off(j), ga.edge}, EdgeRef{gb.face + off(j), gb.edge}});
	}
	// splice the pearl chain into the first side pair; the second stays direct
	data.gluings.push_back({EdgeRef{0, 0}, EdgeRef{off(0) + n, 1}});
	for (int j = 0; j + 1 < pearls; ++j)
		data.gluings.push_back({EdgeRef{off(j), 1}, EdgeRef{off(j + 1) + n, 1}});
	data.gluings.push_back({EdgeRef{off(pearls - 1), 1}, EdgeRef{2, 0}});
	data.marked = {{0, 0}};
	return Surface::build(std::move(data));
}

Surface build_random_polygon(int sides, unsigned seed) {
	if (sides < 3 || sides > 12) fail(Errc::InvalidParameter, "side count outside [3, 12]");
	std::mt19937 gen(seed);
	auto uniform = [&](double lo, double hi) {
		return lo + (hi - lo) * (gen() * (1.0 / 4294967296.0));
	};
	for (int attempt = 0; attempt < 100; ++attempt) {
		std::vector<double> lons;
		for (int i = 0; i < sides; ++i) lons.push_back(uniform(0, 2 * kPi));
		std::sort(lons.begin(), lons.end());
		bool ok = true;
		for (int i = 0; i < sides; ++i) {
			double gap = (i + 1 < sides ? lons[i + 1] : lons[0] + 2 * kPi) - lons[i];
			ok = ok && gap > 0.25;
		}
		if (!ok) continue;
		Surface::BuildData data;
		for (int i = 0; i < sides; ++i) {
			double r0 = uniform(0.4, 1.1);
			data.faces.push_back({{UnitVec{0, 0, 1}, on_sphere(r0, lons[i]), UnitVec{}}});
		}
		for (int i = 0; i < sides; ++i) {
			data.faces[i].v[2] = data.faces[(i + 1) % sides].v[1];
			data.gluings.push_back({EdgeRef{i, 2}, EdgeRef{(i + 1) % sides, 0}});
			data.marked.push_back({i, 1});
		}
		try {
			return Surface::build(std::move(data));
		} catch (const Error&) {
			continue;
		}
	}
	fail(Errc::InvalidParameter, "could not realize a valid polygon for this seed");
}

Surface build_hemisphere_notch(double gap, double notch_colatitude) {
	if (!(gap > 0 && gap < kPi))
		fail(Errc::InvalidParameter, "notch gap must lie in (0, pi)");
	if (!(notch_colatitude > 0 && notch_colatitude < kPi / 2))
		fail(Errc::InvalidParameter, "notch colatitude must lie in (0, pi/2)");
	UnitVec north{0, 0, 1};
	UnitVec b = on_sphere(notch_colatitude, gap / 2);
	// rim: the surviving equator quarter-arcs, then the two notch chords
	std::vector<UnitVec> rim;
	for (int k = 0; k <= 4; ++k) rim.push_back(on_sphere(kPi / 2, gap + k * (2 * kPi - gap) / 4));
	rim.push_back(b);
	rim.push_back(rim[0]);
	Surface::BuildData data;
	append_fan(data, north, rim);
	int n = static_cast<int>(data.faces.size());
	for (int i = 0; i < n; ++i)
		data.gluings.push_back({EdgeRef{i, 2}, EdgeRef{(i + 1) % n, 0}}); // radials
	return Surface::build(std::move(data));
}

} // namespace spherical
