#pragma once

#include <span>

#include "spherical/surface.hpp"

namespace spherical {

// Single triangle with the given interior angles (each in (0, pi), angle sum
// exceeding pi).  All three vertices are marked singular.
Surface build_triangle(double alpha, double beta, double gamma);

// Closed upper half sphere with marked boundary points at the given equator
// longitudes.  At least one mark is required (a smooth circle boundary has no
// vertex to hang a mesh on); antipodal mark pairs are rejected because the
// boundary of a half sphere through two antipodal points is not determined by
// them.
Surface build_half_sphere(std::span<const double> mark_longitudes);

// Digon with both sides of length pi, vertex angle alpha*pi at each end, and
// interior foliated by arcs joining the two ends.  Optional marks sit on the
// first side at the given arc distances from the north vertex, in (0, pi).
Surface build_foliated_digon(double alpha, std::span<const double> marks = {});

// Closed sphere with two antipodal cone points of angle 2*pi*alpha.
Surface build_singular_sphere(double alpha);

// Round sphere cut open along an equator arc of the given length in (0, pi).
// The two slit endpoints are marked.
Surface build_slit_sphere(double slit_length);

// Necklace of m round spheres, each slit to the given length and glued slit
// to slit in a cycle.  Monodromy is trivial; the two shared endpoints become
// cone points of angle 2*pi*m.  With m = 1 this is a round sphere with two
// marked points at distance slit_length.
Surface build_pearl_row(int m, double slit_length);

// Round sphere with a single marked point.
Surface build_marked_sphere();

// Torus glued from a centrally symmetric spherical square (vertices at the
// given colatitude, longitudes 0, pi/2, pi, 3pi/2) by identifying opposite
// sides.  One cone point of angle 2*pi plus the square's area.
Surface build_quad_torus(double colatitude = 1.0);

// Torus glued the same way from the complement of that square, triangulated
// as a fan from the south pole.  One cone point of angle 6*pi minus the
// square's area.
Surface build_quad_complement_torus(double colatitude = 1.0);

// Complement-square torus with a chain of pearls spliced into one of the two
// side gluings: each pearl is a round sphere slit to the side length, and the
// chain replaces the direct identification of the side pair.  The cone class
// stays single; its angle grows by 4*pi per pearl, so two pearls already push
// it past 10*pi.
Surface build_pearl_torus(int pearls, double colatitude = 1.0);

// Random star shaped polygon with the given number of sides, triangulated as
// a fan from its center.  Deterministic in the seed.  All boundary vertices
// are marked singular.
Surface build_random_polygon(int sides, unsigned seed);

// Closed upper half sphere with a notch: the equator arc between longitude 0
// and longitude gap (0 < gap < pi) is replaced by two chords dipping to a
// vertex at the given colatitude above the equator midpoint.  The notch
// vertex is reflex, the two equator vertices are convex, and the remaining
// equator side is longer than pi.
Surface build_hemisphere_notch(double gap = 1.0, double notch_colatitude = 0.7);

} // namespace spherical
