#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "spherical/rotation.hpp"
#include "spherical/tolerance.hpp"
#include "spherical/vec3.hpp"

namespace spherical {

// Edge slot k of a face runs from vertex k to vertex (k+1)%3.
struct EdgeRef {
	int face = -1;
	int edge = -1;

	bool valid() const { return face >= 0; }
	int id() const { return face * 3 + edge; }
	friend bool operator==(const EdgeRef&, const EdgeRef&) = default;
	friend auto operator<=>(const EdgeRef&, const EdgeRef&) = default;
};

struct Corner {
	int face = -1;
	int corner = -1;

	int id() const { return face * 3 + corner; }
	friend bool operator==(const Corner&, const Corner&) = default;
	friend auto operator<=>(const Corner&, const Corner&) = default;
};

// Compact surface of curvature +1 built from strictly convex spherical
// triangles, each carrying its own chart on the round sphere.  Gluings
// identify edge pairs with a rotation taking the partner's chart into this
// face's chart (edge endpoints swap, so orientations are compatible).
// Combinatorial structure (vertex classes, boundary walks, topology) is
// derived from the gluing table at construction.
class Surface {
public:
	struct Face {
		std::array<UnitVec, 3> v;
	};

	struct BuildData {
		std::vector<Face> faces;
		std::vector<std::pair<EdgeRef, EdgeRef>> gluings;
		std::vector<Corner> marked;
		std::map<std::string, std::string> metadata;
	};

	static Surface build(BuildData data);

	// faces and edges
	int num_faces() const { return static_cast<int>(faces_.size()); }
	const Face& face(int f) const { return faces_[f]; }
	const UnitVec& vertex(int f, int k) const { return faces_[f].v[k]; }
	const UnitVec& edge_start(EdgeRef e) const { return faces_[e.face].v[e.edge]; }
	const UnitVec& edge_end(EdgeRef e) const { return faces_[e.face].v[(e.edge + 1) % 3]; }
	double edge_length(EdgeRef e) const;
	double corner_angle_at(Corner c) const;
	double face_area(int f) const;
	double area() const;

	EdgeRef partner(EdgeRef e) const { return partner_[e.id()]; }
	bool is_boundary(EdgeRef e) const { return !partner_[e.id()].valid(); }
	// Chart map from partner(e)'s face into e's face.
	const Rotation& transition(EdgeRef e) const { return trans_[e.id()]; }

	// vertex classes
	int num_classes() const { return static_cast<int>(classes_.size()); }
	int vclass(Corner c) const { return corner_class_[c.id()]; }
	int vclass(int f, int k) const { return corner_class_[f * 3 + k]; }
	// Corners in counterclockwise fan order around the vertex; for boundary
	// classes the fan starts at the corner whose outgoing edge is boundary.
	const std::vector<Corner>& class_corners(int c) const { return classes_[c].corners; }
	double class_angle(int c) const { return classes_[c].angle; }
	bool class_boundary(int c) const { return classes_[c].boundary; }
	bool class_flagged(int c) const { return classes_[c].flagged; }
	// A vertex is singular when flagged, or when its total angle deviates
	// from 2*pi (interior) / pi (boundary).
	bool class_singular(int c) const { return classes_[c].singular; }
	bool class_removable(int c) const { return classes_[c].removable; }

	struct ConePoint {
		int vclass;
		double angle;
		bool boundary;
		bool flagged;
		bool removable; // interior 2*pi or boundary pi within tolerance
	};
	// All singular vertex classes.  With normalize=true, flags on removable
	// vertices are ignored and only true angle deviations are reported.
	std::vector<ConePoint> cone_points(bool normalize = false) const;

	// boundary
	const std::vector<std::vector<EdgeRef>>& boundary_walks() const { return walks_; }

	// topology
	int num_edge_classes() const { return num_edges_; }
	int euler_characteristic() const { return chi_; }
	int genus() const { return genus_; }
	int num_boundary_components() const { return static_cast<int>(walks_.size()); }
	bool closed() const { return walks_.empty(); }

	double gauss_bonnet_residual() const;

	// Components of the singular locus (conical singularities together with
	// the boundary): one group per boundary walk plus one singleton per
	// interior singular class.  Each group lists its vertex classes.
	std::vector<std::vector<int>> singular_components() const;

	// fan steps around a vertex; invalid when the crossing edge is boundary
	Corner next_corner_ccw(Corner c) const;
	Corner next_corner_cw(Corner c) const;

	// successor of a boundary edge along its walk (surface on the left)
	EdgeRef next_boundary_edge(EdgeRef e) const;

	const std::map<std::string, std::string>& metadata() const { return metadata_; }
	const std::vector<Corner>& marked_corners() const { return marked_list_; }

private:
	struct ClassInfo {
		std::vector<Corner> corners;
		double angle = 0;
		bool boundary = false;
		bool flagged = false;
		bool singular = false;
		bool removable = false;
	};

	void derive();
	void validate() const;

	std::vector<Face> faces_;
	std::vector<EdgeRef> partner_;
	std::vector<Rotation> trans_;
	std::vector<bool> marked_;
	std::vector<Corner> marked_list_;
	std::map<std::string, std::string> metadata_;

	std::vector<int> corner_class_;
	std::vector<ClassInfo> classes_;
	std::vector<std::vector<EdgeRef>> walks_;
	int num_edges_ = 0;
	int chi_ = 0;
	int genus_ = 0;
};

// Holonomy of the closed dual-graph walk that starts in crossings[0].face and
// crosses the listed edges in order, expressed in the starting chart.  The
// walk must chain (each crossing starts in the face reached by the previous
// one) and must return to the starting face.
Rotation monodromy(const Surface& s, std::span<const EdgeRef> crossings);

// Closed dual walk around an interior vertex class.
std::vector<EdgeRef> star_loop(const Surface& s, int vclass);

// Fundamental cycles of the dual graph (one per non-tree gluing); together
// with star loops these generate every free-homotopy class away from the
// vertices.
std::vector<std::vector<EdgeRef>> generator_loops(const Surface& s);

} // namespace spherical
