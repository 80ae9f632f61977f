#pragma once

#include <stdexcept>
#include <string>

namespace spherical {

enum class Errc {
	// kernel
	NonPositiveExcess,
	DegenerateTriangle,
	NotInOpenHemisphere,
	DegenerateHull,
	// surface construction
	InvalidParameter,
	AntipodalMarks,
	LengthMismatch,
	OrientationMismatch,
	OpenWalk,
	GeometryError,
	// geodesics
	AmbiguousStart,
	BudgetExceeded,
	NotPiLength,
	// decomposition
	BoundaryArc,
	NotAPolygon,
	// core
	SingularCenter,
	SingularSphereInput,
	RemovableSingularitiesOnly,
	// io
	SchemaError,
	Internal,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
	Error(Errc code, const std::string& msg);
	Errc code() const { return code_; }

private:
	Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& msg);

} // namespace spherical
