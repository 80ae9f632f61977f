#include "spherical/errors.hpp"

namespace spherical {

const char* errc_name(Errc c) {
	switch (c) {
	case Errc::NonPositiveExcess: return "NonPositiveExcess";
	case Errc::DegenerateTriangle: return "DegenerateTriangle";
	case Errc::NotInOpenHemisphere: return "NotInOpenHemisphere";
	case Errc::DegenerateHull: return "DegenerateHull";
	case Errc::InvalidParameter: return "InvalidParameter";
	case Errc::AntipodalMarks: return "AntipodalMarks";
	case Errc::LengthMismatch: return "LengthMismatch";
	case Errc::OrientationMismatch: return "OrientationMismatch";
	case Errc::OpenWalk: return "OpenWalk";
	case Errc::GeometryError: return "GeometryError";
	case Errc::AmbiguousStart: return "AmbiguousStart";
	case Errc::BudgetExceeded: return "BudgetExceeded";
	case Errc::NotPiLength: return "NotPiLength";
	case Errc::BoundaryArc: return "BoundaryArc";
	case Errc::NotAPolygon: return "NotAPolygon";
	case Errc::SingularCenter: return "SingularCenter";
	case Errc::SingularSphereInput: return "SingularSphereInput";
	case Errc::RemovableSingularitiesOnly: return "RemovableSingularitiesOnly";
	case Errc::SchemaError: return "SchemaError";
	case Errc::Internal: return "Internal";
	}
	return "Unknown";
}

Error::Error(Errc code, const std::string& msg)
    : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

void fail(Errc code, const std::string& msg) {
	throw Error(code, msg);
}

} // namespace spherical
