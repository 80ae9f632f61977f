#include "spherical/tolerance.hpp"

namespace spherical {

Tolerance& global_tolerance() {
	static Tolerance t;
	return t;
}

ToleranceGuard::ToleranceGuard(const Tolerance& t) : saved_(global_tolerance()) {
	global_tolerance() = t;
}

ToleranceGuard::~ToleranceGuard() {
	global_tolerance() = saved_;
}

} // namespace spherical
