#pragma once

namespace spherical {

// Comparison thresholds used across the library.  `vec` guards chart-level
// coordinate comparisons (unit norms, transition residuals, snap radius for
// hits on developed vertices); `length` and `angle` guard metric quantities.
struct Tolerance {
	double angle = 1e-9;
	double length = 1e-9;
	double vec = 1e-12;
};

Tolerance& global_tolerance();

// Scoped override, used by the CLI's --tolerance flag and by tests.
class ToleranceGuard {
public:
	explicit ToleranceGuard(const Tolerance& t);
	~ToleranceGuard();
	ToleranceGuard(const ToleranceGuard&) = delete;
	ToleranceGuard& operator=(const ToleranceGuard&) = delete;

private:
	Tolerance saved_;
};

} // namespace spherical
