#pragma once

#include <functional>
#include <vector>

namespace simroc {

struct QuadratureOptions {
  double tolerance = 1e-12;  // relative, per cell
  unsigned max_depth = 8;  // Gauss-Kronrod bisection depth before the tanh-sinh fallback
};

/// Adaptive Gauss-Kronrod (61-point) over [lo, hi], split at the given
/// interior breakpoints. Throws kNumerical if the error estimate of any cell
/// exceeds 10 * max(1e-12, tolerance * L1 norm of the cell).
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 std::vector<double> breakpoints = {}, QuadratureOptions opt = {});

/// Nested 1-D quadrature over [lo, hi]^2 with a shared breakpoint set on both
/// axes, so integrands that are smooth on each grid cell integrate accurately.
double integrate_square(const std::function<double(double, double)>& f, double lo, double hi,
                        const std::vector<double>& breakpoints, QuadratureOptions opt = {});

}  // namespace simroc
