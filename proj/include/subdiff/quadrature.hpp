#pragma once

#include <functional>
#include <span>
#include <vector>

namespace subdiff::quad {

using Integrand = std::function<double(double)>;

/// 8-point Gauss-Legendre rule on [a, b].
double gauss_legendre_8(const Integrand& f, double a, double b);

/// Composite 8-point Gauss-Legendre with `panels` equal panels on [a, b].
double composite_gl8(const Integrand& f, double a, double b, int panels);

/// Composite GL8 on [a, b] split first at the interior `breaks` (jump
/// locations of the integrand), then into panels sized so the total node
/// count is roughly `target_points`. Exact for polynomials of degree <= 15
/// on each smooth piece, hence exact for piecewise-constant integrands whose
/// jumps are all listed in `breaks`.
double composite_gl8_breakpoints(const Integrand& f, double a, double b,
                                 std::span<const double> breaks, int target_points);

struct AdaptiveResult {
    double value = 0.0;
    double abs_error = 0.0;  // accumulated error estimate
    long evaluations = 0;
    bool converged = true;
};

/// Adaptive Gauss-Kronrod 7/15 on [a, b]; bisects until the local error
/// estimate meets rel_tol/abs_tol or max_depth is reached.
AdaptiveResult adaptive_gk15(const Integrand& f, double a, double b,
                             double rel_tol, double abs_tol, int max_depth = 30);

/// Adaptive GK15 over a pre-split partition: `points` must be ascending;
/// each subinterval is integrated adaptively and the results summed.
AdaptiveResult adaptive_gk15_split(const Integrand& f, std::span<const double> points,
                                   double rel_tol, double abs_tol, int max_depth = 30);

} // namespace subdiff::quad
