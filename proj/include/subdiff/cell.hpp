#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace subdiff::cell {

// A scalar coefficient a(y) on the unit cell [0, period), extended
// periodically to the whole line, with declared ellipticity bounds
// 0 < nu <= a <= mu.  Breakpoints list the positions inside (0, period)
// where the sampler jumps or kinks, so quadrature can split panels there
// instead of smearing across discontinuities.
struct PeriodicCoefficient1D {
    double period = 1.0;
    double nu = 1.0;
    double mu = 1.0;
    std::function<double(double)> sampler;
    std::vector<double> breakpoints;

    // evaluate with reduction into the fundamental cell
    double operator()(double y) const;

    static PeriodicCoefficient1D constant(double value, double period = 1.0);
    // value_low on [0, split), value_high on [split, period)
    static PeriodicCoefficient1D two_phase(double value_low, double value_high, double split,
                                           double period = 1.0);
    // offset + amplitude * sin(2 pi y / period)
    static PeriodicCoefficient1D sinusoid(double offset, double amplitude,
                                          double period = 1.0);
    // linear interpolation through (y, value) pairs, wrapped periodically
    static PeriodicCoefficient1D table(std::vector<std::pair<double, double>> points,
                                       double period = 1.0);
};

// Layered (laminate) matrix coefficient A(y) = A(y_1): every entry depends
// on the first coordinate only.  Entries must be symmetric; ellipticity with
// constants (nu, mu) is spot-checked on a sample grid before use.
struct LayeredMatrix {
    int dim = 2;
    double period = 1.0;
    double nu = 1.0;
    double mu = 1.0;
    std::array<std::array<std::function<double(double)>, 3>, 3> entry;
    std::vector<double> breakpoints;

    static LayeredMatrix diagonal(const std::vector<PeriodicCoefficient1D>& diag);
};

struct HomogenizedTensor {
    int dim = 2;
    std::array<std::array<double, 3>, 3> entries{};
    double nu = 1.0;
    double mu = 1.0;

    double operator()(int i, int j) const { return entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
    // ascending eigenvalues (first `dim` slots meaningful)
    std::array<double, 3> eigenvalues() const;
};

// First-cell corrector chi sampled on a uniform grid over [0, period]; the
// additive constant c0 is chosen so the (trapezoid) mean vanishes.  w(y) =
// y - chi(y) is the corrected linear profile whose flux a w' is constant.
struct Corrector1D {
    std::vector<double> grid;
    std::vector<double> chi;
    double c0 = 0.0;
    double a0 = 0.0; // homogenized scalar used to build chi
};

// Cell average M_Y(a) by composite quadrature split at breakpoints.
double mean_value(const PeriodicCoefficient1D& a, std::size_t quad_points);

// Effective 1D coefficient: period / integral of 1/a — the harmonic mean.
// Always lies in [nu, mu]; throws EllipticityViolation if any quadrature
// sample leaves the declared bounds.
double harmonic_mean(const PeriodicCoefficient1D& a, std::size_t quad_points);

// chi(y) = y - a0 * integral_0^y dz/a(z) + c0 on grid_points uniform cells.
Corrector1D corrector_1d(const PeriodicCoefficient1D& a, std::size_t grid_points);

// Closed-form homogenization of a layered matrix: harmonic mean of a_11,
// weighted means for the first row/column, and a covariance correction for
// the lower block.  Validates symmetry and ellipticity first.
HomogenizedTensor homogenize_layered(const LayeredMatrix& A, std::size_t quad_points);

// Independent cross-check: rebuild the tensor column by column as the cell
// average of A grad w_{e_j} using the closed-form corrector gradients, with
// plain uniform quadrature (no breakpoint splitting), and return the largest
// entrywise discrepancy against `tensor`.
double verify_against_definition(const LayeredMatrix& A, const HomogenizedTensor& tensor,
                                 std::size_t grid_points);

// a^eps(x) = a(x/eps): squeezes the cell by eps, keeping bounds and scaling
// breakpoints, so the result is (eps * period)-periodic.
PeriodicCoefficient1D oscillate(const PeriodicCoefficient1D& a, double epsilon);

} // namespace subdiff::cell
