#pragma once

#include <cstddef>
#include <vector>

namespace subdiff::fracalc {

// Uniform grid t_j = j * tau on [0, t_final], j = 0..steps.
struct TimeGrid {
    double t_final = 1.0;
    std::size_t steps = 1;
    double tau = 1.0;

    TimeGrid() = default;
    TimeGrid(double t_final_, std::size_t steps_);

    std::size_t nodes() const { return steps + 1; }
    double node(std::size_t j) const
    {
        return t_final * static_cast<double>(j) / static_cast<double>(steps);
    }
};

// Convolution weights of the L1 discretization of the Caputo derivative:
// b_j = (j+1)^{1-alpha} - j^{1-alpha}.  b_0 = 1 and the sequence decreases
// strictly to zero, which is what makes the implicit time-stepping scheme
// built on it unconditionally stable.
struct L1Stencil {
    double alpha = 0.5;
    std::vector<double> weights;

    static L1Stencil make(double alpha, std::size_t steps);
};

// Riemann-Liouville integral (J^beta v)(t_j) for every node of the grid,
// 0 < beta <= 1, by product integration against the piecewise-linear
// interpolant of the samples.  Exact for piecewise-linear inputs; entry 0
// is exactly zero.
std::vector<double> rl_integral(const std::vector<double>& samples, const TimeGrid& grid,
                                double beta);

// Caputo derivative of order alpha in (0,1) by the L1 scheme, applied to
// v - v(0) (differences only, so callers never pre-subtract the initial
// value).  Entry j holds the value at t_j for j >= 1; entry 0 is zero by
// convention since the scheme needs at least one step.  Truncation error
// is O(tau^{2-alpha}) for twice continuously differentiable inputs.
std::vector<double> caputo_l1(const std::vector<double>& samples, const TimeGrid& grid,
                              double alpha);

// Max-norm defect of the discrete composition J^alpha(D^alpha(v - v0)) vs
// v - v0, which contracts at first order in tau as the grid refines.  Used
// by tests and diagnostics to confirm the two operators invert each other.
double verify_inverse_pair(double alpha, const TimeGrid& grid, const std::vector<double>& v);

} // namespace subdiff::fracalc
