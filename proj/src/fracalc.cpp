#include "subdiff/fracalc.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "subdiff/errors.hpp"
#include "subdiff/gammafn.hpp"

namespace subdiff::fracalc {

namespace {

void require_grid_match(const std::vector<double>& samples, const TimeGrid& grid,
                        const char* op)
{
    if (samples.size() != grid.nodes())
        throw GridMismatch(std::string(op) + ": sample array has " +
                           std::to_string(samples.size()) + " entries, grid has " +
                           std::to_string(grid.nodes()) + " nodes");
}

} // namespace

TimeGrid::TimeGrid(double t_final_, std::size_t steps_)
    : t_final(t_final_), steps(steps_), tau(t_final_ / static_cast<double>(steps_))
{
    if (!(t_final_ > 0.0) || !std::isfinite(t_final_))
        throw InvalidArgument("TimeGrid: t_final must be positive and finite");
    if (steps_ == 0)
        throw InvalidArgument("TimeGrid: need at least one step");
}

L1Stencil L1Stencil::make(double alpha, std::size_t steps)
{
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw InvalidArgument("L1Stencil: alpha must lie in (0,1)");
    L1Stencil s;
    s.alpha = alpha;
    s.weights.resize(steps);
    const double e = 1.0 - alpha;
    double prev = 0.0; // j^{1-alpha} carried across iterations
    for (std::size_t j = 0; j < steps; ++j) {
        const double next = std::pow(static_cast<double>(j + 1), e);
        s.weights[j] = next - prev;
        prev = next;
    }
    return s;
}

std::vector<double> rl_integral(const std::vector<double>& samples, const TimeGrid& grid,
                                double beta)
{
    require_grid_match(samples, grid, "rl_integral");
    if (!(beta > 0.0) || !(beta <= 1.0))
        throw InvalidArgument("rl_integral: beta must lie in (0,1]");

    const std::size_t M = grid.steps;
    const double tau = grid.tau;
    const double tau_b = std::pow(tau, beta);

    // Per-lag moments of the kernel (t_j - s)^{beta-1} against the linear
    // interpolant: A_m integrates the kernel over one cell at lag m, C_m the
    // kernel times s/tau.  Both telescope, so each costs one pow.
    std::vector<double> A(M + 1, 0.0), C(M + 1, 0.0);
    double pow_b_prev = 0.0, pow_b1_prev = 0.0;
    for (std::size_t m = 1; m <= M; ++m) {
        const double md = static_cast<double>(m);
        const double pow_b = std::pow(md, beta);
        const double pow_b1 = pow_b * md;
        A[m] = tau_b / beta * (pow_b - pow_b_prev);
        C[m] = tau_b / (beta + 1.0) * (pow_b1 - pow_b1_prev);
        pow_b_prev = pow_b;
        pow_b1_prev = pow_b1;
    }

    const double rg = mlf::reciprocal_gamma(beta);
    std::vector<double> out(M + 1, 0.0);
    for (std::size_t j = 1; j <= M; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k < j; ++k) {
            const std::size_t m = j - k;
            const double md = static_cast<double>(m);
            acc += samples[k] * (C[m] - (md - 1.0) * A[m]) +
                   samples[k + 1] * (md * A[m] - C[m]);
        }
        out[j] = rg * acc;
    }
    return out;
}

std::vector<double> caputo_l1(const std::vector<double>& samples, const TimeGrid& grid,
                              double alpha)
{
    require_grid_match(samples, grid, "caputo_l1");
    const L1Stencil stencil = L1Stencil::make(alpha, grid.steps);

    const std::size_t M = grid.steps;
    const double c0 = std::pow(grid.tau, -alpha) * mlf::reciprocal_gamma(2.0 - alpha);

    std::vector<double> out(M + 1, 0.0);
    for (std::size_t m = 1; m <= M; ++m) {
        double acc = 0.0;
        for (std::size_t j = 0; j < m; ++j)
            acc += stencil.weights[j] * (samples[m - j] - samples[m - j - 1]);
        out[m] = c0 * acc;
    }
    return out;
}

double verify_inverse_pair(double alpha, const TimeGrid& grid, const std::vector<double>& v)
{
    require_grid_match(v, grid, "verify_inverse_pair");
    const std::vector<double> dv = caputo_l1(v, grid, alpha);
    const std::vector<double> jv = rl_integral(dv, grid, alpha);
    double defect = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j)
        defect = std::max(defect, std::fabs(jv[j] - (v[j] - v[0])));
    return defect;
}

} // namespace subdiff::fracalc
