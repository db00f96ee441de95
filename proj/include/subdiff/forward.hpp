#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "subdiff/fracalc.hpp"

namespace subdiff::forward {

// Omega = (0, length)
struct IntervalDomain {
    double length = 1.0;
};

// Omega = (0, delta) x D with D a rectangle of the given side lengths; the
// coefficient varies along the first axis only (layered medium).
struct CylinderDomain {
    double delta = 1.0;
    std::vector<double> transverse; // one entry for N = 2, two for N = 3
};

// Dirichlet eigenpair of -d^2/dx^2 on (0, L): lambda = (k pi / L)^2 with the
// L^2-normalized eigenfunction sqrt(2/L) sin(k pi x / L).
struct EigenPair1D {
    int index = 1;
    double lambda = 0.0;
    double wavenumber = 0.0;
    double norm = 0.0;

    double operator()(double x) const;
};

std::vector<EigenPair1D> dirichlet_eigs(const IntervalDomain& domain, int n_max);

// One term of an eigen-expansion: coeff * (product of normalized sines),
// relaxed in time by the Mittag-Leffler factor with rate `decay`.
struct SpectralMode {
    double decay = 0.0;
    double coeff = 0.0;
    int dims = 1;
    std::array<int, 3> index{1, 0, 0};
    std::array<double, 3> wavenumber{};
    std::array<double, 3> norm{};

    double shape1(double x) const;
    double shape2(double x1, double x2) const;
};

// Eigen-series solution of the time-fractional diffusion problem with
// homogeneous Dirichlet data: u(x, t) = sum coeff_n E_alpha(-decay_n t^alpha)
// phi_n(x).  Modes are sorted by increasing decay; evaluators are immutable
// and safe to share across threads.
struct SpectralSolution {
    double alpha = 0.5;
    double p = 1.0;
    std::vector<double> b;            // transverse coefficients (layered only)
    int dims = 1;
    std::array<double, 3> lengths{};  // domain side lengths for validation
    double tail_bound = 0.0;          // bound on the dropped-mode contribution
    std::vector<SpectralMode> modes;

    double operator()(double x, double t) const;
    double operator()(double x1, double x2, double t) const;
};

// u0 given as coefficients against the first eigenfunctions; p is the scalar
// diffusion coefficient, validated against [nu, mu].
SpectralSolution spectral_solve(const IntervalDomain& domain, double p, double alpha,
                                std::span<const double> u0_coeffs, int n_max = 64,
                                double nu = 1e-12, double mu = 1e12);

// Initial coefficient attached to the (n, m) mode pair of a cylinder domain
// (m has one used slot for N = 2, two for N = 3).
struct ModeCoeff {
    int n = 1;
    std::array<int, 2> m{1, 0};
    double c = 0.0;
};

// Layered spectral solution: rate p*Lambda_n + sum_i b_i * (m_i pi / L_i)^2,
// eigenfunctions products of the per-axis sine bases.
SpectralSolution spectral_solve_layered(const CylinderDomain& domain, double p,
                                        std::span<const double> b, double alpha,
                                        std::span<const ModeCoeff> u0_coeffs,
                                        double nu = 1e-12, double mu = 1e12);

// Relaxation rate of mode (n, m) of the layered operator.
double layered_decay(const CylinderDomain& domain, double p, std::span<const double> b,
                     int n, std::span<const int> m);

// L^2 projection of u0 onto the first n_max Dirichlet modes by quadrature.
std::vector<double> project_initial(const IntervalDomain& domain,
                                    const std::function<double(double)>& u0, int n_max);

// Space-time sample table of a 1D solve: values[m][j] = u(x_j, t_m).
struct Field {
    std::vector<double> x;
    fracalc::TimeGrid grid;
    std::vector<std::vector<double>> values;
    bool under_resolved = false; // grid too coarse for the declared microscale
};

// One-dimensional diffusion-reaction problem with oscillation metadata.
struct FdmProblem {
    IntervalDomain domain;
    std::function<double(double)> diffusion;         // a(x), elliptic
    double nu = 1e-12;
    double mu = 1e12;
    std::function<double(double)> reaction;          // q(x) >= 0, optional
    std::function<double(double, double)> source;    // f(x, t), optional
    std::function<double(double)> initial;           // u0(x)
    double micro_period = 0.0;                       // finest coefficient scale, 0 if none
};

// Implicit L1 / central-flux finite-difference solve on space_cells uniform
// cells: each step solves a tridiagonal system with harmonic-mean face
// coefficients.  Sets Field::under_resolved instead of failing when the
// spatial grid cannot resolve micro_period (fewer than 16 cells per period).
Field fdm_solve(const FdmProblem& problem, std::size_t space_cells,
                const fracalc::TimeGrid& grid, double alpha);

// Exact modal reduction of the diagonal layered 2D problem: inserting
// u = v(x1, t) sin(m pi x2 / L2) decouples the transverse direction into a
// reaction term q(x1) = a2(x1) (m pi / L2)^2 acting on v.
struct Reduced1D {
    std::function<double(double)> diffusion;
    std::function<double(double)> reaction;
};

Reduced1D reduce_layered_to_1d(std::function<double(double)> p_sampler,
                               std::function<double(double)> a2_sampler, int mode,
                               double transverse_length);

// Evaluate a spectral solution on a space-time grid (1D only).
Field sample_field(const SpectralSolution& u, std::span<const double> x_nodes,
                   const fracalc::TimeGrid& grid);

// Composite-trapezoid approximation of the L^2(0,T; L^2(Omega)) distance of
// two fields sharing one grid.
double l2_space_time_distance(const Field& u, const Field& v);

// Data functionals: point value, space-time window integral, point trace.
double observe_point(const Field& u, double x0, double t0);
double observe_region(const Field& u, double x_lo, double x_hi, double t_lo, double t_hi);
std::vector<double> observe_trace(const Field& u, double x0, std::span<const double> times);

double observe_point(const SpectralSolution& u, double x0, double t0);
double observe_region(const SpectralSolution& u, double x_lo, double x_hi, double t_lo,
                      double t_hi);
std::vector<double> observe_trace(const SpectralSolution& u, double x0,
                                  std::span<const double> times);

// Layered (2D) variants.
double observe_point2(const SpectralSolution& u, double x1, double x2, double t);
double observe_region2(const SpectralSolution& u, double x1_lo, double x1_hi, double x2_lo,
                       double x2_hi, double t_lo, double t_hi);

} // namespace subdiff::forward
