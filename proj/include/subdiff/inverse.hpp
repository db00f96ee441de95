#pragma once

#include <functional>
#include <span>
#include <vector>

#include "subdiff/cell.hpp"
#include "subdiff/forward.hpp"

namespace subdiff::inverse {

enum class ObservationKind { point, region };

// One scalar-coefficient recovery problem: the forward model (1D interval or
// layered cylinder), initial data in eigen coordinates, the measurement and
// where it was taken, the admissible band, and the stopping rule.
struct RecoverySpec {
    // forward model
    forward::IntervalDomain domain{3.141592653589793238462643383279502884};
    bool layered = false;
    forward::CylinderDomain cylinder;          // used when layered
    std::vector<double> b;                     // known transverse coefficients
    double alpha = 0.5;
    std::vector<double> u0_coeffs;             // 1D eigen-coefficients of u0
    std::vector<forward::ModeCoeff> u0_modes;  // layered eigen-coefficients
    int n_max = 64;

    // observation
    ObservationKind kind = ObservationKind::point;
    double x0 = 0.0;                       // observation point (x1 when layered)
    double x2 = 0.0;                       // transverse observation point
    double t0 = 1.0;
    double x_lo = 0.0, x_hi = 0.0;         // spatial window (region kind)
    double x2_lo = 0.0, x2_hi = 0.0;       // transverse window (layered region)
    double t_lo = 0.0, t_hi = 0.0;         // time window (region kind)
    double observation = 0.0;

    // admissible interval and stopping rule
    double nu = 0.5;
    double mu = 3.0;
    double tolerance = 1e-8;
};

struct RecoveryResult {
    double p_hat = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    int iterations = 0;
    double residual = 0.0;       // |h(p_hat) - observation| (fit RMS for traces)
    double stability = 0.0;      // 1/h'(p_hat) by centered difference: local
                                 // amplification of data error into p error
    double contamination = 0.0;  // bound on the first neglected asymptotic term
                                 // (trace recovery only; 0 for monotone recovery)
};

// Truncated values P_k(x0) = sum_n c_n phi_n(x0) / lambda_n^k of the
// long-time expansion coefficients.
struct AsymptoticCoefficients {
    std::vector<double> values;  // k = 1..K
    int truncation = 0;          // modes used in the inner sum
    double tail_ratio = 0.0;     // lambda_1 / lambda_{N+1}: geometric factor by
                                 // which each omitted tail term is suppressed
};

// Forward value h(p): solve the RecoverySpec model at coefficient p and apply
// its observation functional.  Deterministic; built on the eigen-series solver.
double forward_data(double p, const RecoverySpec& spec);

// Root-find a monotone scalar map h on [nu, mu] for h(p) = observation:
// bisection with an in-bracket regula-falsi acceleration step.  The bracket
// property h(lo) <= observation <= h(hi) holds at every iteration; the search
// stops once the residual is within tolerance AND the bracket width is within
// tolerance * max(1, mu).
RecoveryResult recover_monotone(const std::function<double(double)>& h, double observation,
                                double nu, double mu, double tolerance);
RecoveryResult recover_monotone(const RecoverySpec& spec);

AsymptoticCoefficients asymptotic_coeffs(std::span<const double> u0_coeffs,
                                         std::span<const forward::EigenPair1D> eigs,
                                         double x0, int k_max);

// Long-time trace recovery: least squares for A in u(x0, t) ~ A t^{-alpha}
// over the window [fit_lo, fit_hi], then p_hat = P_1(x0) / (Gamma(1-alpha) A).
// The residual reports the relative RMS misfit of the one-term model; the
// contamination field bounds the first neglected expansion term at p = nu.
RecoveryResult recover_from_trace(std::span<const double> times,
                                  std::span<const double> values, const RecoverySpec& spec,
                                  double fit_lo, double fit_hi);

// Two scalar problems whose point traces coincide although (p, u0) differ:
// decay rates p lambda_1 = q lambda_2 match and the eigenfunction amplitudes
// agree at x0, while the leading-eigenspace content of the second datum
// vanishes there.  Shows why trace recovery requires P_1 u0(x0) != 0.
struct CounterexampleReport {
    double x0 = 0.0;
    double p = 1.0;
    double q = 0.25;
    std::vector<double> times;
    std::vector<double> trace_p;
    std::vector<double> trace_q;
    double max_gap = 0.0;       // sup over the grid of |trace_p - trace_q|
    double projection_q = 0.0;  // leading-eigenspace value of the second datum at x0
};

CounterexampleReport counterexample_demo(double alpha, int n_times = 100,
                                         double t_max = 10.0,
                                         double x0 = 1.0471975511965977462);

// Pairwise consistency of two traces with possibly different initial data:
// fit the leading coefficient of each tail and compare.  Two observations are
// consistent exactly when their fitted leading coefficients agree.
struct TraceConsistency {
    double a_first = 0.0;
    double a_second = 0.0;
    double relative_gap = 0.0;
    bool consistent = false;
};

TraceConsistency trace_consistency(std::span<const double> times,
                                   std::span<const double> first,
                                   std::span<const double> second, double alpha,
                                   double fit_lo, double fit_hi, double threshold = 0.05);

// Shared setup for the structure-crossing studies: discretization, initial
// data, and the space-time observation window.
struct CrossSpec {
    double length = 1.0;
    double alpha = 0.5;
    double t_final = 1.0;
    std::size_t space_cells = 128;
    std::size_t steps = 128;
    std::function<double(double)> initial;
    double x_lo = 0.25, x_hi = 0.75;
    double t_lo = 0.5, t_hi = 1.0;
    double tolerance = 1e-6;
};

struct CrossRow {
    double epsilon = 0.0;
    double a0_hat = 0.0;
    double error = 0.0;  // |a0_hat - harmonic mean of the cell coefficient|
    bool under_resolved = false;
};

// Effective-coefficient recovery across structures: solve the oscillating
// problem for each epsilon, observe a space-time window, and recover the
// constant coefficient whose (identically discretized) solve matches the
// observation.  The error column is measured against the harmonic mean.
std::vector<CrossRow> cross_recover_homogenized(const cell::PeriodicCoefficient1D& a,
                                                std::span<const double> eps_list,
                                                const CrossSpec& spec);

using CoefficientFamily = std::function<cell::PeriodicCoefficient1D(double)>;

struct FamilyRecovery {
    double s_hat = 0.0;
    double a0_hat = 0.0;          // stage 1: recovered effective coefficient
    double a0_at_s_hat = 0.0;     // effective coefficient of the recovered member
    RecoveryResult stage1;        // effective-coefficient recovery details
    int iterations = 0;           // stage 2: parameter bisection count
    double lower_constant = 0.0;  // nu^2 / (mu^2 l1) over the family band
    double upper_constant = 0.0;  // mu^2 / (nu^2 l1)
};

// Two-stage recovery of a periodic coefficient within an ordered
// one-parameter family: first recover the effective constant from the
// RecoverySpec observation, then invert the strictly increasing
// map s -> harmonic mean of a(.; s) by a second bisection.
FamilyRecovery cross_recover_periodic(const CoefficientFamily& family, double s_lo,
                                      double s_hi, const RecoverySpec& spec);

// Two-sided comparison of the effective gap against the L1 distance for an
// ordered pair a1 >= a2: lower <= a1^0 - a2^0 <= upper with the constants
// nu^2/(mu^2 l1) and mu^2/(nu^2 l1).  Band overrides <= 0 mean "derive the
// band from the pair itself".
struct SandwichCheck {
    double l1_distance = 0.0;
    double gap = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    bool ordered = false;
    bool holds = false;
};

SandwichCheck sandwich_check(const cell::PeriodicCoefficient1D& a1,
                             const cell::PeriodicCoefficient1D& a2, double nu = 0.0,
                             double mu = 0.0);

} // namespace subdiff::inverse
