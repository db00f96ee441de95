#include "subdiff/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "subdiff/errors.hpp"
#include "subdiff/gammafn.hpp"

namespace subdiff::inverse {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr int kMaxIterations = 200;
constexpr int kFamilyGrid = 32;
constexpr std::size_t kMeanPoints = 10000;

forward::SpectralSolution solve_model(double p, const RecoverySpec& spec)
{
    if (spec.layered)
        return forward::spectral_solve_layered(spec.cylinder, p, spec.b, spec.alpha,
                                               spec.u0_modes, spec.nu, spec.mu);
    return forward::spectral_solve(spec.domain, p, spec.alpha, spec.u0_coeffs, spec.n_max,
                                   spec.nu, spec.mu);
}

double slope_by_centered_difference(const std::function<double(double)>& h, double p,
                                    double nu, double mu)
{
    double delta = 1e-6 * std::max(1.0, std::fabs(p));
    delta = std::min(delta, 0.25 * (mu - nu));
    const double center = std::clamp(p, nu + delta, mu - delta);
    return (h(center + delta) - h(center - delta)) / (2.0 * delta);
}

// least-squares amplitude of the one-term model y ~ A t^{-alpha} on a window
struct TailFit {
    double amplitude = 0.0;
    double rel_rms = 0.0;
    std::size_t samples = 0;
};

TailFit fit_power_tail(std::span<const double> times, std::span<const double> values,
                       double alpha, double fit_lo, double fit_hi)
{
    if (times.size() != values.size())
        throw GridMismatch("trace times and values differ in length");
    if (!(fit_lo < fit_hi) || !(fit_lo > 0.0))
        throw InvalidArgument("fit window must satisfy 0 < t_lo < t_hi");

    double num = 0.0;
    double den = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        if (t < fit_lo || t > fit_hi)
            continue;
        const double basis = std::pow(t, -alpha);
        num += values[i] * basis;
        den += basis * basis;
        ++used;
    }
    if (used < 2)
        throw InvalidArgument("fit window contains fewer than two samples");

    TailFit fit;
    fit.amplitude = num / den;
    fit.samples = used;

    double misfit = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        if (t < fit_lo || t > fit_hi)
            continue;
        const double model = fit.amplitude * std::pow(t, -alpha);
        misfit += (values[i] - model) * (values[i] - model);
        scale += values[i] * values[i];
    }
    fit.rel_rms = scale > 0.0 ? std::sqrt(misfit / scale) : std::sqrt(misfit);
    return fit;
}

} // namespace

double forward_data(double p, const RecoverySpec& spec)
{
    const auto u = solve_model(p, spec);
    if (spec.layered) {
        if (spec.kind == ObservationKind::point)
            return forward::observe_point2(u, spec.x0, spec.x2, spec.t0);
        return forward::observe_region2(u, spec.x_lo, spec.x_hi, spec.x2_lo, spec.x2_hi,
                                        spec.t_lo, spec.t_hi);
    }
    if (spec.kind == ObservationKind::point)
        return forward::observe_point(u, spec.x0, spec.t0);
    return forward::observe_region(u, spec.x_lo, spec.x_hi, spec.t_lo, spec.t_hi);
}

RecoveryResult recover_monotone(const std::function<double(double)>& h, double observation,
                                double nu, double mu, double tolerance)
{
    if (!h)
        throw InvalidArgument("recover_monotone requires a forward map");
    if (!(nu < mu) || !std::isfinite(nu) || !std::isfinite(mu))
        throw InvalidArgument("admissible interval [nu, mu] must be finite with nu < mu");
    if (!(tolerance > 0.0))
        throw InvalidArgument("tolerance must be positive");
    if (!std::isfinite(observation))
        throw InvalidArgument("observation must be finite");

    double lo = nu;
    double hi = mu;
    const double h_lo = h(lo);
    const double h_hi = h(hi);
    if (!(h_lo < h_hi))
        throw MonotonicityViolation(
            "forward values are not increasing across [nu, mu]; the initial data likely "
            "violates the sign convention");
    if (observation < h_lo - tolerance || observation > h_hi + tolerance)
        throw ObservationOutOfRange("observation " + std::to_string(observation) +
                                    " outside the attainable range [" + std::to_string(h_lo) +
                                    ", " + std::to_string(h_hi) + "]");
    double f_lo = h_lo - observation;
    double f_hi = h_hi - observation;

    RecoveryResult result;

    // data consistent with an endpoint: the bracket collapses immediately
    if (f_lo >= 0.0 || f_hi <= 0.0) {
        result.p_hat = f_lo >= 0.0 ? lo : hi;
        result.bracket_lo = result.bracket_hi = result.p_hat;
        result.residual = std::fabs(f_lo >= 0.0 ? f_lo : f_hi);
        const double slope = slope_by_centered_difference(h, result.p_hat, nu, mu);
        result.stability = slope > 0.0 ? 1.0 / slope : std::numeric_limits<double>::infinity();
        return result;
    }

    double best_p = 0.5 * (lo + hi);
    double best_f = std::numeric_limits<double>::infinity();
    const double width_goal = tolerance * std::max(1.0, mu);

    int iter = 0;
    while (iter < kMaxIterations) {
        if (hi - lo <= width_goal && std::fabs(best_f) <= tolerance)
            break;
        ++iter;

        // regula-falsi candidate on even rounds, plain midpoint on odd rounds;
        // the midpoint rounds guarantee geometric bracket contraction
        double candidate;
        if (iter % 2 == 1 && f_hi > f_lo) {
            candidate = lo - f_lo * (hi - lo) / (f_hi - f_lo);
            const double margin = 0.01 * (hi - lo);
            candidate = std::clamp(candidate, lo + margin, hi - margin);
        } else {
            candidate = 0.5 * (lo + hi);
        }

        const double f = h(candidate) - observation;
        if (std::fabs(f) < std::fabs(best_f)) {
            best_f = f;
            best_p = candidate;
        }
        if (f == 0.0) {
            lo = hi = candidate;
            break;
        }
        if (f < 0.0) {
            lo = candidate;
            f_lo = f;
        } else {
            hi = candidate;
            f_hi = f;
        }
    }

    result.p_hat = best_p;
    result.bracket_lo = lo;
    result.bracket_hi = hi;
    result.iterations = iter;
    result.residual = std::fabs(best_f);
    const double slope = slope_by_centered_difference(h, best_p, nu, mu);
    result.stability = slope > 0.0 ? 1.0 / slope : std::numeric_limits<double>::infinity();
    return result;
}

RecoveryResult recover_monotone(const RecoverySpec& spec)
{
    if (spec.layered && spec.nu < 1.0)
        throw InvalidArgument(
            "layered recovery runs in the coefficient regime [1, inf): raise nu");
    return recover_monotone([&spec](double p) { return forward_data(p, spec); },
                            spec.observation, spec.nu, spec.mu, spec.tolerance);
}

AsymptoticCoefficients asymptotic_coeffs(std::span<const double> u0_coeffs,
                                         std::span<const forward::EigenPair1D> eigs,
                                         double x0, int k_max)
{
    if (k_max < 1)
        throw InvalidArgument("asymptotic_coeffs needs k_max >= 1");
    if (eigs.empty())
        throw InvalidArgument("asymptotic_coeffs needs eigendata");
    const double length = kPi / eigs[0].wavenumber * eigs[0].index;
    if (!(x0 >= 0.0) || !(x0 <= length))
        throw OutOfDomain("x0 = " + std::to_string(x0) + " outside [0, " +
                          std::to_string(length) + "]");

    const std::size_t n_used = std::min(u0_coeffs.size(), eigs.size());
    AsymptoticCoefficients out;
    out.truncation = static_cast<int>(n_used);
    out.values.reserve(static_cast<std::size_t>(k_max));
    for (int k = 1; k <= k_max; ++k) {
        double acc = 0.0;
        for (std::size_t n = 0; n < n_used; ++n)
            acc += u0_coeffs[n] * eigs[n](x0) / std::pow(eigs[n].lambda, k);
        out.values.push_back(acc);
    }

    double lambda_next;
    if (n_used < eigs.size()) {
        lambda_next = eigs[n_used].lambda;
    } else {
        const double ratio = (static_cast<double>(n_used) + 1.0) / static_cast<double>(n_used);
        lambda_next = eigs[n_used - 1].lambda * ratio * ratio;
    }
    out.tail_ratio = eigs[0].lambda / lambda_next;
    return out;
}

RecoveryResult recover_from_trace(std::span<const double> times,
                                  std::span<const double> values, const RecoverySpec& spec,
                                  double fit_lo, double fit_hi)
{
    if (spec.layered)
        throw InvalidArgument("trace recovery covers the one-dimensional model");

    const int modes = std::max<int>(spec.n_max, static_cast<int>(spec.u0_coeffs.size()) + 1);
    const auto eigs = forward::dirichlet_eigs(spec.domain, modes);
    const auto p_coeffs = asymptotic_coeffs(spec.u0_coeffs, eigs, spec.x0, 6);
    const double p1 = p_coeffs.values[0];

    // cancellation-free magnitude scale for the degeneracy threshold
    double scale = 0.0;
    const std::size_t n_used = std::min(spec.u0_coeffs.size(), eigs.size());
    for (std::size_t n = 0; n < n_used; ++n)
        scale += std::fabs(spec.u0_coeffs[n]) * eigs[n].norm / eigs[n].lambda;
    if (std::fabs(p1) <= 1e-10 * std::max(scale, 1e-300))
        throw DegenerateInitialData(
            "leading-eigenspace content of the initial data vanishes at x0");

    // bound the first expansion term the one-term fit neglects, at the worst
    // admissible coefficient p = nu and the earliest window time
    const double lead = std::fabs(p1) * std::fabs(mlf::reciprocal_gamma(1.0 - spec.alpha));
    double contamination = 0.0;
    for (std::size_t k = 2; k < p_coeffs.values.size() + 1; ++k) {
        const double rg = mlf::reciprocal_gamma(1.0 - spec.alpha * static_cast<double>(k));
        if (rg == 0.0)
            continue; // a pole of the reciprocal factor annihilates this term
        const double pk = p_coeffs.values[k - 1];
        if (pk == 0.0)
            continue;
        const double suppression =
            std::pow(spec.nu, static_cast<double>(k - 1)) *
            std::pow(fit_lo, spec.alpha * static_cast<double>(k - 1));
        contamination = std::fabs(pk) * std::fabs(rg) / (lead * suppression);
        break;
    }
    if (contamination > 0.1)
        throw WindowTooEarly("neglected-term bound " + std::to_string(contamination) +
                             " exceeds 10% of the leading term; move the window later");

    const TailFit fit = fit_power_tail(times, values, spec.alpha, fit_lo, fit_hi);
    if (!(p1 / fit.amplitude > 0.0))
        throw InvalidArgument("trace tail is inconsistent with the leading expansion term");

    RecoveryResult result;
    result.p_hat = p1 * mlf::reciprocal_gamma(1.0 - spec.alpha) / fit.amplitude;
    result.contamination = contamination;
    result.bracket_lo = result.p_hat * (1.0 - contamination);
    result.bracket_hi = result.p_hat * (1.0 + contamination);
    result.iterations = static_cast<int>(fit.samples);
    result.residual = fit.rel_rms;
    // |dp/dA| at the fit: amplification of amplitude error into p error
    result.stability = result.p_hat * result.p_hat / lead;
    return result;
}

CounterexampleReport counterexample_demo(double alpha, int n_times, double t_max, double x0)
{
    if (n_times < 1)
        throw InvalidArgument("counterexample_demo needs at least one time");
    if (!(t_max > 0.0))
        throw InvalidArgument("counterexample_demo needs t_max > 0");

    const forward::IntervalDomain omega{kPi};
    CounterexampleReport report;
    report.x0 = x0;
    report.p = 1.0;
    report.q = 0.25;

    // p lambda_1 = 1 * 1 and q lambda_2 = (1/4) * 4: identical decay rates,
    // and phi_1, phi_2 have equal amplitude at x0 = pi/3
    const std::vector<double> u0_p{1.0};
    const std::vector<double> u0_q{0.0, 1.0};
    const auto up = forward::spectral_solve(omega, report.p, alpha, u0_p, 8, 0.1, 2.0);
    const auto uq = forward::spectral_solve(omega, report.q, alpha, u0_q, 8, 0.1, 2.0);

    report.times.reserve(static_cast<std::size_t>(n_times));
    for (int i = 1; i <= n_times; ++i)
        report.times.push_back(t_max * static_cast<double>(i) / n_times);
    report.trace_p = forward::observe_trace(up, x0, report.times);
    report.trace_q = forward::observe_trace(uq, x0, report.times);

    for (std::size_t i = 0; i < report.times.size(); ++i)
        report.max_gap =
            std::max(report.max_gap, std::fabs(report.trace_p[i] - report.trace_q[i]));

    // content of the second datum in the slowest eigenspace, evaluated at x0
    const auto eigs = forward::dirichlet_eigs(omega, 1);
    report.projection_q = u0_q[0] * eigs[0](x0);
    return report;
}

TraceConsistency trace_consistency(std::span<const double> times,
                                   std::span<const double> first,
                                   std::span<const double> second, double alpha,
                                   double fit_lo, double fit_hi, double threshold)
{
    const TailFit a = fit_power_tail(times, first, alpha, fit_lo, fit_hi);
    const TailFit b = fit_power_tail(times, second, alpha, fit_lo, fit_hi);
    TraceConsistency out;
    out.a_first = a.amplitude;
    out.a_second = b.amplitude;
    const double scale = std::max({std::fabs(a.amplitude), std::fabs(b.amplitude), 1e-300});
    out.relative_gap = std::fabs(a.amplitude - b.amplitude) / scale;
    out.consistent = out.relative_gap <= threshold;
    return out;
}

std::vector<CrossRow> cross_recover_homogenized(const cell::PeriodicCoefficient1D& a,
                                                std::span<const double> eps_list,
                                                const CrossSpec& spec)
{
    if (eps_list.empty())
        throw InvalidArgument("cross_recover_homogenized needs at least one epsilon");
    for (std::size_t i = 1; i < eps_list.size(); ++i)
        if (!(eps_list[i] < eps_list[i - 1]))
            throw InvalidArgument("epsilon list must be strictly decreasing");
    if (!spec.initial)
        throw InvalidArgument("cross_recover_homogenized needs initial data");

    const double reference = cell::harmonic_mean(a, kMeanPoints);
    const fracalc::TimeGrid grid(spec.t_final, spec.steps);

    // recovery bracket: the coefficient's own band, opened up when it
    // collapses (constant coefficient)
    double band_lo = a.nu;
    double band_hi = a.mu;
    if (!(band_lo < band_hi)) {
        band_lo = 0.5 * a.nu;
        band_hi = 1.5 * a.mu;
    }

    // the homogenized forward model, discretized exactly like the data solves
    // so that scheme bias cancels from the comparison
    const auto model = [&](double p) {
        forward::FdmProblem prob;
        prob.domain = forward::IntervalDomain{spec.length};
        prob.diffusion = [p](double) { return p; };
        prob.nu = band_lo;
        prob.mu = band_hi;
        prob.initial = spec.initial;
        const auto field = fdm_solve(prob, spec.space_cells, grid, spec.alpha);
        return forward::observe_region(field, spec.x_lo, spec.x_hi, spec.t_lo, spec.t_hi);
    };

    std::vector<CrossRow> rows;
    rows.reserve(eps_list.size());
    for (const double eps : eps_list) {
        forward::FdmProblem prob;
        prob.domain = forward::IntervalDomain{spec.length};
        prob.diffusion = cell::oscillate(a, eps);
        prob.nu = band_lo;
        prob.mu = band_hi;
        prob.initial = spec.initial;
        prob.micro_period = eps * a.period;
        const auto field = fdm_solve(prob, spec.space_cells, grid, spec.alpha);
        const double data =
            forward::observe_region(field, spec.x_lo, spec.x_hi, spec.t_lo, spec.t_hi);

        const auto rec = recover_monotone(model, data, band_lo, band_hi, spec.tolerance);
        CrossRow row;
        row.epsilon = eps;
        row.a0_hat = rec.p_hat;
        row.error = std::fabs(rec.p_hat - reference);
        row.under_resolved = field.under_resolved;
        rows.push_back(row);
    }
    return rows;
}

FamilyRecovery cross_recover_periodic(const CoefficientFamily& family, double s_lo,
                                      double s_hi, const RecoverySpec& spec)
{
    if (!family)
        throw InvalidArgument("cross_recover_periodic needs a coefficient family");
    if (!(s_lo < s_hi))
        throw InvalidArgument("parameter interval must satisfy s_lo < s_hi");

    // sample the family: effective coefficient must increase strictly in s
    std::vector<double> s_grid, a0_grid;
    double band_nu = std::numeric_limits<double>::infinity();
    double band_mu = 0.0;
    double period = 0.0;
    for (int i = 0; i < kFamilyGrid; ++i) {
        const double s = s_lo + (s_hi - s_lo) * i / (kFamilyGrid - 1);
        const auto member = family(s);
        if (i == 0)
            period = member.period;
        else if (std::fabs(member.period - period) > 1e-12 * std::max(1.0, period))
            throw InvalidArgument("family members must share one period");
        s_grid.push_back(s);
        a0_grid.push_back(cell::harmonic_mean(member, kMeanPoints));
        band_nu = std::min(band_nu, member.nu);
        band_mu = std::max(band_mu, member.mu);
    }
    for (int i = 1; i < kFamilyGrid; ++i)
        if (!(a0_grid[i] > a0_grid[i - 1]))
            throw FamilyNotMonotone(
                "effective coefficient is not strictly increasing between s = " +
                std::to_string(s_grid[i - 1]) + " and s = " + std::to_string(s_grid[i]));

    // stage 1: effective coefficient from the homogenized observation, with
    // the admissible band induced by the family itself
    RecoverySpec stage1 = spec;
    stage1.nu = a0_grid.front();
    stage1.mu = a0_grid.back();
    FamilyRecovery out;
    out.stage1 = recover_monotone(stage1);
    out.a0_hat = out.stage1.p_hat;

    // stage 2: invert s -> a0(s) on [s_lo, s_hi] by the same bracketed search
    const auto effective = [&family](double s) {
        return cell::harmonic_mean(family(s), kMeanPoints);
    };
    const auto stage2 =
        recover_monotone(effective, out.a0_hat, s_lo, s_hi, spec.tolerance);
    out.s_hat = stage2.p_hat;
    out.a0_at_s_hat = effective(out.s_hat);
    out.iterations = stage2.iterations;

    out.lower_constant = band_nu * band_nu / (band_mu * band_mu * period);
    out.upper_constant = band_mu * band_mu / (band_nu * band_nu * period);
    return out;
}

SandwichCheck sandwich_check(const cell::PeriodicCoefficient1D& a1,
                             const cell::PeriodicCoefficient1D& a2, double nu, double mu)
{
    if (std::fabs(a1.period - a2.period) > 1e-12 * std::max(1.0, a1.period))
        throw InvalidArgument("sandwich_check needs coefficients on one period");
    const double band_nu = nu > 0.0 ? nu : std::min(a1.nu, a2.nu);
    const double band_mu = mu > 0.0 ? mu : std::max(a1.mu, a2.mu);
    if (!(band_nu < band_mu))
        throw InvalidArgument("ellipticity band must satisfy nu < mu");

    SandwichCheck out;
    out.ordered = true;
    const int samples = 512;
    double l1 = 0.0;
    const double cell_width = a1.period / samples;
    for (int i = 0; i < samples; ++i) {
        const double y = (i + 0.5) * cell_width;
        const double gap = a1(y) - a2(y);
        if (gap < -1e-12 * band_mu)
            out.ordered = false;
        l1 += std::fabs(gap) * cell_width;
    }
    out.l1_distance = l1;
    out.gap = cell::harmonic_mean(a1, kMeanPoints) - cell::harmonic_mean(a2, kMeanPoints);
    out.lower = band_nu * band_nu / (band_mu * band_mu * a1.period) * l1;
    out.upper = band_mu * band_mu / (band_nu * band_nu * a1.period) * l1;
    out.holds = out.ordered && out.lower <= out.gap && out.gap <= out.upper;
    return out;
}

} // namespace subdiff::inverse
