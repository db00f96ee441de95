#include "subdiff/forward.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "subdiff/errors.hpp"
#include "subdiff/mlf.hpp"
#include "subdiff/quadrature.hpp"

namespace subdiff::forward {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

void require_interval(const IntervalDomain& d)
{
    if (!(d.length > 0.0) || !std::isfinite(d.length))
        throw InvalidArgument("interval domain length must be positive and finite");
}

void require_cylinder(const CylinderDomain& d)
{
    if (!(d.delta > 0.0) || !std::isfinite(d.delta))
        throw InvalidArgument("cylinder delta must be positive and finite");
    if (d.transverse.empty() || d.transverse.size() > 2)
        throw InvalidArgument("cylinder cross-section needs 1 or 2 side lengths");
    for (double L : d.transverse)
        if (!(L > 0.0) || !std::isfinite(L))
            throw InvalidArgument("cylinder side lengths must be positive and finite");
}

void require_coefficient(double value, double nu, double mu, const char* label)
{
    if (!(value >= nu) || !(value <= mu))
        throw CoefficientOutOfBounds(std::string(label) + " = " + std::to_string(value) +
                                     " outside the admissible band [" + std::to_string(nu) +
                                     ", " + std::to_string(mu) + "]");
}

void require_alpha(double alpha)
{
    if (!(alpha > 0.0) || !(alpha <= 1.0))
        throw InvalidArgument("fractional order alpha must lie in (0, 1]");
}

// Integrate the piecewise-linear function through (xs, vals) exactly over
// [lo, hi], assumed inside [xs.front(), xs.back()] with xs uniform.
double integrate_linear(std::span<const double> xs, std::span<const double> vals, double lo,
                        double hi)
{
    const double h = xs[1] - xs[0];
    const auto value_at = [&](double x) {
        const auto cells = xs.size() - 1;
        auto i = static_cast<std::size_t>((x - xs[0]) / h);
        i = std::min(i, cells - 1);
        const double w = (x - xs[i]) / h;
        return vals[i] + w * (vals[i + 1] - vals[i]);
    };
    const auto first_node_after = [&](double x) {
        auto i = static_cast<std::size_t>(std::ceil((x - xs[0]) / h - 1e-12));
        return std::min(i, xs.size() - 1);
    };

    double acc = 0.0;
    double x = lo, v = value_at(lo);
    for (std::size_t i = first_node_after(lo); i < xs.size() && xs[i] < hi; ++i) {
        if (xs[i] <= x)
            continue;
        acc += 0.5 * (v + vals[i]) * (xs[i] - x);
        x = xs[i];
        v = vals[i];
    }
    if (hi > x)
        acc += 0.5 * (v + value_at(hi)) * (hi - x);
    return acc;
}

// Tridiagonal solve (Thomas); diag/upper/lower are overwritten.
void solve_tridiagonal(std::vector<double>& lower, std::vector<double>& diag,
                       std::vector<double>& upper, std::vector<double>& rhs)
{
    const std::size_t n = diag.size();
    double scale = 0.0;
    for (double d : diag)
        scale = std::max(scale, std::fabs(d));
    for (std::size_t i = 1; i < n; ++i) {
        if (std::fabs(diag[i - 1]) < 1e-300 * std::max(1.0, scale))
            throw SingularSystem("tridiagonal pivot vanished at row " + std::to_string(i - 1));
        const double w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    if (std::fabs(diag[n - 1]) < 1e-300 * std::max(1.0, scale))
        throw SingularSystem("tridiagonal pivot vanished at the last row");
    rhs[n - 1] /= diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
        rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
}

void finalize_modes(SpectralSolution& u)
{
    std::sort(u.modes.begin(), u.modes.end(),
              [](const SpectralMode& a, const SpectralMode& b) { return a.decay < b.decay; });
}

} // namespace

double EigenPair1D::operator()(double x) const
{
    return norm * std::sin(wavenumber * x);
}

std::vector<EigenPair1D> dirichlet_eigs(const IntervalDomain& domain, int n_max)
{
    require_interval(domain);
    if (n_max < 1)
        throw InvalidArgument("dirichlet_eigs needs n_max >= 1");
    std::vector<EigenPair1D> eigs;
    eigs.reserve(static_cast<std::size_t>(n_max));
    const double norm = std::sqrt(2.0 / domain.length);
    for (int k = 1; k <= n_max; ++k) {
        EigenPair1D e;
        e.index = k;
        e.wavenumber = static_cast<double>(k) * kPi / domain.length;
        e.lambda = e.wavenumber * e.wavenumber;
        e.norm = norm;
        eigs.push_back(e);
    }
    return eigs;
}

double SpectralMode::shape1(double x) const
{
    return norm[0] * std::sin(wavenumber[0] * x);
}

double SpectralMode::shape2(double x1, double x2) const
{
    return norm[0] * std::sin(wavenumber[0] * x1) * norm[1] * std::sin(wavenumber[1] * x2);
}

double SpectralSolution::operator()(double x, double t) const
{
    if (dims != 1)
        throw InvalidArgument("this spectral solution is not one-dimensional");
    double acc = 0.0;
    for (const SpectralMode& m : modes)
        acc += m.coeff * mlf::ml(alpha, -m.decay * std::pow(t, alpha)) * m.shape1(x);
    return acc;
}

double SpectralSolution::operator()(double x1, double x2, double t) const
{
    if (dims != 2)
        throw InvalidArgument("this spectral solution is not two-dimensional");
    double acc = 0.0;
    for (const SpectralMode& m : modes)
        acc += m.coeff * mlf::ml(alpha, -m.decay * std::pow(t, alpha)) * m.shape2(x1, x2);
    return acc;
}

SpectralSolution spectral_solve(const IntervalDomain& domain, double p, double alpha,
                                std::span<const double> u0_coeffs, int n_max, double nu,
                                double mu)
{
    require_interval(domain);
    require_alpha(alpha);
    if (n_max < 1)
        throw InvalidArgument("spectral_solve needs n_max >= 1");
    require_coefficient(p, nu, mu, "diffusion coefficient p");

    SpectralSolution u;
    u.alpha = alpha;
    u.p = p;
    u.dims = 1;
    u.lengths = {domain.length, 0.0, 0.0};

    const double norm = std::sqrt(2.0 / domain.length);
    const auto kept = std::min<std::size_t>(u0_coeffs.size(), static_cast<std::size_t>(n_max));
    for (std::size_t i = 0; i < kept; ++i) {
        if (u0_coeffs[i] == 0.0)
            continue;
        SpectralMode m;
        m.dims = 1;
        m.index = {static_cast<int>(i) + 1, 0, 0};
        m.wavenumber[0] = static_cast<double>(i + 1) * kPi / domain.length;
        m.norm[0] = norm;
        m.decay = p * m.wavenumber[0] * m.wavenumber[0];
        m.coeff = u0_coeffs[i];
        u.modes.push_back(m);
    }
    for (std::size_t i = kept; i < u0_coeffs.size(); ++i)
        u.tail_bound += std::fabs(u0_coeffs[i]) * norm;
    finalize_modes(u);
    return u;
}

double layered_decay(const CylinderDomain& domain, double p, std::span<const double> b, int n,
                     std::span<const int> m)
{
    require_cylinder(domain);
    if (b.size() != domain.transverse.size() || m.size() != domain.transverse.size())
        throw InvalidArgument("layered_decay: coefficient/index count must match the cross-section");
    if (n < 1)
        throw InvalidArgument("layered_decay: mode indices start at 1");
    const double w1 = static_cast<double>(n) * kPi / domain.delta;
    double rate = p * w1 * w1;
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (m[i] < 1)
            throw InvalidArgument("layered_decay: mode indices start at 1");
        const double wi = static_cast<double>(m[i]) * kPi / domain.transverse[i];
        rate += b[i] * wi * wi;
    }
    return rate;
}

SpectralSolution spectral_solve_layered(const CylinderDomain& domain, double p,
                                        std::span<const double> b, double alpha,
                                        std::span<const ModeCoeff> u0_coeffs, double nu,
                                        double mu)
{
    require_cylinder(domain);
    require_alpha(alpha);
    if (domain.transverse.size() != 1)
        throw InvalidArgument("layered spectral evaluation currently covers rectangles (N = 2)");
    if (b.size() != domain.transverse.size())
        throw InvalidArgument("need one transverse coefficient per cross-section axis");
    require_coefficient(p, nu, mu, "layer coefficient p");
    for (double bi : b)
        require_coefficient(bi, nu, mu, "transverse coefficient b");

    SpectralSolution u;
    u.alpha = alpha;
    u.p = p;
    u.b.assign(b.begin(), b.end());
    u.dims = 2;
    u.lengths = {domain.delta, domain.transverse[0], 0.0};

    const double norm1 = std::sqrt(2.0 / domain.delta);
    const double norm2 = std::sqrt(2.0 / domain.transverse[0]);
    for (const ModeCoeff& mc : u0_coeffs) {
        if (mc.c == 0.0)
            continue;
        const std::array<int, 1> midx{mc.m[0]};
        SpectralMode m;
        m.dims = 2;
        m.index = {mc.n, mc.m[0], 0};
        m.wavenumber[0] = static_cast<double>(mc.n) * kPi / domain.delta;
        m.wavenumber[1] = static_cast<double>(mc.m[0]) * kPi / domain.transverse[0];
        m.norm[0] = norm1;
        m.norm[1] = norm2;
        m.decay = layered_decay(domain, p, b, mc.n, midx);
        m.coeff = mc.c;
        u.modes.push_back(m);
    }
    finalize_modes(u);
    return u;
}

std::vector<double> project_initial(const IntervalDomain& domain,
                                    const std::function<double(double)>& u0, int n_max)
{
    require_interval(domain);
    if (!u0)
        throw InvalidArgument("project_initial requires initial data");
    if (n_max < 1)
        throw InvalidArgument("project_initial needs n_max >= 1");
    std::vector<double> coeffs(static_cast<std::size_t>(n_max), 0.0);
    const double norm = std::sqrt(2.0 / domain.length);
    for (int k = 1; k <= n_max; ++k) {
        const double w = static_cast<double>(k) * kPi / domain.length;
        const int panels = 16 + 2 * k; // resolve the k-th oscillation comfortably
        coeffs[static_cast<std::size_t>(k - 1)] = quad::composite_gl8(
            [&u0, norm, w](double x) { return u0(x) * norm * std::sin(w * x); }, 0.0,
            domain.length, panels);
    }
    return coeffs;
}

Field fdm_solve(const FdmProblem& problem, std::size_t space_cells,
                const fracalc::TimeGrid& grid, double alpha)
{
    require_interval(problem.domain);
    require_alpha(alpha);
    if (alpha >= 1.0)
        throw InvalidArgument("fdm_solve uses the fractional stencil: alpha must be < 1");
    if (space_cells < 4)
        throw InvalidArgument("fdm_solve needs at least 4 space cells");
    if (!problem.diffusion || !problem.initial)
        throw InvalidArgument("fdm_solve requires diffusion and initial samplers");

    const std::size_t J = space_cells;
    const std::size_t M = grid.steps;
    const double L = problem.domain.length;
    const double h = L / static_cast<double>(J);

    Field field;
    field.grid = grid;
    field.x.resize(J + 1);
    for (std::size_t j = 0; j <= J; ++j)
        field.x[j] = L * static_cast<double>(j) / static_cast<double>(J);
    if (problem.micro_period > 0.0 &&
        static_cast<double>(J) < 16.0 * L / problem.micro_period)
        field.under_resolved = true;

    // node samples of the coefficient, with ellipticity screening
    std::vector<double> a(J + 1);
    const double slack = 1e-12 * problem.mu;
    for (std::size_t j = 0; j <= J; ++j) {
        a[j] = problem.diffusion(field.x[j]);
        if (!(a[j] >= problem.nu - slack) || !(a[j] <= problem.mu + slack))
            throw EllipticityViolation("diffusion sample " + std::to_string(a[j]) +
                                       " at x = " + std::to_string(field.x[j]) +
                                       " leaves [" + std::to_string(problem.nu) + ", " +
                                       std::to_string(problem.mu) + "]");
    }
    std::vector<double> face(J); // face[j] sits between nodes j and j+1
    for (std::size_t j = 0; j < J; ++j)
        face[j] = 2.0 * a[j] * a[j + 1] / (a[j] + a[j + 1]);

    std::vector<double> q(J + 1, 0.0);
    if (problem.reaction) {
        for (std::size_t j = 0; j <= J; ++j) {
            q[j] = problem.reaction(field.x[j]);
            if (q[j] < -1e-12)
                throw InvalidArgument("reaction coefficient must be nonnegative, got " +
                                      std::to_string(q[j]) + " at x = " +
                                      std::to_string(field.x[j]));
        }
    }

    field.values.assign(M + 1, std::vector<double>(J + 1, 0.0));
    for (std::size_t j = 1; j < J; ++j)
        field.values[0][j] = problem.initial(field.x[j]);

    const fracalc::L1Stencil stencil = fracalc::L1Stencil::make(alpha, M);
    const double c0 = std::pow(grid.tau, -alpha) * mlf::reciprocal_gamma(2.0 - alpha);
    const double inv_h2 = 1.0 / (h * h);

    const std::size_t n = J - 1; // interior unknowns
    std::vector<double> lower(n), diag(n), upper(n), rhs(n), history(n);

    for (std::size_t m = 1; m <= M; ++m) {
        // weighted history: sum of (b_{k-1} - b_k) u^{m-k} plus the initial tail
        std::fill(history.begin(), history.end(), 0.0);
        for (std::size_t k = 1; k < m; ++k) {
            const double w = stencil.weights[k - 1] - stencil.weights[k];
            const std::vector<double>& um = field.values[m - k];
            for (std::size_t j = 0; j < n; ++j)
                history[j] += w * um[j + 1];
        }
        const double w0 = stencil.weights[m - 1];
        for (std::size_t j = 0; j < n; ++j)
            history[j] += w0 * field.values[0][j + 1];

        const double t_m = grid.node(m);
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t node = j + 1;
            lower[j] = -face[node - 1] * inv_h2;
            upper[j] = -face[node] * inv_h2;
            diag[j] = c0 + (face[node - 1] + face[node]) * inv_h2 + q[node];
            rhs[j] = c0 * history[j];
            if (problem.source)
                rhs[j] += problem.source(field.x[node], t_m);
        }
        solve_tridiagonal(lower, diag, upper, rhs);
        for (std::size_t j = 0; j < n; ++j)
            field.values[m][j + 1] = rhs[j];
    }
    return field;
}

Reduced1D reduce_layered_to_1d(std::function<double(double)> p_sampler,
                               std::function<double(double)> a2_sampler, int mode,
                               double transverse_length)
{
    if (mode < 1)
        throw InvalidArgument("transverse Dirichlet modes start at 1");
    if (!(transverse_length > 0.0))
        throw InvalidArgument("transverse length must be positive");
    if (!p_sampler || !a2_sampler)
        throw InvalidArgument("reduce_layered_to_1d requires both coefficient samplers");
    const double w = static_cast<double>(mode) * kPi / transverse_length;
    Reduced1D r;
    r.diffusion = std::move(p_sampler);
    r.reaction = [a2 = std::move(a2_sampler), w2 = w * w](double x1) { return a2(x1) * w2; };
    return r;
}

Field sample_field(const SpectralSolution& u, std::span<const double> x_nodes,
                   const fracalc::TimeGrid& grid)
{
    if (u.dims != 1)
        throw InvalidArgument("sample_field covers one-dimensional solutions");
    if (x_nodes.size() < 2)
        throw InvalidArgument("sample_field needs at least two space nodes");

    Field field;
    field.grid = grid;
    field.x.assign(x_nodes.begin(), x_nodes.end());
    const std::size_t M = grid.steps;
    const std::size_t J = x_nodes.size() - 1;
    field.values.assign(M + 1, std::vector<double>(J + 1, 0.0));

    // shape table: mode x node
    std::vector<std::vector<double>> shapes(u.modes.size(), std::vector<double>(J + 1));
    for (std::size_t i = 0; i < u.modes.size(); ++i)
        for (std::size_t j = 0; j <= J; ++j)
            shapes[i][j] = u.modes[i].shape1(x_nodes[j]);

    for (std::size_t m = 0; m <= M; ++m) {
        const double ta = std::pow(grid.node(m), u.alpha);
        for (std::size_t i = 0; i < u.modes.size(); ++i) {
            const double factor =
                u.modes[i].coeff * mlf::ml(u.alpha, -u.modes[i].decay * ta);
            for (std::size_t j = 1; j < J; ++j)
                field.values[m][j] += factor * shapes[i][j];
        }
    }
    return field;
}

double l2_space_time_distance(const Field& u, const Field& v)
{
    if (u.x.size() != v.x.size() || u.grid.steps != v.grid.steps)
        throw GridMismatch("fields live on different grids");
    for (std::size_t j = 0; j < u.x.size(); ++j)
        if (std::fabs(u.x[j] - v.x[j]) > 1e-12)
            throw GridMismatch("fields live on different space nodes");
    if (std::fabs(u.grid.t_final - v.grid.t_final) > 1e-12)
        throw GridMismatch("fields live on different time horizons");

    const std::size_t M = u.grid.steps;
    const std::size_t J = u.x.size() - 1;
    const double h = u.x[1] - u.x[0];
    const double tau = u.grid.tau;
    double acc = 0.0;
    for (std::size_t m = 0; m <= M; ++m) {
        const double wt = (m == 0 || m == M) ? 0.5 : 1.0;
        double row = 0.0;
        for (std::size_t j = 0; j <= J; ++j) {
            const double wx = (j == 0 || j == J) ? 0.5 : 1.0;
            const double d = u.values[m][j] - v.values[m][j];
            row += wx * d * d;
        }
        acc += wt * row;
    }
    return std::sqrt(acc * h * tau);
}

namespace {

void require_field_point(const Field& u, double x0, double t0)
{
    if (!(x0 >= u.x.front()) || !(x0 <= u.x.back()))
        throw OutOfDomain("observation point x = " + std::to_string(x0) +
                          " outside [" + std::to_string(u.x.front()) + ", " +
                          std::to_string(u.x.back()) + "]");
    if (!(t0 >= 0.0) || !(t0 <= u.grid.t_final))
        throw OutOfDomain("observation time t = " + std::to_string(t0) +
                          " outside [0, " + std::to_string(u.grid.t_final) + "]");
}

double field_value(const Field& u, double x0, double t0)
{
    const std::size_t M = u.grid.steps;
    const double tau = u.grid.tau;
    auto m = static_cast<std::size_t>(t0 / tau);
    m = std::min(m, M - 1);
    const double wt = (t0 - u.grid.node(m)) / tau;

    const std::size_t J = u.x.size() - 1;
    const double h = u.x[1] - u.x[0];
    auto j = static_cast<std::size_t>((x0 - u.x.front()) / h);
    j = std::min(j, J - 1);
    const double wx = (x0 - u.x[j]) / h;

    const double lo = u.values[m][j] + wx * (u.values[m][j + 1] - u.values[m][j]);
    const double hi = u.values[m + 1][j] + wx * (u.values[m + 1][j + 1] - u.values[m + 1][j]);
    return lo + wt * (hi - lo);
}

} // namespace

double observe_point(const Field& u, double x0, double t0)
{
    require_field_point(u, x0, t0);
    return field_value(u, x0, t0);
}

double observe_region(const Field& u, double x_lo, double x_hi, double t_lo, double t_hi)
{
    if (!(x_lo < x_hi) || !(t_lo < t_hi))
        throw InvalidArgument("observation window must have positive extent");
    require_field_point(u, x_lo, t_lo);
    require_field_point(u, x_hi, t_hi);

    // integrate each time row over the window, then the rows over time;
    // exact for the bilinear interpolant of the table
    const std::size_t M = u.grid.steps;
    std::vector<double> t_nodes(M + 1), row_integrals(M + 1);
    for (std::size_t m = 0; m <= M; ++m) {
        t_nodes[m] = u.grid.node(m);
        row_integrals[m] = integrate_linear(u.x, u.values[m], x_lo, x_hi);
    }
    return integrate_linear(t_nodes, row_integrals, t_lo, t_hi);
}

std::vector<double> observe_trace(const Field& u, double x0, std::span<const double> times)
{
    std::vector<double> out;
    out.reserve(times.size());
    for (double t : times) {
        require_field_point(u, x0, t);
        out.push_back(field_value(u, x0, t));
    }
    return out;
}

namespace {

void require_spectral_point(const SpectralSolution& u, double x0, double t0)
{
    if (!(x0 >= 0.0) || !(x0 <= u.lengths[0]))
        throw OutOfDomain("observation point x = " + std::to_string(x0) + " outside [0, " +
                          std::to_string(u.lengths[0]) + "]");
    if (!(t0 >= 0.0))
        throw OutOfDomain("observation time must be nonnegative");
}

// integral of the normalized sine over [lo, hi]
double sine_integral(double norm, double w, double lo, double hi)
{
    return norm * (std::cos(w * lo) - std::cos(w * hi)) / w;
}

double relaxation_time_integral(double alpha, double decay, double t_lo, double t_hi)
{
    const auto f = [alpha, decay](double t) {
        return mlf::ml(alpha, -decay * std::pow(t, alpha));
    };
    const auto res = quad::adaptive_gk15(f, t_lo, t_hi, 1e-12, 1e-14);
    return res.value;
}

} // namespace

double observe_point(const SpectralSolution& u, double x0, double t0)
{
    require_spectral_point(u, x0, t0);
    return u(x0, t0);
}

double observe_region(const SpectralSolution& u, double x_lo, double x_hi, double t_lo,
                      double t_hi)
{
    if (u.dims != 1)
        throw InvalidArgument("one-dimensional observation of a layered solution");
    if (!(x_lo < x_hi) || !(t_lo < t_hi))
        throw InvalidArgument("observation window must have positive extent");
    require_spectral_point(u, x_lo, t_lo);
    require_spectral_point(u, x_hi, t_hi);

    double acc = 0.0;
    for (const SpectralMode& m : u.modes)
        acc += m.coeff * sine_integral(m.norm[0], m.wavenumber[0], x_lo, x_hi) *
               relaxation_time_integral(u.alpha, m.decay, t_lo, t_hi);
    return acc;
}

std::vector<double> observe_trace(const SpectralSolution& u, double x0,
                                  std::span<const double> times)
{
    std::vector<double> out;
    out.reserve(times.size());
    for (double t : times) {
        require_spectral_point(u, x0, t);
        out.push_back(u(x0, t));
    }
    return out;
}

double observe_point2(const SpectralSolution& u, double x1, double x2, double t)
{
    if (u.dims != 2)
        throw InvalidArgument("two-dimensional observation of a one-dimensional solution");
    require_spectral_point(u, x1, t);
    if (!(x2 >= 0.0) || !(x2 <= u.lengths[1]))
        throw OutOfDomain("observation point x2 = " + std::to_string(x2) + " outside [0, " +
                          std::to_string(u.lengths[1]) + "]");
    return u(x1, x2, t);
}

double observe_region2(const SpectralSolution& u, double x1_lo, double x1_hi, double x2_lo,
                       double x2_hi, double t_lo, double t_hi)
{
    if (u.dims != 2)
        throw InvalidArgument("two-dimensional observation of a one-dimensional solution");
    if (!(x1_lo < x1_hi) || !(x2_lo < x2_hi) || !(t_lo < t_hi))
        throw InvalidArgument("observation window must have positive extent");
    require_spectral_point(u, x1_lo, t_lo);
    require_spectral_point(u, x1_hi, t_hi);
    if (!(x2_lo >= 0.0) || !(x2_hi <= u.lengths[1]))
        throw OutOfDomain("transverse window outside [0, " + std::to_string(u.lengths[1]) +
                          "]");

    double acc = 0.0;
    for (const SpectralMode& m : u.modes)
        acc += m.coeff * sine_integral(m.norm[0], m.wavenumber[0], x1_lo, x1_hi) *
               sine_integral(m.norm[1], m.wavenumber[1], x2_lo, x2_hi) *
               relaxation_time_integral(u.alpha, m.decay, t_lo, t_hi);
    return acc;
}

} // namespace subdiff::forward
