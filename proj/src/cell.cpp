#include "subdiff/cell.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "subdiff/errors.hpp"
#include "subdiff/quadrature.hpp"

namespace subdiff::cell {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double reduce_periodic(double y, double period)
{
    double r = y - period * std::floor(y / period);
    if (r >= period) // floor rounding at exact multiples
        r -= period;
    return r;
}

void require_bounds(double nu, double mu)
{
    if (!(nu > 0.0) || !(nu <= mu))
        throw InvalidArgument("coefficient bounds must satisfy 0 < nu <= mu");
}

// Wrap a sampler so every quadrature evaluation is checked against the
// declared ellipticity bounds (with a hair of slack for rounding).
quad::Integrand guarded(const PeriodicCoefficient1D& a)
{
    const double slack = 1e-12 * a.mu;
    return [&a, slack](double y) {
        const double v = a.sampler(y);
        if (!(v >= a.nu - slack) || !(v <= a.mu + slack))
            throw EllipticityViolation("coefficient sample " + std::to_string(v) +
                                       " at y = " + std::to_string(y) +
                                       " leaves declared bounds [" + std::to_string(a.nu) +
                                       ", " + std::to_string(a.mu) + "]");
        return v;
    };
}

// Symmetric Jacobi eigenvalue iteration for n <= 3.
std::array<double, 3> jacobi_eigenvalues(std::array<std::array<double, 3>, 3> m, int n)
{
    double scale = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            scale = std::max(scale, std::fabs(m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]));
    if (scale == 0.0)
        return {0.0, 0.0, 0.0};

    auto& a = m;
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q)
                off += a[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)] * a[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)];
        if (off < 1e-32 * scale * scale)
            break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const auto pu = static_cast<std::size_t>(p);
                const auto qu = static_cast<std::size_t>(q);
                const double apq = a[pu][qu];
                if (apq == 0.0)
                    continue;
                const double tau = (a[qu][qu] - a[pu][pu]) / (2.0 * apq);
                const double t =
                    (tau >= 0.0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                a[pu][pu] -= t * apq;
                a[qu][qu] += t * apq;
                a[pu][qu] = a[qu][pu] = 0.0;
                for (int k = 0; k < n; ++k) {
                    if (k == p || k == q)
                        continue;
                    const auto ku = static_cast<std::size_t>(k);
                    const double akp = a[ku][pu], akq = a[ku][qu];
                    a[ku][pu] = a[pu][ku] = c * akp - s * akq;
                    a[ku][qu] = a[qu][ku] = s * akp + c * akq;
                }
            }
        }
    }
    std::array<double, 3> eig{a[0][0], n > 1 ? a[1][1] : 0.0, n > 2 ? a[2][2] : 0.0};
    std::sort(eig.begin(), eig.begin() + n);
    return eig;
}

// Cell mean of an arbitrary scalar function of y built from layered entries,
// split at the matrix's breakpoints.
double layered_mean(const LayeredMatrix& A, const quad::Integrand& f, std::size_t quad_points)
{
    return quad::composite_gl8_breakpoints(f, 0.0, A.period, A.breakpoints,
                                           static_cast<int>(quad_points)) /
           A.period;
}

void validate_layered(const LayeredMatrix& A)
{
    if (A.dim < 1 || A.dim > 3)
        throw InvalidArgument("layered matrix dimension must be 1, 2, or 3");
    require_bounds(A.nu, A.mu);
    const auto n = static_cast<std::size_t>(A.dim);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (!A.entry[i][j])
                throw InvalidArgument("layered matrix entry (" + std::to_string(i + 1) + "," +
                                      std::to_string(j + 1) + ") is not set");

    // sample y at panel midpoints plus midpoints between breakpoints
    std::vector<double> ys;
    for (int k = 0; k < 128; ++k)
        ys.push_back(A.period * (k + 0.5) / 128.0);
    std::vector<double> cuts{0.0};
    cuts.insert(cuts.end(), A.breakpoints.begin(), A.breakpoints.end());
    cuts.push_back(A.period);
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
        ys.push_back(0.5 * (cuts[k] + cuts[k + 1]));

    // direction grid on the unit sphere (sign-symmetric, so half suffices)
    std::vector<std::array<double, 3>> dirs;
    if (A.dim == 1) {
        dirs.push_back({1.0, 0.0, 0.0});
    } else if (A.dim == 2) {
        for (int k = 0; k < 32; ++k) {
            const double th = kPi * k / 32.0;
            dirs.push_back({std::cos(th), std::sin(th), 0.0});
        }
    } else {
        for (int i = 0; i < 8; ++i) {
            const double th = kPi * (i + 0.5) / 8.0;
            for (int k = 0; k < 16; ++k) {
                const double ph = kPi * k / 16.0;
                dirs.push_back({std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                                std::cos(th)});
            }
        }
    }

    const double sym_tol = 1e-10 * A.mu;
    const double ell_slack = 1e-10 * A.mu;
    for (double y : ys) {
        double m[3][3] = {};
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                m[i][j] = A.entry[i][j](y);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (std::fabs(m[i][j] - m[j][i]) > sym_tol)
                    throw AsymmetricInput("entry (" + std::to_string(i + 1) + "," +
                                          std::to_string(j + 1) + ") differs from its mirror at y = " +
                                          std::to_string(y));
        for (const auto& d : dirs) {
            double quad_form = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    quad_form += m[i][j] * d[i] * d[j];
            if (quad_form < A.nu - ell_slack)
                throw EllipticityViolation("quadratic form " + std::to_string(quad_form) +
                                           " at y = " + std::to_string(y) +
                                           " falls below nu = " + std::to_string(A.nu));
            if (quad_form > A.mu + ell_slack)
                throw EllipticityViolation("quadratic form " + std::to_string(quad_form) +
                                           " at y = " + std::to_string(y) +
                                           " exceeds mu = " + std::to_string(A.mu));
        }
    }
}

} // namespace

double PeriodicCoefficient1D::operator()(double y) const
{
    return sampler(reduce_periodic(y, period));
}

PeriodicCoefficient1D PeriodicCoefficient1D::constant(double value, double period)
{
    if (!(value > 0.0))
        throw InvalidArgument("constant coefficient must be positive");
    PeriodicCoefficient1D a;
    a.period = period;
    a.nu = value;
    a.mu = value;
    a.sampler = [value](double) { return value; };
    return a;
}

PeriodicCoefficient1D PeriodicCoefficient1D::two_phase(double value_low, double value_high,
                                                       double split, double period)
{
    if (!(split > 0.0) || !(split < period))
        throw InvalidArgument("two_phase split must lie inside (0, period)");
    if (!(value_low > 0.0) || !(value_high > 0.0))
        throw InvalidArgument("two_phase values must be positive");
    PeriodicCoefficient1D a;
    a.period = period;
    a.nu = std::min(value_low, value_high);
    a.mu = std::max(value_low, value_high);
    a.sampler = [value_low, value_high, split](double y) {
        return y < split ? value_low : value_high;
    };
    a.breakpoints = {split};
    return a;
}

PeriodicCoefficient1D PeriodicCoefficient1D::sinusoid(double offset, double amplitude,
                                                      double period)
{
    if (!(offset - std::fabs(amplitude) > 0.0))
        throw InvalidArgument("sinusoid must stay positive: need offset > |amplitude|");
    PeriodicCoefficient1D a;
    a.period = period;
    a.nu = offset - std::fabs(amplitude);
    a.mu = offset + std::fabs(amplitude);
    const double freq = 2.0 * kPi / period;
    a.sampler = [offset, amplitude, freq](double y) {
        return offset + amplitude * std::sin(freq * y);
    };
    return a;
}

PeriodicCoefficient1D PeriodicCoefficient1D::table(std::vector<std::pair<double, double>> points,
                                                   double period)
{
    if (points.size() < 2)
        throw InvalidArgument("table coefficient needs at least two points");
    std::sort(points.begin(), points.end());
    if (!(points.front().first >= 0.0) || !(points.back().first < period))
        throw InvalidArgument("table abscissae must lie in [0, period)");
    for (std::size_t k = 0; k + 1 < points.size(); ++k)
        if (points[k + 1].first == points[k].first)
            throw InvalidArgument("table abscissae must be distinct");

    PeriodicCoefficient1D a;
    a.period = period;
    double lo = points[0].second, hi = points[0].second;
    for (const auto& [y, v] : points) {
        (void)y;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!(lo > 0.0))
        throw InvalidArgument("table values must be positive");
    a.nu = lo;
    a.mu = hi;
    for (const auto& [y, v] : points) {
        (void)v;
        if (y > 0.0)
            a.breakpoints.push_back(y);
    }
    a.sampler = [pts = std::move(points), period](double y) {
        // wrap: segment from the last point back to the first, one period up
        auto it = std::upper_bound(pts.begin(), pts.end(), std::make_pair(y, 1e308));
        double y0, v0, y1, v1;
        if (it == pts.begin()) { // before the first node: wrap the last down
            y0 = pts.back().first - period;
            v0 = pts.back().second;
            y1 = pts.front().first;
            v1 = pts.front().second;
        } else if (it == pts.end()) { // after the last node: wrap the first up
            y0 = pts.back().first;
            v0 = pts.back().second;
            y1 = pts.front().first + period;
            v1 = pts.front().second;
        } else {
            y0 = (it - 1)->first;
            v0 = (it - 1)->second;
            y1 = it->first;
            v1 = it->second;
        }
        return v0 + (v1 - v0) * (y - y0) / (y1 - y0);
    };
    return a;
}

LayeredMatrix LayeredMatrix::diagonal(const std::vector<PeriodicCoefficient1D>& diag)
{
    if (diag.empty() || diag.size() > 3)
        throw InvalidArgument("diagonal laminate needs 1 to 3 entries");
    LayeredMatrix A;
    A.dim = static_cast<int>(diag.size());
    A.period = diag[0].period;
    A.nu = diag[0].nu;
    A.mu = diag[0].mu;
    for (const auto& d : diag) {
        if (d.period != A.period)
            throw InvalidArgument("diagonal entries must share one period");
        A.nu = std::min(A.nu, d.nu);
        A.mu = std::max(A.mu, d.mu);
        A.breakpoints.insert(A.breakpoints.end(), d.breakpoints.begin(), d.breakpoints.end());
    }
    std::sort(A.breakpoints.begin(), A.breakpoints.end());
    A.breakpoints.erase(std::unique(A.breakpoints.begin(), A.breakpoints.end()),
                        A.breakpoints.end());
    for (std::size_t i = 0; i < diag.size(); ++i) {
        for (std::size_t j = 0; j < diag.size(); ++j) {
            if (i == j) {
                A.entry[i][j] = diag[i].sampler;
            } else {
                A.entry[i][j] = [](double) { return 0.0; };
            }
        }
    }
    return A;
}

std::array<double, 3> HomogenizedTensor::eigenvalues() const
{
    return jacobi_eigenvalues(entries, dim);
}

double mean_value(const PeriodicCoefficient1D& a, std::size_t quad_points)
{
    if (quad_points < 2)
        throw InvalidArgument("mean_value needs at least 2 quadrature points");
    require_bounds(a.nu, a.mu);
    const double integral = quad::composite_gl8_breakpoints(
        guarded(a), 0.0, a.period, a.breakpoints, static_cast<int>(quad_points));
    return integral / a.period;
}

double harmonic_mean(const PeriodicCoefficient1D& a, std::size_t quad_points)
{
    if (quad_points < 2)
        throw InvalidArgument("harmonic_mean needs at least 2 quadrature points");
    require_bounds(a.nu, a.mu);
    const auto g = guarded(a);
    const double integral = quad::composite_gl8_breakpoints(
        [&g](double y) { return 1.0 / g(y); }, 0.0, a.period, a.breakpoints,
        static_cast<int>(quad_points));
    return a.period / integral;
}

Corrector1D corrector_1d(const PeriodicCoefficient1D& a, std::size_t grid_points)
{
    if (grid_points < 3)
        throw InvalidArgument("corrector_1d needs at least 3 grid cells");
    require_bounds(a.nu, a.mu);
    const auto g = guarded(a);
    const auto inv = [&g](double y) { return 1.0 / g(y); };

    const double h = a.period / static_cast<double>(grid_points);
    Corrector1D out;
    out.grid.resize(grid_points + 1);
    out.chi.resize(grid_points + 1);
    for (std::size_t i = 0; i <= grid_points; ++i)
        out.grid[i] = a.period * static_cast<double>(i) / static_cast<double>(grid_points);

    // cumulative integral of 1/a, cell by cell, splitting at any breakpoint
    // that falls inside a cell so laminates integrate exactly
    std::vector<double> cum(grid_points + 1, 0.0);
    std::size_t next_break = 0;
    for (std::size_t i = 0; i < grid_points; ++i) {
        const double y0 = out.grid[i], y1 = out.grid[i + 1];
        double piece = 0.0;
        double left = y0;
        while (next_break < a.breakpoints.size() && a.breakpoints[next_break] <= y1) {
            const double b = a.breakpoints[next_break];
            if (b > left)
                piece += quad::gauss_legendre_8(inv, left, b);
            left = b;
            ++next_break;
        }
        if (y1 > left)
            piece += quad::gauss_legendre_8(inv, left, y1);
        cum[i + 1] = cum[i] + piece;
    }

    out.a0 = a.period / cum[grid_points];
    for (std::size_t i = 0; i <= grid_points; ++i)
        out.chi[i] = out.grid[i] - out.a0 * cum[i];

    // zero the trapezoid mean; the constant never influences the tensor
    double mean = 0.0;
    for (std::size_t i = 0; i < grid_points; ++i)
        mean += 0.5 * (out.chi[i] + out.chi[i + 1]) * h;
    mean /= a.period;
    out.c0 = -mean;
    for (double& c : out.chi)
        c += out.c0;
    return out;
}

HomogenizedTensor homogenize_layered(const LayeredMatrix& A, std::size_t quad_points)
{
    if (quad_points < 2)
        throw InvalidArgument("homogenize_layered needs at least 2 quadrature points");
    validate_layered(A);
    const auto n = static_cast<std::size_t>(A.dim);
    const auto& e = A.entry;

    HomogenizedTensor T;
    T.dim = A.dim;
    T.nu = A.nu;
    T.mu = A.mu;

    const double inv_mean = layered_mean(
        A, [&e](double y) { return 1.0 / e[0][0](y); }, quad_points);
    const double a11 = 1.0 / inv_mean;
    T.entries[0][0] = a11;

    // first row / column: harmonic-weighted means
    std::array<double, 3> row_mean{};
    for (std::size_t j = 1; j < n; ++j) {
        row_mean[j] = layered_mean(
            A, [&e, j](double y) { return e[0][j](y) / e[0][0](y); }, quad_points);
        T.entries[0][j] = T.entries[j][0] = a11 * row_mean[j];
    }

    // lower block: rank-one coupling through the first row plus the mean of
    // the Schur-complement-style remainder
    for (std::size_t i = 1; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double rem = layered_mean(
                A,
                [&e, i, j](double y) {
                    return e[i][j](y) - e[0][j](y) * e[i][0](y) / e[0][0](y);
                },
                quad_points);
            T.entries[i][j] = T.entries[j][i] = a11 * row_mean[i] * row_mean[j] + rem;
        }
    }

    const auto eig = T.eigenvalues();
    const double slack = 1e-8 * A.mu;
    if (eig[0] < A.nu - slack || eig[static_cast<std::size_t>(A.dim - 1)] > A.mu + slack)
        throw EllipticityViolation("homogenized tensor eigenvalues [" + std::to_string(eig[0]) +
                                   ", " + std::to_string(eig[static_cast<std::size_t>(A.dim - 1)]) +
                                   "] leave the declared band [" + std::to_string(A.nu) + ", " +
                                   std::to_string(A.mu) + "]");
    return T;
}

double verify_against_definition(const LayeredMatrix& A, const HomogenizedTensor& tensor,
                                 std::size_t grid_points)
{
    validate_layered(A);
    if (tensor.dim != A.dim)
        throw InvalidArgument("tensor dimension does not match the laminate");
    const auto n = static_cast<std::size_t>(A.dim);
    const auto& e = A.entry;
    const int panels = std::max(1, static_cast<int>(grid_points / 8));

    // deliberately breakpoint-blind quadrature: an independent evaluation
    // path whose only shared input is the sampler itself
    const auto naive_mean = [&](const quad::Integrand& f) {
        return quad::composite_gl8(f, 0.0, A.period, panels) / A.period;
    };

    const double a11 = 1.0 / naive_mean([&e](double y) { return 1.0 / e[0][0](y); });
    std::array<double, 3> row_mean{};
    for (std::size_t j = 1; j < n; ++j)
        row_mean[j] =
            naive_mean([&e, j](double y) { return e[0][j](y) / e[0][0](y); });

    double worst = 0.0;
    for (std::size_t col = 0; col < n; ++col) {
        for (std::size_t i = 0; i < n; ++i) {
            double flux_mean;
            if (col == 0) {
                // grad w_{e1} = (a11* / a11(y), 0, ...)
                flux_mean = naive_mean(
                    [&e, i, a11](double y) { return e[i][0](y) * a11 / e[0][0](y); });
            } else {
                // grad w_{ej} has first slot (a11* row_mean_j - a1j)/a11, 1 in slot j
                flux_mean = naive_mean([&e, i, col, a11, &row_mean](double y) {
                    const double g1 = (a11 * row_mean[col] - e[0][col](y)) / e[0][0](y);
                    return e[i][0](y) * g1 + e[i][col](y);
                });
            }
            worst = std::max(worst, std::fabs(flux_mean - tensor.entries[i][col]));
        }
    }
    return worst;
}

PeriodicCoefficient1D oscillate(const PeriodicCoefficient1D& a, double epsilon)
{
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw InvalidArgument("oscillate requires epsilon > 0");
    PeriodicCoefficient1D out;
    out.period = epsilon * a.period;
    out.nu = a.nu;
    out.mu = a.mu;
    out.sampler = [base = a.sampler, epsilon, p = a.period](double x) {
        return base(reduce_periodic(x / epsilon, p));
    };
    out.breakpoints.reserve(a.breakpoints.size());
    for (double b : a.breakpoints)
        out.breakpoints.push_back(epsilon * b);
    return out;
}

} // namespace subdiff::cell
