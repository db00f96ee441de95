#include "doctest.h"

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "subdiff/cell.hpp"
#include "subdiff/errors.hpp"
#include "subdiff/forward.hpp"
#include "subdiff/fracalc.hpp"
#include "subdiff/mlf.hpp"
#include "subdiff/quadrature.hpp"

using subdiff::CoefficientOutOfBounds;
using subdiff::EllipticityViolation;
using subdiff::GridMismatch;
using subdiff::InvalidArgument;
using subdiff::OutOfDomain;
using subdiff::forward::CylinderDomain;
using subdiff::forward::FdmProblem;
using subdiff::forward::Field;
using subdiff::forward::IntervalDomain;
using subdiff::forward::ModeCoeff;
using subdiff::forward::dirichlet_eigs;
using subdiff::forward::fdm_solve;
using subdiff::forward::l2_space_time_distance;
using subdiff::forward::layered_decay;
using subdiff::forward::observe_point;
using subdiff::forward::observe_point2;
using subdiff::forward::observe_region;
using subdiff::forward::observe_region2;
using subdiff::forward::observe_trace;
using subdiff::forward::project_initial;
using subdiff::forward::reduce_layered_to_1d;
using subdiff::forward::sample_field;
using subdiff::forward::spectral_solve;
using subdiff::forward::spectral_solve_layered;
using subdiff::fracalc::TimeGrid;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kSqrt2OverPi = 0.7978845608028654057;

// point value sqrt(2/pi) * E_{1/2}(-1) of the single-mode solution at
// (pi/2, 1); the Mittag-Leffler factor equals e * erfc(1)
constexpr double kPointAnchor = 0.34116233386759460;

// time integral of E_{1/2}(-sqrt(t)) over (0, 1)
constexpr double kTimeIntegralAnchor = 0.5559627432513196;

// full space-time mass of the same solution: 2 sqrt(2/pi) * time integral
constexpr double kRegionAnchor = 0.8871881784436706;

IntervalDomain unit_pi() { return IntervalDomain{kPi}; }

// uniform FDM-vs-series error over the grid nodes restricted to t >= t_min
double series_gap(const Field& f, double p, double alpha, double t_min)
{
    double worst = 0.0;
    for (std::size_t m = 0; m < f.values.size(); ++m) {
        const double t = f.grid.node(m);
        if (t < t_min)
            continue;
        const double factor = subdiff::mlf::ml(alpha, -p * std::pow(t, alpha));
        for (std::size_t j = 0; j < f.x.size(); ++j)
            worst = std::max(worst, std::fabs(f.values[m][j] - factor * std::sin(f.x[j])));
    }
    return worst;
}

FdmProblem plain_problem(double p)
{
    FdmProblem prob;
    prob.domain = unit_pi();
    prob.diffusion = [p](double) { return p; };
    prob.nu = 0.5;
    prob.mu = 4.0;
    prob.initial = [](double x) { return std::sin(x); };
    return prob;
}

double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys)
{
    const auto n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace

TEST_CASE("dirichlet eigenpairs of the interval laplacian")
{
    const auto eigs = dirichlet_eigs(unit_pi(), 4);
    REQUIRE(eigs.size() == 4);
    CHECK(eigs[0].index == 1);
    CHECK(eigs[0].lambda == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(eigs[2].lambda == doctest::Approx(9.0).epsilon(1e-14));
    CHECK(eigs[0](kPi / 2.0) == doctest::Approx(kSqrt2OverPi).epsilon(1e-14));
    CHECK(eigs[0](0.0) == doctest::Approx(0.0));
    CHECK(eigs[0](kPi) == doctest::Approx(0.0).epsilon(1e-12));

    // L^2 normalization, checked by quadrature
    for (const auto& e : eigs) {
        const double mass = subdiff::quad::composite_gl8(
            [&](double x) { return e(x) * e(x); }, 0.0, kPi, 64);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    }

    // a different length rescales the spectrum: lambda_1 = (pi / 2)^2 on (0, 2)
    const auto half = dirichlet_eigs(IntervalDomain{2.0}, 1);
    CHECK(half[0].lambda == doctest::Approx(2.4674011002723395).epsilon(1e-14));
    CHECK(half[0].wavenumber == doctest::Approx(kPi / 2.0).epsilon(1e-14));

    CHECK_THROWS_AS(dirichlet_eigs(unit_pi(), 0), InvalidArgument);
    CHECK_THROWS_AS(dirichlet_eigs(IntervalDomain{-1.0}, 3), InvalidArgument);
}

TEST_CASE("single-mode relaxation matches the scalar Mittag-Leffler factor")
{
    // u0 = phi_1, p = 1, alpha = 1/2: u(x, t) = E_{1/2}(-sqrt(t)) phi_1(x)
    const std::vector<double> c1{1.0};
    const auto u = spectral_solve(unit_pi(), 1.0, 0.5, c1);
    REQUIRE(u.modes.size() == 1);
    CHECK(u.modes[0].decay == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(u(kPi / 2.0, 1.0) == doctest::Approx(kPointAnchor).epsilon(1e-12));
    CHECK(u(kPi / 2.0, 0.0) == doctest::Approx(kSqrt2OverPi).epsilon(1e-13));

    // independent oracle for the factor: E_{1/2}(-1) = e * erfc(1)
    const double factor = std::exp(1.0) * std::erfc(1.0);
    CHECK(u(kPi / 2.0, 1.0) == doctest::Approx(factor * kSqrt2OverPi).epsilon(1e-12));

    // no initial data: the solution vanishes identically
    const auto zero = spectral_solve(unit_pi(), 1.0, 0.5, std::vector<double>{});
    CHECK(zero.modes.empty());
    CHECK(zero(0.7, 0.3) == 0.0);

    // alpha = 1 reduces every factor to a plain exponential
    const std::vector<double> c2{0.0, 1.0};
    const auto classical = spectral_solve(unit_pi(), 2.0, 1.0, c2);
    for (double t : {0.1, 0.5, 1.0, 2.0}) {
        const double expect = std::exp(-8.0 * t) * kSqrt2OverPi * std::sin(2.0 * (kPi / 4.0));
        CHECK(classical(kPi / 4.0, t) == doctest::Approx(expect).epsilon(1e-12));
    }

    // coefficient validation against the declared band
    CHECK_THROWS_AS(spectral_solve(unit_pi(), 0.0, 0.5, c1, 8, 0.5, 4.0),
                    CoefficientOutOfBounds);
    CHECK_THROWS_AS(spectral_solve(unit_pi(), 9.0, 0.5, c1, 8, 0.5, 4.0),
                    CoefficientOutOfBounds);
    CHECK_THROWS_AS(spectral_solve(unit_pi(), 1.0, 1.5, c1), InvalidArgument);

    // coefficients beyond n_max are not silently ignored: they feed the tail bound
    const std::vector<double> c4{1.0, 0.0, 0.0, 0.5};
    const auto truncated = spectral_solve(unit_pi(), 1.0, 0.5, c4, 2);
    CHECK(truncated.modes.size() == 1);
    CHECK(truncated.tail_bound ==
          doctest::Approx(0.5 * kSqrt2OverPi).epsilon(1e-14));
}

TEST_CASE("layered relaxation rates and the cylinder solution")
{
    CylinderDomain box;
    box.delta = kPi;
    box.transverse = {kPi};

    // rate p Lambda_n + b (m pi / L)^2 with unit lengths pi: p n^2 + b m^2
    const std::array<int, 1> m11{1};
    CHECK(layered_decay(box, 1.0, std::array{1.0}, 1, m11) ==
          doctest::Approx(2.0).epsilon(1e-14));
    const std::array<int, 1> m1{1};
    CHECK(layered_decay(box, 2.0, std::array{3.0}, 2, m1) ==
          doctest::Approx(11.0).epsilon(1e-14));
    CHECK_THROWS_AS(layered_decay(box, 1.0, std::array{1.0}, 0, m11), InvalidArgument);

    // one separable mode: u = E_{1/2}(-2 sqrt(t)) phi_1(x1) phi_1(x2), and
    // E_{1/2}(-2) = e^4 erfc(2) gives an independent libm oracle
    const std::vector<ModeCoeff> one{{1, {1, 0}, 1.0}};
    const auto u = spectral_solve_layered(box, 1.0, std::array{1.0}, 0.5, one);
    CHECK(u.dims == 2);
    const double oracle = std::exp(4.0) * std::erfc(2.0) * (2.0 / kPi);
    CHECK(u(kPi / 2.0, kPi / 2.0, 1.0) == doctest::Approx(oracle).epsilon(1e-11));
    CHECK(u(0.0, kPi / 2.0, 1.0) == doctest::Approx(0.0));

    // modes come back sorted by decay, slowest first
    std::vector<ModeCoeff> grid;
    for (int n = 1; n <= 8; ++n)
        for (int m = 1; m <= 8; ++m)
            grid.push_back({n, {m, 0}, 1.0});
    const auto full = spectral_solve_layered(box, 1.5, std::array{1.0}, 0.5, grid);
    REQUIRE(full.modes.size() == 64);
    CHECK(full.modes.front().index[0] == 1);
    CHECK(full.modes.front().index[1] == 1);
    CHECK(full.modes.front().decay == doctest::Approx(2.5).epsilon(1e-14));
    for (std::size_t i = 1; i < full.modes.size(); ++i)
        CHECK(full.modes[i].decay >= full.modes[i - 1].decay);

    // a one-dimensional evaluation of a layered solution is rejected
    CHECK_THROWS_AS(u(0.5, 0.5), InvalidArgument);
}

TEST_CASE("projection of initial data onto the eigenbasis")
{
    // u0 = -sin(pi x) on (0, 1) is exactly -sqrt(2)/2 times the first mode
    const IntervalDomain unit{1.0};
    const auto coeffs =
        project_initial(unit, [](double x) { return -std::sin(kPi * x); }, 8);
    REQUIRE(coeffs.size() == 8);
    CHECK(coeffs[0] == doctest::Approx(-0.7071067811865476).epsilon(1e-12));
    for (std::size_t n = 1; n < coeffs.size(); ++n)
        CHECK(std::fabs(coeffs[n]) < 1e-12);

    // round trip: a finite combination projects back to its own coefficients
    const auto eigs = dirichlet_eigs(unit_pi(), 3);
    const auto mixed = project_initial(
        unit_pi(), [&](double x) { return 0.3 * eigs[0](x) - 0.2 * eigs[2](x); }, 5);
    CHECK(mixed[0] == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(std::fabs(mixed[1]) < 1e-12);
    CHECK(mixed[2] == doctest::Approx(-0.2).epsilon(1e-12));
    CHECK(std::fabs(mixed[3]) < 1e-12);

    CHECK_THROWS_AS(project_initial(unit, nullptr, 4), InvalidArgument);
}

TEST_CASE("implicit stepping reproduces the eigen-series solution")
{
    // one mode, constant coefficient: away from the startup transient the
    // discrete solution tracks the series to about half a part in a thousand
    const auto f = fdm_solve(plain_problem(1.0), 256, TimeGrid(1.0, 256), 0.5);
    CHECK(!f.under_resolved);
    CHECK(series_gap(f, 1.0, 0.5, 0.5) < 1e-3);

    // the first steps carry the known weight-singularity error; it stays bounded
    CHECK(series_gap(f, 1.0, 0.5, 0.0) < 5e-2);

    // zero data propagates exactly: every entry is identically zero
    auto quiet = plain_problem(1.0);
    quiet.initial = [](double) { return 0.0; };
    const auto z = fdm_solve(quiet, 32, TimeGrid(1.0, 16), 0.5);
    for (const auto& row : z.values)
        for (double v : row)
            CHECK(v == 0.0);

    // alpha near one: the classical single-mode heat solution is recovered
    const auto g = fdm_solve(plain_problem(1.0), 128, TimeGrid(1.0, 128), 0.999);
    double worst = 0.0;
    for (std::size_t m = 0; m < g.values.size(); ++m) {
        const double t = g.grid.node(m);
        for (std::size_t j = 0; j < g.x.size(); ++j)
            worst = std::max(worst,
                             std::fabs(g.values[m][j] - std::exp(-t) * std::sin(g.x[j])));
    }
    CHECK(worst < 1e-2);

    // diffusion samples outside the declared band are an ellipticity violation
    auto bad = plain_problem(1.0);
    bad.diffusion = [](double) { return 9.0; };
    CHECK_THROWS_AS(fdm_solve(bad, 32, TimeGrid(1.0, 8), 0.5), EllipticityViolation);
    auto negq = plain_problem(1.0);
    negq.reaction = [](double) { return -0.1; };
    CHECK_THROWS_AS(fdm_solve(negq, 32, TimeGrid(1.0, 8), 0.5), InvalidArgument);
    CHECK_THROWS_AS(fdm_solve(plain_problem(1.0), 32, TimeGrid(1.0, 8), 1.0),
                    InvalidArgument);
}

TEST_CASE("temporal accuracy of the stepping scheme at high order")
{
    // at alpha = 0.9 the late-time error contracts with order close to 2 - alpha;
    // the guard asserts at least 2 - alpha - 0.2
    std::vector<double> errs;
    for (std::size_t n : {32u, 64u, 128u, 256u}) {
        const auto f = fdm_solve(plain_problem(1.0), n, TimeGrid(1.0, n), 0.9);
        errs.push_back(series_gap(f, 1.0, 0.9, 0.5));
    }
    for (std::size_t i = 1; i < errs.size(); ++i) {
        CHECK(errs[i] < errs[i - 1]);
        const double order = std::log2(errs[i - 1] / errs[i]);
        CHECK(order >= 2.0 - 0.9 - 0.2);
    }
}

TEST_CASE("comparison principle and sign preservation")
{
    // nonpositive data stays nonpositive, and a larger diffusion coefficient
    // relaxes the (negative) solution faster, so u_p >= u_q pointwise
    const std::vector<double> c{-std::sqrt(kPi / 2.0)}; // u0 = -sin x
    const auto up = spectral_solve(unit_pi(), 2.0, 0.5, c);
    const auto uq = spectral_solve(unit_pi(), 1.0, 0.5, c);
    for (int i = 0; i <= 100; ++i) {
        const double x = kPi * i / 100.0;
        for (int k = 0; k <= 100; ++k) {
            const double t = 1.0 * k / 100.0;
            const double a = up(x, t);
            const double b = uq(x, t);
            CHECK(a >= b - 1e-8);
            CHECK(a <= 1e-12);
            CHECK(b <= 1e-12);
        }
    }

    // same ordering for the discrete solver on a shared grid
    auto neg = plain_problem(1.0);
    neg.initial = [](double x) { return -std::sin(x); };
    auto neg2 = neg;
    neg2.diffusion = [](double) { return 2.0; };
    const TimeGrid grid(1.0, 100);
    const auto fq = fdm_solve(neg, 100, grid, 0.5);
    const auto fp = fdm_solve(neg2, 100, grid, 0.5);
    for (std::size_t m = 0; m < fq.values.size(); ++m)
        for (std::size_t j = 0; j < fq.x.size(); ++j) {
            CHECK(fp.values[m][j] >= fq.values[m][j] - 1e-8);
            CHECK(fp.values[m][j] <= 1e-12);
        }
}

TEST_CASE("algebraic long-time decay of the sup norm")
{
    // |u(pi/2, t)| ~ t^{-alpha} for large t: the log-log slope over [1, 100]
    // sits within 0.1 of -alpha
    for (double alpha : {0.4, 0.5, 0.7}) {
        const auto u = spectral_solve(unit_pi(), 1.0, alpha, std::vector<double>{1.0});
        std::vector<double> lt, lv;
        for (int i = 0; i < 20; ++i) {
            const double t = std::pow(10.0, 2.0 * i / 19.0); // 1 .. 100
            lt.push_back(std::log(t));
            lv.push_back(std::log(std::fabs(u(kPi / 2.0, t))));
        }
        const double slope = ls_slope(lt, lv);
        CHECK(std::fabs(slope + alpha) < 0.1);
    }
}

TEST_CASE("oscillating medium converges to its effective limit")
{
    // a(x / eps) with a(y) = 2 + sin(2 pi y): the distance to the constant
    // sqrt(3) solve shrinks roughly linearly in eps
    const auto a = subdiff::cell::PeriodicCoefficient1D::sinusoid(2.0, 1.0);
    const TimeGrid grid(1.0, 128);

    FdmProblem hom;
    hom.domain = IntervalDomain{1.0};
    hom.diffusion = [](double) { return std::sqrt(3.0); };
    hom.nu = 1.0;
    hom.mu = 3.0;
    hom.initial = [](double x) { return -std::sin(kPi * x); };
    const auto u0 = fdm_solve(hom, 128, grid, 0.5);

    std::vector<double> dist;
    for (double eps : {0.25, 0.125}) {
        auto osc = hom;
        osc.diffusion = subdiff::cell::oscillate(a, eps);
        osc.micro_period = eps;
        const auto ue = fdm_solve(osc, 128, grid, 0.5);
        CHECK(!ue.under_resolved);
        dist.push_back(l2_space_time_distance(ue, u0));
    }
    CHECK(dist[0] < 5e-3);
    CHECK(dist[1] < 2.5e-3);
    CHECK(dist[0] > 1.5 * dist[1]); // near-linear contraction in eps

    // a grid that cannot see the microstructure is flagged, not rejected
    auto coarse = hom;
    coarse.diffusion = subdiff::cell::oscillate(a, 1.0 / 32.0);
    coarse.micro_period = 1.0 / 32.0;
    const auto flagged = fdm_solve(coarse, 64, TimeGrid(1.0, 8), 0.5);
    CHECK(flagged.under_resolved);
    const auto fine = fdm_solve(coarse, 512, TimeGrid(1.0, 4), 0.5);
    CHECK(!fine.under_resolved);
}

TEST_CASE("transverse mode reduction of the layered problem")
{
    // inserting u = v(x1, t) sin(m pi x2 / L2) turns the transverse term into
    // the reaction q = a2 (m pi / L2)^2
    const auto red = reduce_layered_to_1d([](double) { return 1.3; },
                                          [](double) { return 2.0; }, 1, kPi);
    CHECK(red.diffusion(0.3) == doctest::Approx(1.3).epsilon(1e-14));
    CHECK(red.reaction(0.3) == doctest::Approx(2.0).epsilon(1e-14));
    const auto red2 = reduce_layered_to_1d([](double) { return 1.0; },
                                           [](double) { return 1.0; }, 3, kPi / 2.0);
    CHECK(red2.reaction(0.1) == doctest::Approx(36.0).epsilon(1e-13));

    CHECK_THROWS_AS(reduce_layered_to_1d([](double) { return 1.0; },
                                         [](double) { return 1.0; }, 0, kPi),
                    InvalidArgument);
    CHECK_THROWS_AS(reduce_layered_to_1d([](double) { return 1.0; },
                                         [](double) { return 1.0; }, 1, -1.0),
                    InvalidArgument);

    // the reduced 1D solve reproduces the separable mode factor: the layered
    // rate is p + q = 1.3 + 2 = 3.3 on (0, pi) with first-mode data
    FdmProblem prob;
    prob.domain = unit_pi();
    prob.diffusion = red.diffusion;
    prob.reaction = red.reaction;
    prob.nu = 0.5;
    prob.mu = 4.0;
    prob.initial = [](double x) { return std::sin(x); };
    const auto v = fdm_solve(prob, 256, TimeGrid(1.0, 256), 0.5);
    CHECK(series_gap(v, 3.3, 0.5, 0.5) < 1e-3);
}

TEST_CASE("space-time distance between sampled fields")
{
    const TimeGrid grid(1.0, 10);
    std::vector<double> xs;
    for (int j = 0; j <= 10; ++j)
        xs.push_back(j / 10.0);

    Field zero;
    zero.x = xs;
    zero.grid = grid;
    zero.values.assign(grid.nodes(), std::vector<double>(xs.size(), 0.0));
    Field one = zero;
    for (auto& row : one.values)
        for (double& v : row)
            v = 1.0;

    CHECK(l2_space_time_distance(zero, zero) == 0.0);
    // constant unit gap over the unit square integrates to exactly one
    CHECK(l2_space_time_distance(zero, one) == doctest::Approx(1.0).epsilon(1e-14));

    Field other = zero;
    other.x.push_back(1.1);
    for (auto& row : other.values)
        row.push_back(0.0);
    CHECK_THROWS_AS(l2_space_time_distance(zero, other), GridMismatch);
    Field later = zero;
    later.grid = TimeGrid(2.0, 10);
    CHECK_THROWS_AS(l2_space_time_distance(zero, later), GridMismatch);

    // sampling the series onto a grid agrees with direct evaluation
    const auto u = spectral_solve(unit_pi(), 1.0, 0.5, std::vector<double>{1.0});
    std::vector<double> nodes{0.0, kPi / 4.0, kPi / 2.0, 3.0 * kPi / 4.0, kPi};
    const auto sampled = sample_field(u, nodes, TimeGrid(1.0, 4));
    for (std::size_t m = 0; m < sampled.values.size(); ++m)
        for (std::size_t j = 0; j < nodes.size(); ++j)
            CHECK(sampled.values[m][j] ==
                  doctest::Approx(u(nodes[j], sampled.grid.node(m))).epsilon(1e-13));
}

TEST_CASE("point, window, and trace observations")
{
    const auto u = spectral_solve(unit_pi(), 1.0, 0.5, std::vector<double>{1.0});

    SUBCASE("series point and window values against frozen references")
    {
        CHECK(observe_point(u, kPi / 2.0, 1.0) ==
              doctest::Approx(kPointAnchor).epsilon(1e-12));
        CHECK(observe_region(u, 0.0, kPi, 0.0, 1.0) ==
              doctest::Approx(kRegionAnchor).epsilon(1e-9));

        const std::vector<double> times{0.25, 1.0, 4.0};
        const auto trace = observe_trace(u, kPi / 2.0, times);
        REQUIRE(trace.size() == 3);
        for (std::size_t i = 0; i < times.size(); ++i)
            CHECK(trace[i] == doctest::Approx(u(kPi / 2.0, times[i])).epsilon(1e-13));

        CHECK_THROWS_AS(observe_point(u, -0.1, 1.0), OutOfDomain);
        CHECK_THROWS_AS(observe_point(u, 4.0, 1.0), OutOfDomain);
        CHECK_THROWS_AS(observe_point(u, 1.0, -1.0), OutOfDomain);
        CHECK_THROWS_AS(observe_region(u, 1.0, 0.5, 0.0, 1.0), InvalidArgument);
    }

    SUBCASE("discrete fields observe by bilinear interpolation")
    {
        // values x * t are bilinear, so interpolation and integration are exact
        const TimeGrid grid(1.0, 4);
        Field f;
        for (int j = 0; j <= 4; ++j)
            f.x.push_back(j / 4.0);
        f.grid = grid;
        f.values.resize(grid.nodes());
        for (std::size_t m = 0; m < f.values.size(); ++m)
            for (double x : f.x)
                f.values[m].push_back(x * grid.node(m));

        CHECK(observe_point(f, 0.3, 0.7) == doctest::Approx(0.21).epsilon(1e-15));
        CHECK(observe_region(f, 0.25, 0.75, 0.5, 1.0) ==
              doctest::Approx(0.09375).epsilon(1e-15));
        const std::vector<double> times{0.0, 0.25, 1.0};
        const auto tr = observe_trace(f, 0.5, times);
        CHECK(tr[0] == doctest::Approx(0.0));
        CHECK(tr[1] == doctest::Approx(0.125).epsilon(1e-15));
        CHECK(tr[2] == doctest::Approx(0.5).epsilon(1e-15));

        CHECK_THROWS_AS(observe_point(f, 1.5, 0.5), OutOfDomain);
        CHECK_THROWS_AS(observe_point(f, 0.5, 2.0), OutOfDomain);

        // a zero field observes to zero in every mode
        Field z = f;
        for (auto& row : z.values)
            for (double& v : row)
                v = 0.0;
        CHECK(observe_point(z, 0.3, 0.7) == 0.0);
        CHECK(observe_region(z, 0.0, 1.0, 0.0, 1.0) == 0.0);
    }

    SUBCASE("layered solutions observe through both coordinates")
    {
        CylinderDomain box;
        box.delta = kPi;
        box.transverse = {kPi};
        // p = b = 1/2 puts the (1,1) rate at exactly one, matching the frozen
        // time integral of E_{1/2}(-sqrt(t))
        const std::vector<ModeCoeff> one{{1, {1, 0}, 1.0}};
        const auto w = spectral_solve_layered(box, 0.5, std::array{0.5}, 0.5, one,
                                              0.25, 2.0);
        const double point = std::exp(1.0) * std::erfc(1.0) * (2.0 / kPi);
        CHECK(observe_point2(w, kPi / 2.0, kPi / 2.0, 1.0) ==
              doctest::Approx(point).epsilon(1e-11));
        const double mass = (8.0 / kPi) * kTimeIntegralAnchor;
        CHECK(observe_region2(w, 0.0, kPi, 0.0, kPi, 0.0, 1.0) ==
              doctest::Approx(mass).epsilon(1e-9));

        CHECK_THROWS_AS(observe_point2(w, kPi / 2.0, 4.0, 1.0), OutOfDomain);
        CHECK_THROWS_AS(observe_point(w, kPi / 2.0, 1.0), InvalidArgument);
        CHECK_THROWS_AS(observe_point2(u, 0.5, 0.5, 1.0), InvalidArgument);
    }
}
