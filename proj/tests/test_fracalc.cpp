#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "subdiff/errors.hpp"
#include "subdiff/fracalc.hpp"
#include "subdiff/gammafn.hpp"

using subdiff::GridMismatch;
using subdiff::InvalidArgument;
using subdiff::fracalc::L1Stencil;
using subdiff::fracalc::TimeGrid;
using subdiff::fracalc::caputo_l1;
using subdiff::fracalc::rl_integral;
using subdiff::fracalc::verify_inverse_pair;

namespace {

std::vector<double> sample(const TimeGrid& grid, double (*f)(double))
{
    std::vector<double> v(grid.nodes());
    for (std::size_t j = 0; j < v.size(); ++j)
        v[j] = f(grid.node(j));
    return v;
}

double ls_slope_loglog(const std::vector<double>& taus, const std::vector<double>& errs)
{
    const std::size_t n = taus.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = std::log(taus[i]);
        const double y = std::log(errs[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double nd = static_cast<double>(n);
    return (nd * sxy - sx * sy) / (nd * sxx - sx * sx);
}

} // namespace

TEST_CASE("time grid exposes uniform nodes")
{
    const TimeGrid g(2.0, 8);
    CHECK(g.tau == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(g.nodes() == 9);
    CHECK(g.node(0) == 0.0);
    CHECK(g.node(8) == 2.0); // endpoint hit exactly, no drift
    CHECK(g.node(3) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK_THROWS_AS(TimeGrid(0.0, 4), InvalidArgument);
    CHECK_THROWS_AS(TimeGrid(1.0, 0), InvalidArgument);
}

TEST_CASE("L1 weights start at one and decrease strictly")
{
    for (double alpha : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const L1Stencil s = L1Stencil::make(alpha, 4096);
        INFO("alpha = ", alpha);
        CHECK(s.weights[0] == 1.0);
        for (std::size_t j = 1; j < s.weights.size(); ++j) {
            REQUIRE(s.weights[j] > 0.0);
            REQUIRE(s.weights[j] < s.weights[j - 1]);
        }
    }
    // closed form for the second weight at alpha = 1/2
    const L1Stencil s = L1Stencil::make(0.5, 2);
    CHECK(s.weights[1] == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-15));
    CHECK_THROWS_AS(L1Stencil::make(1.0, 4), InvalidArgument);
    CHECK_THROWS_AS(L1Stencil::make(0.0, 4), InvalidArgument);
}

TEST_CASE("rl_integral of a constant is exact at every node")
{
    // (J^beta 1)(t) = t^beta / Gamma(beta + 1); the product quadrature
    // reproduces it to rounding because constants are piecewise linear
    const TimeGrid g(1.0, 40);
    const std::vector<double> ones(g.nodes(), 1.0);
    for (double beta : {0.25, 0.5, 0.75, 1.0}) {
        const auto out = rl_integral(ones, g, beta);
        CHECK(out[0] == 0.0);
        for (std::size_t j = 1; j <= g.steps; ++j) {
            const double t = g.node(j);
            const double want =
                std::pow(t, beta) * subdiff::mlf::reciprocal_gamma(beta + 1.0);
            INFO("beta = ", beta, ", j = ", j);
            REQUIRE(out[j] == doctest::Approx(want).epsilon(1e-13));
        }
    }
    // the half-integral of 1 at t = 1 is 2/sqrt(pi)
    const auto half = rl_integral(ones, g, 0.5);
    CHECK(half[40] == doctest::Approx(1.1283791670955126).epsilon(1e-14));
}

TEST_CASE("rl_integral annihilates zero input and integrates t exactly at beta = 1")
{
    const TimeGrid g(3.0, 17);
    const std::vector<double> zeros(g.nodes(), 0.0);
    for (double z : rl_integral(zeros, g, 0.6))
        CHECK(z == 0.0);

    const auto v = sample(g, +[](double t) { return t; });
    const auto out = rl_integral(v, g, 1.0);
    for (std::size_t j = 0; j <= g.steps; ++j) {
        const double t = g.node(j);
        CHECK(out[j] == doctest::Approx(0.5 * t * t).epsilon(1e-13));
    }
}

TEST_CASE("rl_integral validates its inputs")
{
    const TimeGrid g(1.0, 8);
    std::vector<double> wrong(g.nodes() + 1, 0.0);
    CHECK_THROWS_AS(rl_integral(wrong, g, 0.5), GridMismatch);
    const std::vector<double> ok(g.nodes(), 0.0);
    CHECK_THROWS_AS(rl_integral(ok, g, 0.0), InvalidArgument);
    CHECK_THROWS_AS(rl_integral(ok, g, 1.5), InvalidArgument);
}

TEST_CASE("caputo_l1 of a constant vanishes identically")
{
    const TimeGrid g(2.0, 25);
    const std::vector<double> v(g.nodes(), 3.7);
    for (double d : caputo_l1(v, g, 0.4))
        CHECK(d == 0.0);
}

TEST_CASE("caputo_l1 reproduces the derivative of t exactly")
{
    // For linear input the L1 difference quotients are exact, the weight sum
    // telescopes, and the result equals t^{1-alpha}/Gamma(2-alpha) to rounding.
    for (double alpha : {0.3, 0.5, 0.8}) {
        const TimeGrid g(1.0, 40);
        const auto v = sample(g, +[](double t) { return t; });
        const auto out = caputo_l1(v, g, alpha);
        for (std::size_t j = 1; j <= g.steps; ++j) {
            const double t = g.node(j);
            const double want = std::pow(t, 1.0 - alpha) *
                                subdiff::mlf::reciprocal_gamma(2.0 - alpha);
            INFO("alpha = ", alpha, ", j = ", j);
            REQUIRE(out[j] == doctest::Approx(want).epsilon(1e-12));
        }
    }
}

TEST_CASE("caputo_l1 on t^2 converges at order 2 - alpha")
{
    // truncation error for C^2 inputs is O(tau^{2-alpha}); measure the
    // empirical slope on the analytic target 2 t^{2-alpha}/Gamma(3-alpha)
    for (double alpha : {0.3, 0.5, 0.7}) {
        std::vector<double> taus, errs;
        for (std::size_t M : {64u, 128u, 256u, 512u}) {
            const TimeGrid g(1.0, M);
            const auto v = sample(g, +[](double t) { return t * t; });
            const auto out = caputo_l1(v, g, alpha);
            const double c = 2.0 * subdiff::mlf::reciprocal_gamma(3.0 - alpha);
            double err = 0.0;
            for (std::size_t j = 1; j <= g.steps; ++j)
                err = std::max(err,
                               std::fabs(out[j] - c * std::pow(g.node(j), 2.0 - alpha)));
            taus.push_back(g.tau);
            errs.push_back(err);
        }
        const double slope = ls_slope_loglog(taus, errs);
        INFO("alpha = ", alpha, ", slope = ", slope);
        CHECK(slope == doctest::Approx(2.0 - alpha).epsilon(0.15 / (2.0 - alpha)));
    }
}

TEST_CASE("caputo_l1 is linear in its input")
{
    const TimeGrid g(1.5, 33);
    std::mt19937 rng(421);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    std::vector<double> v(g.nodes()), w(g.nodes()), mix(g.nodes());
    const double a = 1.7, b = -0.4;
    for (std::size_t j = 0; j < g.nodes(); ++j) {
        v[j] = dist(rng);
        w[j] = dist(rng);
        mix[j] = a * v[j] + b * w[j];
    }
    const auto dv = caputo_l1(v, g, 0.6);
    const auto dw = caputo_l1(w, g, 0.6);
    const auto dm = caputo_l1(mix, g, 0.6);
    for (std::size_t j = 0; j < g.nodes(); ++j)
        CHECK(dm[j] == doctest::Approx(a * dv[j] + b * dw[j]).epsilon(1e-11));
}

TEST_CASE("integral and derivative invert each other on refined grids")
{
    // v = t: defect halves with the step (first-order contraction)
    const auto linear = +[](double t) { return t; };
    const TimeGrid g64(1.0, 64), g128(1.0, 128);
    const double d64 = verify_inverse_pair(0.5, g64, sample(g64, linear));
    const double d128 = verify_inverse_pair(0.5, g128, sample(g128, linear));
    CHECK(d64 > 0.0);
    const double ratio = std::log2(d64 / d128);
    CHECK(ratio > 0.9);
    CHECK(ratio < 1.6);

    // constant input: both operators kill it, defect is exactly zero
    const TimeGrid g32(1.0, 32);
    const std::vector<double> c(g32.nodes(), 3.7);
    CHECK(verify_inverse_pair(0.4, g32, c) == 0.0);

    // smooth oscillatory input stays well under 1e-2 at M = 256
    const TimeGrid g256(1.0, 256);
    const double ds = verify_inverse_pair(0.7, g256, sample(g256, +[](double t) {
                                              return std::sin(t);
                                          }));
    CHECK(ds < 1e-2);
    CHECK(ds > 0.0);
}
