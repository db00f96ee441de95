#include "subdiff/quadrature.hpp"

#include "subdiff/errors.hpp"

#include <algorithm>
#include <cmath>

namespace subdiff::quad {

namespace {

// 8-point Gauss-Legendre nodes/weights on [-1, 1]
constexpr double kGl8X[4] = {
    0.1834346424956498049394761,
    0.5255324099163289858177390,
    0.7966664774136267395915539,
    0.9602898564975362316835609,
};
constexpr double kGl8W[4] = {
    0.3626837833783619829651504,
    0.3137066458778872873379622,
    0.2223810344533744705443560,
    0.1012285362903762591525314,
};

// Gauss-Kronrod 7/15 (QUADPACK dqk15 constants)
constexpr double kGkX[8] = {
    0.9914553711208126392068547,  // Kronrod
    0.9491079123427585245261897,  // Gauss
    0.8648644233597690727897128,  // Kronrod
    0.7415311855993944398638648,  // Gauss
    0.5860872354676911302941448,  // Kronrod
    0.4058451513773971669066064,  // Gauss
    0.2077849550078984676006894,  // Kronrod
    0.0,
};
constexpr double kGkWK[8] = {
    0.0229353220105292249637320,
    0.0630920926299785532907007,
    0.1047900103222501838398763,
    0.1406532597155259187451896,
    0.1690047266392679028265834,
    0.1903505780647854099132564,
    0.2044329400752988924141620,
    0.2094821410847278280129992,
};
constexpr double kGkWG[4] = {
    0.1294849661688696932706114,  // for +-kGkX[1]
    0.2797053914892766679014678,  // for +-kGkX[3]
    0.3818300505051189449503698,  // for +-kGkX[5]
    0.4179591836734693877551020,  // center
};

struct Gk15Eval {
    double kronrod;
    double err;
};

Gk15Eval gk15(const Integrand& f, double a, double b)
{
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * kGkX[i]);
        fv[14 - i] = f(c + h * kGkX[i]);
    }
    fv[7] = f(c);

    double resk = kGkWK[7] * fv[7];
    double resg = kGkWG[3] * fv[7];
    for (int i = 0; i < 7; ++i)
        resk += kGkWK[i] * (fv[i] + fv[14 - i]);
    for (int i = 0; i < 3; ++i) {
        const int j = 2 * i + 1;
        resg += kGkWG[i] * (fv[j] + fv[14 - j]);
    }
    resk *= h;
    resg *= h;

    // QUADPACK-style error sharpening
    double resabs = 0.0;
    for (int i = 0; i < 7; ++i)
        resabs += kGkWK[i] * (std::fabs(fv[i]) + std::fabs(fv[14 - i]));
    resabs = (resabs + kGkWK[7] * std::fabs(fv[7])) * std::fabs(h);
    double err = std::fabs(resk - resg);
    if (resabs > 0.0 && err > 0.0)
        err = resabs * std::min(1.0, std::pow(200.0 * err / resabs, 1.5));
    return {resk, err};
}

void adapt(const Integrand& f, double a, double b, double rel_tol, double abs_tol,
           int depth, AdaptiveResult& out)
{
    const Gk15Eval e = gk15(f, a, b);
    out.evaluations += 15;
    const double tol = std::max(abs_tol, rel_tol * std::fabs(e.kronrod));
    if (e.err <= tol || depth <= 0 || (b - a) < 1e-15 * (std::fabs(a) + std::fabs(b))) {
        out.value += e.kronrod;
        out.abs_error += e.err;
        if (e.err > tol && depth <= 0)
            out.converged = false;
        return;
    }
    const double m = 0.5 * (a + b);
    adapt(f, a, m, rel_tol, abs_tol * 0.5, depth - 1, out);
    adapt(f, m, b, rel_tol, abs_tol * 0.5, depth - 1, out);
}

} // namespace

double gauss_legendre_8(const Integrand& f, double a, double b)
{
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 4; ++i)
        s += kGl8W[i] * (f(c - h * kGl8X[i]) + f(c + h * kGl8X[i]));
    return s * h;
}

double composite_gl8(const Integrand& f, double a, double b, int panels)
{
    if (panels < 1)
        throw InvalidArgument("composite_gl8: panels must be >= 1");
    const double h = (b - a) / panels;
    double s = 0.0;
    for (int k = 0; k < panels; ++k)
        s += gauss_legendre_8(f, a + k * h, a + (k + 1) * h);
    return s;
}

double composite_gl8_breakpoints(const Integrand& f, double a, double b,
                                 std::span<const double> breaks, int target_points)
{
    if (!(b > a))
        throw InvalidArgument("composite_gl8_breakpoints: empty interval");
    std::vector<double> cuts{a};
    for (double c : breaks)
        if (c > a && c < b)
            cuts.push_back(c);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const double len = b - a;
    const int total_panels = std::max<int>(1, target_points / 8);
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i], hi = cuts[i + 1];
        const int n = std::max<int>(1, static_cast<int>(std::lround(total_panels * (hi - lo) / len)));
        s += composite_gl8(f, lo, hi, n);
    }
    return s;
}

AdaptiveResult adaptive_gk15(const Integrand& f, double a, double b,
                             double rel_tol, double abs_tol, int max_depth)
{
    AdaptiveResult out;
    if (a == b)
        return out;
    adapt(f, a, b, rel_tol, abs_tol, max_depth, out);
    return out;
}

AdaptiveResult adaptive_gk15_split(const Integrand& f, std::span<const double> points,
                                   double rel_tol, double abs_tol, int max_depth)
{
    AdaptiveResult out;
    if (points.size() < 2)
        throw InvalidArgument("adaptive_gk15_split: need at least two points");
    const double per_piece = abs_tol / static_cast<double>(points.size() - 1);
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        AdaptiveResult piece = adaptive_gk15(f, points[i], points[i + 1], rel_tol, per_piece, max_depth);
        out.value += piece.value;
        out.abs_error += piece.abs_error;
        out.evaluations += piece.evaluations;
        out.converged = out.converged && piece.converged;
    }
    return out;
}

} // namespace subdiff::quad
