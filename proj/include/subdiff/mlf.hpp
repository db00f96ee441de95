#pragma once

#include "subdiff/gammafn.hpp"

namespace subdiff::mlf {

/// Order parameters of E_{alpha,beta}. alpha in (0, 1], beta defaults to 1.
struct MlfOrder {
    double alpha;
    double beta = 1.0;
};

struct SeriesOptions {
    double tol = 1e-12;  // next-term stop: |term| < tol * (1 + |sum|)
    int max_terms = 500;
};

/// Power series sum_{k>=0} z^k / Gamma(alpha k + beta).
/// Intended for |z| below the series radius of the hybrid evaluator (5.0);
/// larger |z| may still converge but loses digits to cancellation for z < 0.
/// Throws NonConvergence when max_terms is exhausted.
double ml_series(MlfOrder order, double z, const SeriesOptions& opt = {});

struct AsymptoticValue {
    double value;
    double error_estimate;  // magnitude of the first omitted term
};

/// Truncated large-argument expansion of E_alpha(-x), x > 0:
///   sum_{k=1}^{K} (-1)^{k+1} x^{-k} / Gamma(1 - alpha k)
/// Terms whose Gamma argument is a non-positive integer vanish identically.
/// The error estimate is the magnitude of term K+1; note it understates the
/// true error when that term sits next to a Gamma pole (use neighbouring
/// terms as a sanity check in that case).
AsymptoticValue ml_asymptotic(double alpha, double x, int k_terms);

/// E_alpha(-x) for 0 < alpha < 1, x > 0, via the completely monotone
/// spectral representation
///   E_alpha(-x) = sin(a pi)/(a pi) *
///                 int_0^inf exp(-(u x)^(1/a)) / ((u + cos(a pi))^2 + sin(a pi)^2) du.
/// Accurate over the mid-range where both the power series (cancellation)
/// and the asymptotic expansion (truncation floor) fall short.
double ml_integral(double alpha, double x);

/// Hybrid evaluator of E_{alpha}(z) for z <= 0 (and small z > 0), beta = 1.
///   alpha == 1            -> exp(z)
///   |z| small             -> power series (with a cancellation guard)
///   |z| mid-range         -> spectral integral
///   |z| large             -> asymptotic expansion (integral fallback when
///                            its truncation floor is too high)
/// Relative accuracy target 1e-10 on z in [-1e8, 0], alpha in [0.1, 1].
/// Throws UnsupportedRange for z above the series radius (growing branch)
/// and InvalidArgument for alpha outside (0, 1] or beta != 1.
double ml(MlfOrder order, double z);

/// Convenience overload, beta = 1.
inline double ml(double alpha, double z)
{
    return ml(MlfOrder{alpha, 1.0}, z);
}

} // namespace subdiff::mlf
