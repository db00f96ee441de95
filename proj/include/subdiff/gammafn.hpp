#pragma once

namespace subdiff::mlf {

/// Gamma function via a Lanczos approximation, reflected for x < 0.5.
/// At non-positive integers the reflection divides by sin(pi x) = 0 and the
/// result is +-inf, matching the pole.
double gamma_fn(double x);

/// 1/Gamma(x), defined as exactly 0 at the poles x = 0, -1, -2, ...
/// (Entire function; the asymptotic Mittag-Leffler expansion relies on the
/// zero value when its term index lands on a pole.)
double reciprocal_gamma(double x);

/// sin(pi*x) with argument reduction done on x itself, so large or
/// near-integer x do not lose accuracy to pi-rounding. Exact zeros at integers.
double sin_pi(double x);

/// cos(pi*x) via sin_pi(0.5 - x); exact zeros at half-integers.
double cos_pi(double x);

} // namespace subdiff::mlf
