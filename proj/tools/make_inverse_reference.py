#!/usr/bin/env python3
"""Independent reference values for the coefficient-recovery module.

Everything here is computed with mpmath at high precision, straight from the
defining formulas (no shared code with the C++ implementation).  The printed
values are frozen into tests/test_inverse.cpp.
"""

import mpmath as mp

mp.mp.dps = 40

PI = mp.pi
NORM = mp.sqrt(2 / PI)  # sqrt(2/pi), the L^2 normalization on (0, pi)


def ml(alpha, z):
    """E_{1/2}(z) for z <= 0 via the exact identity E_{1/2}(-y) = e^{y^2} erfc(y).

    Everything in this script evaluates the order-1/2 function only, so the
    closed form (independent of any series/integral representation) is the
    cleanest possible oracle.
    """
    assert alpha == mp.mpf("0.5") and z <= 0
    y = -z
    return mp.exp(y * y) * mp.erfc(y)


def h_point(p, alpha=mp.mpf("0.5"), x0=PI / 2, t0=mp.mpf(1)):
    """h(p) = u_p(x0, t0) for u0 = -phi_1 on (0, pi)."""
    return -ml(alpha, -p * t0**alpha) * NORM * mp.sin(x0)


def main():
    mp.mp.dps = 40

    print("== monotone point recovery, u0 = -phi_1, alpha = 1/2, (x0,t0) = (pi/2, 1) ==")
    for p in [mp.mpf("0.5"), mp.mpf(1), mp.mpf("1.7"), mp.mpf(3)]:
        print(f"h({p}) = {mp.nstr(h_point(p), 20)}")

    # slope by high-order numerical differentiation
    hp = mp.diff(h_point, mp.mpf("1.7"))
    print(f"h'(1.7) = {mp.nstr(hp, 20)}")
    print(f"1/h'(1.7) = {mp.nstr(1 / hp, 20)}")
    delta = mp.mpf("1e-4")
    print(f"2*delta/h'(1.7) with delta=1e-4: {mp.nstr(2 * delta / hp, 12)}")

    # bisection on h against the exact h(1.7): sanity that the root is 1.7
    target = h_point(mp.mpf("1.7"))
    lo, hi = mp.mpf("0.5"), mp.mpf(3)
    for _ in range(120):
        mid = (lo + hi) / 2
        if h_point(mid) < target:
            lo = mid
        else:
            hi = mid
    print(f"bisection root for h(1.7): {mp.nstr((lo + hi) / 2, 20)}")

    print()
    print("== asymptotic trace fit, u0 = phi_1, x0 = pi/2, alpha = 1/2 ==")
    # P_k(x0) = phi_1(x0) / lambda_1^k = sqrt(2/pi) for every k
    p1 = NORM
    print(f"P_1(pi/2) = {mp.nstr(p1, 20)}")
    pstar = mp.mpf("1.3")
    times = [mp.mpf(50) * (mp.mpf(10) ** (mp.mpf(i) / 59)) for i in range(60)]
    trace = [ml(mp.mpf("0.5"), -pstar * mp.sqrt(t)) * NORM for t in times]
    # least squares for A in y ~ A t^{-1/2}
    num = mp.fsum(y * t ** mp.mpf("-0.5") for y, t in zip(trace, times))
    den = mp.fsum(t ** mp.mpf(-1) for t in times)
    A = num / den
    phat = p1 / (mp.gamma(mp.mpf("0.5")) * A)
    print(f"A = {mp.nstr(A, 20)}")
    print(f"p_hat = {mp.nstr(phat, 20)}  rel err = {mp.nstr(abs(phat - pstar) / pstar, 8)}")
    # contamination: alpha = 1/2 kills k = 2 (Gamma(0) pole); first surviving is k = 3
    # term ratio |G(1-a)/G(1-3a)| * P_3/P_1 / (p^2 t^{2a}) at t = t_lo, p = nu = 0.5
    ratio = abs(mp.gamma(mp.mpf("0.5")) / mp.gamma(mp.mpf("-0.5"))) / (mp.mpf("0.25") * 50)
    print(f"k=3 contamination bound at p=0.5, t_lo=50: {mp.nstr(ratio, 10)}")
    ratio13 = abs(mp.gamma(mp.mpf("0.5")) / mp.gamma(mp.mpf("-0.5"))) / (pstar**2 * 50)
    print(f"k=3 contamination at p=1.3, t_lo=50: {mp.nstr(ratio13, 10)}")

    print()
    print("== counterexample: x0 = pi/3, (p, u0) = (1, phi_1) vs (1/4, phi_2) ==")
    x0 = PI / 3
    print(f"phi_1(pi/3) = {mp.nstr(NORM * mp.sin(x0), 20)}")
    print(f"phi_2(pi/3) = {mp.nstr(NORM * mp.sin(2 * x0), 20)}")
    print(f"phi_1(pi/4) = {mp.nstr(NORM * mp.sin(PI / 4), 20)}")
    print(f"phi_2(pi/4) = {mp.nstr(NORM * mp.sin(PI / 2), 20)}")
    # both traces are E_{1/2}(-sqrt(t)) * sqrt(2/pi) * sin(pi/3): decay rates
    # p * lambda_1 = 1 and q * lambda_2 = (1/4) * 4 = 1 coincide
    t = mp.mpf(3)
    up = ml(mp.mpf("0.5"), -mp.sqrt(t)) * NORM * mp.sin(x0)
    uq = ml(mp.mpf("0.5"), -mp.mpf(1) * mp.sqrt(t)) * NORM * mp.sin(2 * x0)
    print(f"trace gap at t=3: {mp.nstr(abs(up - uq), 8)}")

    print()
    print("== one-parameter family a(y; s) = s + sin(2 pi y) ==")
    for s in [mp.mpf(2), mp.mpf("2.5"), mp.mpf(3), mp.mpf(4)]:
        integral = mp.quad(lambda y: 1 / (s + mp.sin(2 * PI * y)), [0, 1])
        a0 = 1 / integral
        print(f"a0({s}) = {mp.nstr(a0, 20)}   sqrt(s^2-1) = {mp.nstr(mp.sqrt(s**2 - 1), 20)}")
    gap = mp.sqrt(8) - mp.sqrt(3)
    print(f"a0(3) - a0(2) = {mp.nstr(gap, 20)}")
    l1 = mp.quad(lambda y: abs((3 + mp.sin(2 * PI * y)) - (2 + mp.sin(2 * PI * y))), [0, 1])
    print(f"||a(.;3) - a(.;2)||_L1 = {mp.nstr(l1, 20)}")
    print(f"nu^2/mu^2 = {mp.nstr(mp.mpf(1) / 25, 10)}, mu^2/nu^2 = 25")

    print()
    print("== homogenized region functional on (0, 1), u0 = -sin(pi x) ==")
    # H(p) = -int_{1/4}^{3/4} sin(pi x) dx * int_{1/2}^{1} E_{1/2}(-p pi^2 sqrt(t)) dt
    sx = (mp.cos(PI / 4) - mp.cos(3 * PI / 4)) / PI
    print(f"space factor = {mp.nstr(sx, 20)}")
    for p in [mp.sqrt(3), mp.mpf(2)]:
        ti = mp.quad(lambda t: ml(mp.mpf("0.5"), -p * PI**2 * mp.sqrt(t)), [mp.mpf("0.5"), 1])
        print(f"H({mp.nstr(p, 12)}) = {mp.nstr(-sx * ti, 18)}")


if __name__ == "__main__":
    main()
