#!/usr/bin/env python3
"""Reference values for the eigen-series forward solver tests."""
import mpmath as mp

mp.mp.dps = 40


def ml_series(alpha, beta, z):
    s = mp.mpf(0)
    for k in range(0, 300):
        s += mp.mpf(z) ** k / mp.gamma(alpha * k + beta)
    return s


def main():
    # time integral of the alpha = 1/2 relaxation factor over [0, 1]:
    # int_0^1 E_{1/2}(-sqrt t) dt = E_{1/2,2}(-1)
    v = ml_series(mp.mpf(1) / 2, 2, -1)
    print(f"int_0^1 E_half(-sqrt t) dt = {mp.nstr(v, 22)}")
    # cross-check by direct quadrature of the series
    q = mp.quad(lambda t: ml_series(mp.mpf(1) / 2, 1, -mp.sqrt(t)), [0, 1])
    print(f"quadrature cross-check      = {mp.nstr(q, 22)}")

    # point observation anchor: E_{1/2}(-1) * sqrt(2/pi)
    e1 = ml_series(mp.mpf(1) / 2, 1, -1)
    print(f"E_half(-1) * sqrt(2/pi)     = {mp.nstr(e1 * mp.sqrt(2 / mp.pi), 22)}")

    # region anchor: (int phi_1 over (0,pi)) * E_{1/2,2}(-1)
    print(f"2 sqrt(2/pi) * integral     = {mp.nstr(2 * mp.sqrt(2 / mp.pi) * v, 22)}")

    # decay-slope window endpoints for alpha = 0.7 (documentation only)
    e_lo = ml_series(mp.mpf(7) / 10, 1, -1)
    e_hi = ml_series(mp.mpf(7) / 10, 1, -mp.mpf(100) ** mp.mpf("0.7"))
    print(f"E_0.7(-1)                   = {mp.nstr(e_lo, 22)}")
    print(f"E_0.7(-100^0.7)             = {mp.nstr(e_hi, 22)}")
    print(f"log-log endpoint slope      = {mp.nstr((mp.log(e_hi) - mp.log(e_lo)) / mp.log(100), 8)}")
    e_lo5 = ml_series(mp.mpf(1) / 2, 1, -1)
    e_hi5 = ml_series(mp.mpf(1) / 2, 1, -10)
    print(f"alpha=0.5 endpoint slope    = {mp.nstr((mp.log(e_hi5) - mp.log(e_lo5)) / mp.log(100), 8)}")


if __name__ == "__main__":
    main()
