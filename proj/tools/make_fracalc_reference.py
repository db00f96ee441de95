#!/usr/bin/env python3
"""Reference calculations for the discrete fractional-calculus operators.

Independently implements the L1 Caputo stencil and the piecewise-linear
product quadrature for the Riemann-Liouville integral, then prints the
quantities frozen into the unit tests: exactness checks, empirical
convergence orders, and inverse-pair defects.
"""
import math


def l1_weights(alpha, M):
    return [(j + 1) ** (1 - alpha) - j ** (1 - alpha) for j in range(M)]


def caputo_l1(v, tau, alpha):
    M = len(v) - 1
    b = l1_weights(alpha, M)
    c0 = tau ** (-alpha) / math.gamma(2 - alpha)
    out = [0.0] * (M + 1)
    for m in range(1, M + 1):
        s = 0.0
        for j in range(m):
            s += b[j] * (v[m - j] - v[m - j - 1])
        out[m] = c0 * s
    return out


def rl_integral(v, tau, beta):
    M = len(v) - 1
    A = [0.0] * (M + 1)
    C = [0.0] * (M + 1)  # B_m / tau
    for m in range(1, M + 1):
        A[m] = tau ** beta / beta * (m ** beta - (m - 1) ** beta)
        C[m] = tau ** beta / (beta + 1) * (m ** (beta + 1) - (m - 1) ** (beta + 1))
    out = [0.0] * (M + 1)
    rg = 1.0 / math.gamma(beta)
    for j in range(1, M + 1):
        s = 0.0
        for k in range(j):
            m = j - k
            s += v[k] * (C[m] - (m - 1) * A[m]) + v[k + 1] * (m * A[m] - C[m])
        out[j] = rg * s
    return out


def defect(vfun, alpha, M, T=1.0):
    tau = T / M
    v = [vfun(j * tau) for j in range(M + 1)]
    w = caputo_l1(v, tau, alpha)
    z = rl_integral(w, tau, alpha)
    return max(abs(z[j] - (v[j] - v[0])) for j in range(M + 1))


def main():
    print("== rl_integral of ones, beta=0.5, M=40, T=1: value at t=1 ==")
    v = [1.0] * 41
    out = rl_integral(v, 1.0 / 40, 0.5)
    print(f"   got {out[40]:.16e}  want {1/math.gamma(1.5):.16e}  (2/sqrt(pi))")

    print("== caputo_l1 of t, alpha=0.5, M=40: node t=1 vs t^0.5/Gamma(1.5) ==")
    v = [j / 40 for j in range(41)]
    out = caputo_l1(v, 1.0 / 40, 0.5)
    want = 1.0 / math.gamma(1.5)
    print(f"   got {out[40]:.16e}  want {want:.16e}  relerr {abs(out[40]-want)/want:.2e}")

    print("== caputo_l1 on t^2: empirical order vs 2-alpha ==")
    for alpha in (0.3, 0.5, 0.7):
        errs = []
        for M in (64, 128, 256, 512):
            tau = 1.0 / M
            v = [(j * tau) ** 2 for j in range(M + 1)]
            out = caputo_l1(v, tau, alpha)
            g = 2.0 / math.gamma(3 - alpha)
            e = max(abs(out[j] - g * (j * tau) ** (2 - alpha)) for j in range(1, M + 1))
            errs.append(e)
        orders = [math.log2(errs[i] / errs[i + 1]) for i in range(3)]
        # least-squares slope of log e vs log tau over the 4 points
        xs = [math.log(1.0 / M) for M in (64, 128, 256, 512)]
        ys = [math.log(e) for e in errs]
        n = 4
        sx, sy = sum(xs), sum(ys)
        sxx = sum(x * x for x in xs)
        sxy = sum(x * y for x, y in zip(xs, ys))
        slope = (n * sxy - sx * sy) / (n * sxx - sx * sx)
        print(f"   alpha={alpha}: errs={['%.3e' % e for e in errs]}")
        print(f"      pair orders={['%.3f' % o for o in orders]}  LS slope={slope:.4f}  target={2-alpha}")

    print("== verify_inverse_pair defects ==")
    d64 = defect(lambda t: t, 0.5, 64)
    d128 = defect(lambda t: t, 0.5, 128)
    print(f"   v=t, alpha=0.5: d(64)={d64:.6e} d(128)={d128:.6e} log2 ratio={math.log2(d64/d128):.4f}")
    d = defect(math.sin, 0.7, 256)
    print(f"   v=sin t, alpha=0.7, M=256: d={d:.6e}")
    dc = defect(lambda t: 3.7, 0.4, 32)
    print(f"   v const, alpha=0.4, M=32: d={dc:.6e}")
    for alpha in (0.3, 0.5, 0.7, 0.9):
        d1 = defect(lambda t: t, alpha, 64)
        d2 = defect(lambda t: t, alpha, 128)
        print(f"   v=t alpha={alpha}: log2 ratio={math.log2(d1/d2):.4f}")


if __name__ == "__main__":
    main()
