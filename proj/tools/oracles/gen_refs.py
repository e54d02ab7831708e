#!/usr/bin/env python3
"""Independent reference values for the C++ test suite.

Everything here is computed from closed forms or adaptive quadrature with
mpmath, never through the library under test.  The printed values are frozen
as literals in tests/; rerun this script to audit them.
"""

import mpmath as mp
import numpy as np

mp.mp.dps = 30


def banner(title):
    print()
    print("#", title)


banner("Gamma function values")
g14 = mp.gamma(mp.mpf(1) / 4)
print("Gamma(1/4)            =", mp.nstr(g14, 17))
print("Gamma(0.9)            =", mp.nstr(mp.gamma(mp.mpf("0.9")), 17))

banner("convolution of |x|^{-1/2} with exp(-x^2) at x = 0")
# int |y|^{-1/2} exp(-y^2) dy = Gamma(1/4)  (substitute w = y^2)
print("value                 =", mp.nstr(g14, 17))

banner("double integral of exp(-x^2) |x-y|^{-1/2} exp(-y^2)")
# for u = exp(-x^2/2): separates in u = x-y, v = x+y coordinates to
# 2^{-3/4} Gamma(1/4) sqrt(2 pi)
d2 = mp.mpf(2) ** mp.mpf("-0.75") * g14 * mp.sqrt(2 * mp.pi)
print("closed form           =", mp.nstr(d2, 17))

banner("lattice-free kinetic of exp(-x^2/2), s = 0.4")
# int |xi|^{0.8} exp(-xi^2) dxi = Gamma(0.9)
print("value                 =", mp.nstr(mp.gamma(mp.mpf("0.9")), 17))

banner("sharp lower-critical constant, N = 1, mu = 1/2")
# extremal profile V = (1/(1+x^2))^{1/2}; with f = |V|^{3/2}:
#   I0 = (1/2pi) int |f_hat|^2 sqrt(2 pi) |xi|^{-1/2} dxi
# f_hat of (1+x^2)^{-3/4}: 2 sqrt(pi)/Gamma(3/4) (|xi|/2)^{1/4} K_{1/4}(|xi|)
# constant = pi / I0^{2/3}  (mass of 1/(1+x^2) is pi, ratio scale-free)
def fhat(xi):
    xi = mp.mpf(xi)
    return 2 * mp.sqrt(mp.pi) / mp.gamma(mp.mpf(3) / 4) * (xi / 2) ** mp.mpf(
        "0.25"
    ) * mp.besselk(mp.mpf(1) / 4, xi)


def integrand(xi):
    return fhat(xi) ** 2 * mp.sqrt(2 * mp.pi) * xi ** mp.mpf("-0.5")


i0 = 2 * mp.quad(integrand, [0, 1, 10, mp.inf]) / (2 * mp.pi)
smu = mp.pi / i0 ** (mp.mpf(2) / 3)
print("I0                    =", mp.nstr(i0, 17))
print("constant (continuum)  =", mp.nstr(smu, 17))

banner("power-law fit on seeded noisy data, y = x^2 * noise")
rng = np.random.default_rng(20260825)
xs = np.logspace(0, 1, 20)
ys = xs**2 * np.exp(rng.normal(0.0, 0.01, size=20))
lx, ly = np.log(xs), np.log(ys)
A = np.vstack([lx, np.ones_like(lx)]).T
(slope, intercept), res, *_ = np.linalg.lstsq(A, ly, rcond=None)
ss_tot = np.sum((ly - ly.mean()) ** 2)
r2 = 1.0 - float(res[0]) / ss_tot
print("slope                 =", repr(float(slope)))
print("intercept             =", repr(float(intercept)))
print("r_squared             =", repr(r2))
print("xs                    =", ",".join("%.17g" % v for v in xs))
print("ys                    =", ",".join("%.17g" % v for v in ys))

banner("fiber maximizer against a dense scan (pure arithmetic)")
# kinetic = 2.3, d_p = 0.7, s = 0.4, gamma = 0.625, p gamma = 1.875:
# t_u = ln(kin/(gamma d_p)) / (2 s (p gamma - 1))
kin, dp, s, gam, pg = map(mp.mpf, ("2.3", "0.7", "0.4", "0.625", "1.875"))
tu = mp.log(kin / (gam * dp)) / (2 * s * (pg - 1))
print("t_u                   =", mp.nstr(tu, 17))

banner("critical-mass threshold arithmetic, p = 2.3, c = 0.05")
# threshold = 1 - N C_p c^{2((2s-mu)/N+1)} / (2N+2s-mu) with N=1, s=0.4, mu=0.5
# exponent 2((2s-mu)/1+1) = 2.6;   2N+2s-mu = 2.3
c = mp.mpf("0.05")
print("c^2.6                 =", mp.nstr(c ** mp.mpf("2.6"), 17))
print("threshold(C_p=1)      =", mp.nstr(1 - c ** mp.mpf("2.6") / mp.mpf("2.3"), 17))
