"""Reference values computed with mpmath at 30 significant digits.

These are independent of the package: every quantity is evaluated from its
defining formula with mpmath special functions and mpmath.quad.  The
printed numbers are frozen into the test-suite; rerun this script to
regenerate them.

    python3 tests/oracles/compute_oracles.py
"""

import mpmath as mp

mp.mp.dps = 30


def kappa(alpha):
    return mp.gamma(1 + 2 / mp.mpf(alpha)) * mp.gamma(1 - 2 / mp.mpf(alpha))


def law(alpha, lam, d=1, wp=1, ws=1, eta=0):
    alpha = mp.mpf(alpha)
    zeta = kappa(alpha) * mp.pi * mp.mpf(d) ** 2 * (mp.mpf(wp) / ws) ** (2 / alpha)
    xi = mp.mpf(eta) * mp.mpf(d) ** alpha / ws
    load = zeta * lam
    cdf = lambda z: 1 - mp.exp(-load * z ** (2 / alpha) - xi * z)
    pdf = lambda z: (2 * load / alpha * z ** (2 / alpha - 1) + xi) * mp.exp(-load * z ** (2 / alpha) - xi * z)
    return cdf, pdf, load, xi


def code(n, r):
    n, r = mp.mpf(n), mp.mpf(r)
    theta = 2 ** r - 1
    beta = mp.sqrt(n / (2 * mp.pi)) / mp.sqrt(2 ** (2 * r) - 1)
    half = mp.sqrt(mp.pi / 2) / beta
    return theta, beta, theta + half, theta - half


def cond_error(z, n, r):
    v = (1 - (1 + z) ** -2) * mp.log(mp.e, 2) ** 2
    arg = mp.sqrt(n) * (mp.log(1 + z, 2) - r) / mp.sqrt(v)
    return mp.erfc(arg / mp.sqrt(2)) / 2


def exact_outage(alpha, lam, n, r, **kw):
    _, pdf, _, _ = law(alpha, lam, **kw)
    theta, _, ups, _ = code(n, r)
    pts = [0, theta / 4, theta / 2, theta, ups, 2 * ups, 4 * ups, 16 * ups, mp.inf]
    return mp.quad(lambda z: cond_error(z, n, r) * pdf(z), pts)


def linearized_outage(alpha, lam, n, r, **kw):
    cdf, pdf, _, _ = law(alpha, lam, **kw)
    theta, beta, ups, rho = code(n, r)
    lo = max(rho, 0)
    ramp = lambda z: (mp.mpf(1) / 2 - beta / mp.sqrt(2 * mp.pi) * (z - theta)) * pdf(z)
    return cdf(lo) + mp.quad(ramp, [lo, theta, ups])


def show(name, value):
    print(f"{name:55s} {mp.nstr(value, 17)}")


if __name__ == "__main__":
    show("q(1)", mp.erfc(1 / mp.sqrt(2)) / 2)
    show("erf(1)", mp.erf(1))
    show("gamma_upper(2, 1.3)", mp.gammainc(2, 1.3))
    show("gamma_upper(1, 0.5)", mp.gammainc(1, 0.5))
    show("int_0^3 u exp(-u^2)", mp.quad(lambda u: u * mp.exp(-u * u), [0, 3]))
    show("kappa(3)", kappa(3))
    show("zeta(4)", kappa(4) * mp.pi)
    cdf, pdf, _, _ = law(4, mp.mpf("0.01"))
    show("cdf(a=4, lam=1e-2, z=1)", cdf(1))
    show("pdf(a=4, lam=1e-2, z=1)", pdf(1))
    show("E[1/(1+Z)] (a=4, lam=1e-2)", mp.quad(lambda z: pdf(z) / (1 + z), [0, 1, 100, mp.inf]))
    show("dispersion(1)", (1 - mp.mpf(1) / 4) * mp.log(mp.e, 2) ** 2)
    theta, beta, ups, rho = code(200, mp.mpf("0.1"))
    show("theta(n=200,R=0.1)", theta)
    show("beta(n=200,R=0.1)", beta)
    show("upsilon(n=200,R=0.1)", ups)
    show("rho(n=200,R=0.1)", rho)
    show("cond_error(n=200,R=0.1,z=0.2)", cond_error(mp.mpf("0.2"), 200, mp.mpf("0.1")))
    r = mp.mpf("0.1")
    cases = {
        "pure noise xi=1 n=200": dict(alpha=4, lam=0, n=200, r=r, eta=1),
        "dsa a=4 lam=1e-2 wp=1.4 n=200": dict(alpha=4, lam=mp.mpf("0.01"), n=200, r=r, wp=mp.mpf("1.4")),
        "dsa a=4 lam=1e-2 n=200": dict(alpha=4, lam=mp.mpf("0.01"), n=200, r=r),
        "dsa a=4 lam=1e-2 n=500": dict(alpha=4, lam=mp.mpf("0.01"), n=500, r=r),
        "dsa a=3 lam=1e-2 n=200": dict(alpha=3, lam=mp.mpf("0.01"), n=200, r=r),
        "dsa a=4 lam=1e-3 n=200": dict(alpha=4, lam=mp.mpf("0.001"), n=200, r=r),
        "dsa a=4 lam=1 n=200": dict(alpha=4, lam=1, n=200, r=r),
        "uo a=4 lam=1e-4 xi=1e-3 n=200": dict(alpha=4, lam=mp.mpf("1e-4"), n=200, r=r, eta=mp.mpf("0.001")),
        "uo a=4 lam=1e-2 xi=1e-3 n=200": dict(alpha=4, lam=mp.mpf("0.01"), n=200, r=r, eta=mp.mpf("0.001")),
        "uo a=4 lam=0 xi=1e-3 n=200": dict(alpha=4, lam=0, n=200, r=r, eta=mp.mpf("0.001")),
        "a=2.5 lam=1e-2 xi=1e-3 n=300 R=0.3": dict(alpha=mp.mpf("2.5"), lam=mp.mpf("0.01"), n=300, r=mp.mpf("0.3"), eta=mp.mpf("0.001")),
    }
    for name, kw in cases.items():
        show("exact      " + name, exact_outage(**kw))
        show("linearized " + name, linearized_outage(**kw))
