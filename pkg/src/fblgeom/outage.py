"""Finite-blocklength outage probability over the SINR law.

A block of ``n`` channel uses carrying ``k`` bits (rate ``r = k/n``) at
SINR z fails with probability Q(sqrt(n) (log2(1+z) - r) / sqrt(V(z))).
Averaging that over the SINR law gives the outage probability.  Four
evaluators are provided:

* ``outage_exact``: adaptive quadrature of the average itself;
* ``outage_linearized``: the error curve replaced by a linear ramp on
  [rho, upsilon] (centered at theta = 2**r - 1); only the first moment of
  the SINR over the ramp is left to quadrature;
* ``outage_closed_ss`` / ``outage_closed_ss_alpha4``: that ramp average in
  closed form for interference-limited links (xi = 0), via incomplete gamma
  functions or, for alpha = 4, elementary functions;
* ``outage_closed_micro_op``: the ramp average in closed form for alpha = 4
  with noise, via the scaled complementary error function.

When the lower ramp breakpoint ``rho`` is negative it is replaced by 0
(the SINR is nonnegative) and the estimate is flagged ``clamped_rho``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import optimize, special

from .numerics import (DomainError, gamma_upper, gamma_upper_interval,
                       integrate_adaptive)
from .sinr import SinrParams, sinr_cdf, sinr_survival

__all__ = [
    "Method",
    "CodeParams",
    "OutageEstimate",
    "ScenarioMismatchError",
    "UndefinedMetricError",
    "derive_code_params",
    "dispersion",
    "conditional_error",
    "linearized_kernel",
    "outage_exact",
    "outage_linearized",
    "outage_closed_ss",
    "outage_closed_ss_alpha4",
    "outage_closed_micro_op",
    "outage",
    "select_method",
    "error_support",
    "approximation_error",
]

LOG2E = 1.0 / math.log(2.0)
LN2 = math.log(2.0)
SQRT_2PI = math.sqrt(2.0 * math.pi)

# Q(40) < 1e-300: beyond the SINR where the error-curve argument reaches
# this value the integrand is zero in double precision.
_Q_CUTOFF_ARG = 40.0


class ScenarioMismatchError(DomainError):
    """A closed form was asked for parameters outside its scenario."""


class UndefinedMetricError(DomainError):
    pass


class Method(str, enum.Enum):
    EXACT = "exact"
    LINEARIZED = "linearized"
    CLOSED_SS = "closed_ss"
    CLOSED_SS_ALPHA4 = "closed_ss_alpha4"
    CLOSED_MICRO_OP = "closed_micro_op"
    MONTE_CARLO = "monte_carlo"


@dataclass(frozen=True)
class CodeParams:
    """Blocklength/rate pair plus the linear-ramp constants derived from it.

    beta = sqrt(n / 2pi) / sqrt(2**(2r) - 1); the ramp falls from 1 at
    ``rho`` to 0 at ``upsilon`` with slope beta / sqrt(2pi), passing 1/2 at
    ``theta = 2**r - 1``.
    """

    n: int
    r: float
    k: Optional[int] = None

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError("blocklength n must be an integer >= 1")
        if not self.r > 0 or not math.isfinite(self.r):
            raise DomainError("coding rate must be positive")

    @property
    def theta(self) -> float:
        return math.expm1(self.r * LN2)

    @property
    def beta(self) -> float:
        return math.sqrt(self.n / (2 * math.pi)) / math.sqrt(math.expm1(2 * self.r * LN2))

    @property
    def ramp_slope(self) -> float:
        return self.beta / SQRT_2PI

    @property
    def half_width(self) -> float:
        return math.sqrt(math.pi / 2) / self.beta

    @property
    def upsilon(self) -> float:
        return self.theta + self.half_width

    @property
    def rho(self) -> float:
        return self.theta - self.half_width

    @property
    def rho_clamped(self) -> float:
        return max(self.rho, 0.0)

    @property
    def sinr_cutoff(self) -> float:
        """SINR above which the block error probability is below 1e-300."""
        return math.expm1((self.r + _Q_CUTOFF_ARG * LOG2E / math.sqrt(self.n)) * LN2)


def derive_code_params(n: int, k: Optional[int] = None, r: Optional[float] = None) -> CodeParams:
    """Build :class:`CodeParams` from ``n`` and either ``k`` or ``r``."""
    if k is None and r is None:
        raise DomainError("give the information bits k or the rate r")
    if k is not None:
        if int(k) != k or k < 1:
            raise DomainError("information bits k must be an integer >= 1")
        if n < 1:
            raise DomainError("blocklength n must be an integer >= 1")
        rate = k / n
        if r is not None and not math.isclose(r, rate, rel_tol=1e-12):
            raise DomainError(f"rate {r} inconsistent with k/n = {rate}")
        return CodeParams(int(n), rate, int(k))
    if not r > 0:
        raise DomainError("coding rate must be positive")
    return CodeParams(n, float(r))


@dataclass(frozen=True)
class OutageEstimate:
    value: float
    method: Method
    error_bound: float = 0.0
    clamped_rho: bool = False

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise DomainError(f"outage value {self.value} outside [0, 1]")
        if not self.error_bound >= 0:
            raise DomainError("error bound must be nonnegative")


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


def dispersion(z):
    """Channel dispersion V(z) = (1 - (1+z)**-2) (log2 e)**2."""
    z = np.asarray(z, dtype=float)
    if np.any(z < 0):
        raise DomainError("SINR must be nonnegative")
    return _out(-np.expm1(-2.0 * np.log1p(z)) * LOG2E ** 2)


def conditional_error(z, c: CodeParams):
    """Block error probability at a fixed SINR (normal approximation).

    The capacity excess log2(1+z) - r is computed as
    log2(1 + (z - theta)/(1 + theta)), which is exactly zero at z = theta.
    At z = 0 the limit 1 is returned.
    """
    z = np.asarray(z, dtype=float)
    if np.any(z < 0) or np.any(np.isnan(z)):
        raise DomainError("SINR must be nonnegative")
    theta = c.theta
    regular = (z > 0) & np.isfinite(z)
    zr = np.where(regular, z, 1.0)
    excess = np.log1p((zr - theta) / (1.0 + theta)) * LOG2E
    arg = math.sqrt(c.n) * excess / np.sqrt(dispersion(zr))
    q = 0.5 * special.erfc(arg / math.sqrt(2.0))
    q = np.where(regular, q, np.where(z == 0, 1.0, 0.0))
    return _out(q)


def error_support(c: CodeParams, tol: float = 1e-9) -> float:
    """SINR above which the block error probability is below ``tol``."""
    if not 0 < tol < 0.5:
        raise DomainError("tol must lie in (0, 1/2)")
    return optimize.brentq(lambda z: conditional_error(z, c) - tol, c.theta, c.sinr_cutoff,
                           xtol=1e-14, rtol=1e-12)


def linearized_kernel(z, c: CodeParams):
    """Piecewise-linear stand-in for :func:`conditional_error`."""
    z = np.asarray(z, dtype=float)
    ramp = 0.5 - c.ramp_slope * (z - c.theta)
    w = np.where(z <= c.rho, 1.0, np.where(z >= c.upsilon, 0.0, ramp))
    return _out(w)


# --------------------------------------------------------------------------
# Quadrature in t = z**(2/alpha)
#
# In this variable the SINR density is
#   (load + xi*(alpha/2)*t**(alpha/2 - 1)) * exp(-load*t - xi*t**(alpha/2)),
# which is bounded at t = 0 (the z-density has a z**(2/alpha - 1) pole).
# --------------------------------------------------------------------------


def _t_density(p: SinrParams, t):
    h = p.alpha / 2.0
    load, xi = p.interference_load, p.xi
    return (load + xi * h * t ** (h - 1.0)) * np.exp(-load * t - xi * t ** h)


def _to_t(p: SinrParams, z: float) -> float:
    return z ** (2.0 / p.alpha)


def outage_exact(p: SinrParams, c: CodeParams, abs_tol: float = 1e-10,
                 rel_tol: float = 1e-8) -> OutageEstimate:
    """Outage probability by adaptive quadrature of the averaged error curve."""
    if p.degenerate:
        return OutageEstimate(0.0, Method.EXACT)
    h = p.alpha / 2.0

    def integrand(t):
        return conditional_error(t ** h, c) * _t_density(p, t)

    z_marks = [c.theta + j * c.half_width for j in (-2, -1, 0, 1, 2, 4, 8)]
    t_marks = [_to_t(p, z) for z in z_marks if z > 0]
    t_end = _to_t(p, c.sinr_cutoff)
    res = integrate_adaptive(integrand, 0.0, t_end, abs_tol, rel_tol,
                             points=[t for t in t_marks if t < t_end])
    value = min(max(res.value, 0.0), 1.0)
    return OutageEstimate(value, Method.EXACT, res.error_estimate)


def _ramp_compose(p: SinrParams, c: CodeParams, moment: float):
    """Ramp average given M = int_{rho+}^{upsilon} z f(z) dz.

    F(rho+) + (1/2 + s*theta) (F(upsilon) - F(rho+)) - s*M, s the ramp slope.
    Returns the value (clipped to [0, 1]) and the magnitude of the terms,
    used to size the rounding bound.
    """
    lo, hi = c.rho_clamped, c.upsilon
    f_lo = sinr_cdf(p, lo)
    s_lo = sinr_survival(p, lo)
    gap = (p.interference_load * (hi ** (2 / p.alpha) - lo ** (2 / p.alpha))
           + p.xi * (hi - lo))
    mass = s_lo * -math.expm1(-gap)  # F(upsilon) - F(rho+)
    slope = c.ramp_slope
    head = (0.5 + slope * c.theta) * mass
    tail = slope * moment
    value = f_lo + head - tail
    scale = abs(f_lo) + abs(head) + abs(tail)
    return min(max(value, 0.0), 1.0), scale


def _estimate(value, scale, method, c, extra_error=0.0):
    rounding = 64 * np.finfo(float).eps * scale
    return OutageEstimate(value, method, rounding + extra_error, c.rho < 0)


def outage_linearized(p: SinrParams, c: CodeParams, abs_tol: float = 1e-12,
                      rel_tol: float = 1e-10) -> OutageEstimate:
    """Linear-ramp approximation; the first-moment integral is done numerically."""
    if p.degenerate:
        return OutageEstimate(0.0, Method.LINEARIZED, 0.0, c.rho < 0)
    h = p.alpha / 2.0
    t_lo, t_hi = _to_t(p, c.rho_clamped), _to_t(p, c.upsilon)
    t_mid = _to_t(p, c.theta)
    res = integrate_adaptive(lambda t: t ** h * _t_density(p, t), t_lo, t_hi,
                             abs_tol, rel_tol, points=[t_mid])
    value, scale = _ramp_compose(p, c, res.value)
    return _estimate(value, scale, Method.LINEARIZED, c, c.ramp_slope * res.error_estimate)


def _ss_moment(p: SinrParams, lo: float, hi: float) -> float:
    # With u = load*z**(2/alpha): int z f dz = load**(-alpha/2) int u**(alpha/2) e**-u du.
    load = p.interference_load
    s = 1.0 + p.alpha / 2.0
    t_lo, t_hi = _to_t(p, lo), _to_t(p, hi)
    return load ** (-p.alpha / 2.0) * gamma_upper_interval(s, load * t_lo, load * t_hi)


def outage_closed_ss(p: SinrParams, c: CodeParams) -> OutageEstimate:
    """Closed form for an interference-limited link (xi = 0), any alpha > 2."""
    if p.xi != 0:
        raise ScenarioMismatchError("the interference-limited closed form needs xi = 0")
    if p.lambda_density == 0:
        return OutageEstimate(0.0, Method.CLOSED_SS, 0.0, c.rho < 0)
    value, scale = _ramp_compose(p, c, _ss_moment(p, c.rho_clamped, c.upsilon))
    return _estimate(value, scale, Method.CLOSED_SS, c)


def _lower_gamma3(x: float) -> float:
    """int_0^x u**2 e**-u du using only exp: series below x = 2."""
    if x < 2.0:
        term = x ** 3 / 6.0
        total = term
        k = 3
        while term > 1e-17 * total:
            k += 1
            term *= x / k
            total += term
        return 2.0 * math.exp(-x) * total
    return 2.0 - (x * x + 2.0 * x + 2.0) * math.exp(-x)


def _upper_gamma3(x: float) -> float:
    return (x * x + 2.0 * x + 2.0) * math.exp(-x)


def outage_closed_ss_alpha4(p: SinrParams, c: CodeParams) -> OutageEstimate:
    """Closed form for xi = 0 and alpha = 4, in elementary functions.

    With a = zeta*lambda the ramp moment is
    a**-2 [(x**2 + 2x + 2) e**-x] evaluated between x = a*sqrt(upsilon)
    and x = a*sqrt(rho+).
    """
    if p.alpha != 4 or p.xi != 0:
        raise ScenarioMismatchError("this closed form needs alpha = 4 and xi = 0")
    if p.lambda_density == 0:
        return OutageEstimate(0.0, Method.CLOSED_SS_ALPHA4, 0.0, c.rho < 0)
    a = p.interference_load
    x_lo, x_hi = a * math.sqrt(c.rho_clamped), a * math.sqrt(c.upsilon)
    if x_lo > 3.0:
        diff = _upper_gamma3(x_lo) - _upper_gamma3(x_hi)
    else:
        diff = _lower_gamma3(x_hi) - _lower_gamma3(x_lo)
    value, scale = _ramp_compose(p, c, diff / (a * a))
    return _estimate(value, scale, Method.CLOSED_SS_ALPHA4, c)


def _micro_op_moment(p: SinrParams, lo: float, hi: float) -> float:
    # Integration by parts plus completing the square; the erf difference
    # is rewritten with erfcx so that exp(a**2/(4 xi)) never appears.
    a, xi = p.interference_load, p.xi
    s_lo, s_hi = sinr_survival(p, lo), sinr_survival(p, hi)
    shift = a / (2.0 * math.sqrt(xi))
    x_lo, x_hi = math.sqrt(xi * lo) + shift, math.sqrt(xi * hi) + shift
    erf_part = special.erfcx(x_lo) * s_lo - special.erfcx(x_hi) * s_hi
    return (s_lo * (lo + 1.0 / xi) - s_hi * (hi + 1.0 / xi)
            - a * math.sqrt(math.pi) / (2.0 * xi ** 1.5) * erf_part)


def outage_closed_micro_op(p: SinrParams, c: CodeParams) -> OutageEstimate:
    """Closed form for alpha = 4 with noise (xi > 0), any density."""
    if p.alpha != 4 or not p.xi > 0:
        raise ScenarioMismatchError("this closed form needs alpha = 4 and xi > 0")
    value, scale = _ramp_compose(p, c, _micro_op_moment(p, c.rho_clamped, c.upsilon))
    return _estimate(value, scale, Method.CLOSED_MICRO_OP, c)


def _ss_gamma_form(p: SinrParams, c: CodeParams) -> float:
    """Interference-limited closed form in its incomplete-gamma presentation.

    s*(upsilon - rho+) + (alpha*s/2) load**(-alpha/2)
    * [Gamma(alpha/2, load*upsilon**(2/alpha)) - Gamma(alpha/2, load*rho+**(2/alpha))].
    Algebraically identical to :func:`outage_closed_ss`, but the bracket
    cancels against the leading term when ``load`` is small; kept for
    cross-checking only.
    """
    s = c.ramp_slope
    lo, hi = c.rho_clamped, c.upsilon
    load = p.interference_load
    h = p.alpha / 2.0
    bracket = gamma_upper(h, load * _to_t(p, hi)) - gamma_upper(h, load * _to_t(p, lo))
    return s * (hi - lo) + h * s * load ** (-h) * bracket


_EVALUATORS = {
    Method.EXACT: outage_exact,
    Method.LINEARIZED: outage_linearized,
    Method.CLOSED_SS: outage_closed_ss,
    Method.CLOSED_SS_ALPHA4: outage_closed_ss_alpha4,
    Method.CLOSED_MICRO_OP: outage_closed_micro_op,
}


def select_method(p: SinrParams) -> Method:
    """Cheapest evaluator valid for ``p``."""
    if p.xi == 0:
        return Method.CLOSED_SS_ALPHA4 if p.alpha == 4 else Method.CLOSED_SS
    if p.alpha == 4:
        return Method.CLOSED_MICRO_OP
    return Method.LINEARIZED


def outage(p: SinrParams, c: CodeParams, method=None) -> OutageEstimate:
    """Dispatch to an evaluator; ``None`` or ``"auto"`` picks the cheapest valid one."""
    if method is None or method == "auto":
        method = select_method(p)
    method = Method(method)
    if method is Method.MONTE_CARLO:
        raise DomainError("Monte Carlo outage needs samples; see fblgeom.spatial")
    return _EVALUATORS[method](p, c)


def approximation_error(exact: OutageEstimate, approx: OutageEstimate) -> float:
    """Relative deviation |exact - approx| / exact."""
    if exact.value == 0:
        raise UndefinedMetricError("relative error undefined for a zero reference")
    return abs((exact.value - approx.value) / exact.value)
