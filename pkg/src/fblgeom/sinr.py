"""SINR law of a reference link in a Poisson field of Rayleigh-faded interferers.

With interferers of density ``lambda_density`` transmitting at ``w_p``, a
reference transmitter at distance ``d`` with power ``w_s`` and noise power
``eta``, the SINR Z at the receiver has

    P(Z <= z) = 1 - exp(-zeta*lambda*z**(2/alpha) - xi*z)

where kappa = Gamma(1 + 2/alpha) Gamma(1 - 2/alpha),
zeta = kappa*pi*d**2*(w_p/w_s)**(2/alpha) and xi = eta*d**alpha/w_s.
Everything here works on linear (not dB) SINR.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .numerics import DomainError, ModelDomainError, NumericError

__all__ = [
    "SinrParams",
    "derive_params",
    "sinr_cdf",
    "sinr_survival",
    "sinr_pdf",
    "sinr_quantile",
]


@dataclass(frozen=True)
class SinrParams:
    alpha: float
    lambda_density: float
    d: float = 1.0
    w_p: float = 1.0
    w_s: float = 1.0
    eta: float = 0.0
    kappa: float = field(init=False)
    zeta: float = field(init=False)
    xi: float = field(init=False)

    def __post_init__(self):
        if not self.alpha > 2:
            raise ModelDomainError(f"path-loss exponent must exceed 2, got {self.alpha}")
        if not self.d > 0:
            raise DomainError("link distance d must be positive")
        if not (self.w_p > 0 and self.w_s > 0):
            raise DomainError("transmit powers must be positive")
        if not self.lambda_density >= 0:
            raise DomainError("density must be nonnegative")
        if not self.eta >= 0:
            raise DomainError("noise power must be nonnegative")
        kappa = math.gamma(1 + 2 / self.alpha) * math.gamma(1 - 2 / self.alpha)
        zeta = kappa * math.pi * self.d ** 2 * (self.w_p / self.w_s) ** (2 / self.alpha)
        xi = self.eta * self.d ** self.alpha / self.w_s
        object.__setattr__(self, "kappa", kappa)
        object.__setattr__(self, "zeta", zeta)
        object.__setattr__(self, "xi", xi)

    @property
    def interference_load(self) -> float:
        """zeta * lambda, the coefficient of z**(2/alpha) in the exponent."""
        return self.zeta * self.lambda_density

    @property
    def degenerate(self) -> bool:
        """True when there is neither interference nor noise (SINR is infinite)."""
        return self.lambda_density == 0 and self.xi == 0

    def replace(self, **changes) -> "SinrParams":
        base = dict(alpha=self.alpha, lambda_density=self.lambda_density, d=self.d,
                    w_p=self.w_p, w_s=self.w_s, eta=self.eta)
        base.update(changes)
        return SinrParams(**base)


def derive_params(alpha, lambda_density, d=1.0, w_p=1.0, w_s=1.0, eta=0.0) -> SinrParams:
    return SinrParams(alpha, lambda_density, d, w_p, w_s, eta)


def _exponent(p: SinrParams, z):
    return p.interference_load * z ** (2.0 / p.alpha) + p.xi * z


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


def sinr_cdf(p: SinrParams, z):
    z = np.asarray(z, dtype=float)
    if np.any(z < 0):
        raise DomainError("SINR must be nonnegative")
    with np.errstate(invalid="ignore"):
        expo = _exponent(p, z)
    # inf*0 only arises at z = inf with a zero coefficient.
    expo = np.where(np.isnan(expo), 0.0, expo)
    return _out(-np.expm1(-expo))


def sinr_survival(p: SinrParams, z):
    z = np.asarray(z, dtype=float)
    if np.any(z < 0):
        raise DomainError("SINR must be nonnegative")
    with np.errstate(invalid="ignore"):
        expo = _exponent(p, z)
    return _out(np.exp(-np.where(np.isnan(expo), 0.0, expo)))


def sinr_pdf(p: SinrParams, z):
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0):
        raise DomainError("the density is defined for z > 0 only")
    a = p.alpha
    dens = (2 * p.interference_load / a * z ** (2 / a - 1) + p.xi) * np.exp(-_exponent(p, z))
    return _out(dens)


def sinr_quantile(p: SinrParams, u):
    """Inverse CDF: the SINR z with ``sinr_cdf(p, z) == u``.

    Works in t = z**(2/alpha), where the target ``a*t + xi*t**(alpha/2) = L``
    (L = -log(1-u)) has a convex increasing left side.  The bracket
    [0, t_hi] with t_hi = min(L/a, (L/xi)**(2/alpha)) always contains the
    root, and Newton steps started at t_hi stay inside it and converge
    monotonically.  Vectorized over ``u``.
    """
    u_arr = np.asarray(u, dtype=float)
    if np.any(~((u_arr > 0) & (u_arr < 1))):
        raise DomainError("quantile level must lie in (0, 1)")
    if p.degenerate:
        raise DomainError("no interference and no noise: the SINR is infinite")
    a_exp = p.alpha
    load, xi = p.interference_load, p.xi
    target = -np.log1p(-u_arr)
    if xi == 0:
        return _out((target / load) ** (a_exp / 2))
    if load == 0:
        return _out(target / xi)

    half = a_exp / 2
    t = np.minimum(target / load, (target / xi) ** (1 / half))
    for _ in range(200):
        g = load * t + xi * t ** half - target
        dg = load + xi * half * t ** (half - 1)
        step = g / dg
        t_new = t - step
        if np.all(np.abs(step) <= 4 * np.finfo(float).eps * np.abs(t)):
            t = t_new
            break
        t = t_new
    else:
        raise NumericError("quantile iteration did not converge")
    return _out(t ** half)
