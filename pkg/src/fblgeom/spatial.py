"""Spatial Monte Carlo of the Poisson interference field.

Each realization places a Poisson number of interferers uniformly on a
disc around the receiver (which sits at the origin), gives every link an
independent unit-mean exponential power fade, and records

    Z = w_s h0 d**-alpha / (sum_i w_p h_i |x_i|**-alpha + eta).

The reference transmitter is an extra node at distance d, not a point of
the process.  The infinite plane is truncated to a disc; the interference
missing from outside radius R adds at most

    z * lambda * 2 pi (w_p/w_s) d**alpha R**(2-alpha) / (alpha - 2)

to the exponent of the SINR survival function at level z, which is what
:func:`truncation_bias_bound` reports and :func:`truncation_radius` sizes
the disc against.

Realizations are generated in fixed-size chunks; chunk ``j`` always draws
from sub-stream ``j`` of the configured seed, so the samples do not depend
on how many workers produce them.  Within a chunk the signal fades are
drawn first and interferers follow ring by ring from the center outwards
(see :func:`ring_edges`), so fields on nested discs share their inner part.
"""

from __future__ import annotations

import bisect
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np
from scipy import optimize

from .numerics import DomainError, SeedSpec
from .outage import CodeParams, Method, OutageEstimate, conditional_error
from .sinr import SinrParams, sinr_cdf, sinr_quantile

__all__ = [
    "FieldConfig",
    "EmpiricalDistribution",
    "truncation_bias_bound",
    "truncation_radius",
    "ring_edges",
    "snap_radius",
    "realize_field",
    "sample_field",
    "sample_inverse_transform",
    "empirical_cdf",
    "empirical_outage",
    "ks_statistic",
    "ks_critical_value",
    "dump_samples",
    "load_samples",
]

DEFAULT_CHUNK = 1 << 15
RING_RATIO = 2.0 ** 0.25
MAX_BATCH_POINTS = 1 << 21


def _far_field_coefficient(p: SinrParams) -> float:
    return (2.0 * math.pi * p.lambda_density * (p.w_p / p.w_s) * p.d ** p.alpha
            / (p.alpha - 2.0))


def truncation_bias_bound(p: SinrParams, radius: float, z) -> float:
    """Upper bound on |F_disc(z) - F(z)| from dropping interferers beyond ``radius``."""
    extra = _far_field_coefficient(p) * radius ** (2.0 - p.alpha) * np.asarray(z, dtype=float)
    return float(np.max(-np.expm1(-extra)))


def _peak_weighted_level(p: SinrParams) -> float:
    """max over z of z * P(Z > z); finite whenever lambda > 0 or xi > 0."""
    load, xi, h = p.interference_load, p.xi, 2.0 / p.alpha

    def slope(log_z):
        z = math.exp(log_z)
        return 1.0 - h * load * z ** h - xi * z

    lo, hi = -50.0, 1.0
    while slope(hi) > 0:
        hi *= 2.0
    log_z = optimize.brentq(slope, lo, hi, xtol=1e-12)
    z = math.exp(log_z)
    return z * math.exp(-load * z ** h - xi * z)


def truncation_radius(p: SinrParams, fraction: float = 1e-3,
                      z_max: Optional[float] = None) -> float:
    """Disc radius keeping the truncation bias below ``fraction``.

    Without ``z_max`` the absolute error of the SINR CDF is bounded
    uniformly over all z (what a goodness-of-fit test needs).  With
    ``z_max`` the bias is bounded relative to F(z_max), which bounds the
    relative error of any average whose weight vanishes above ``z_max``
    (outage estimates).  The radius is never below ``d``.
    """
    if p.lambda_density == 0:
        return p.d
    coef = _far_field_coefficient(p)
    if z_max is None:
        need = coef * _peak_weighted_level(p) / fraction
    else:
        need = coef * z_max / (fraction * sinr_cdf(p, z_max))
    return max(p.d, need ** (1.0 / (p.alpha - 2.0)))


@dataclass(frozen=True)
class FieldConfig:
    params: SinrParams
    radius: float
    n_realizations: int
    seed: SeedSpec
    chunk_size: int = DEFAULT_CHUNK

    def __post_init__(self):
        if not self.radius > 0:
            raise DomainError("radius must be positive")
        if self.n_realizations < 1:
            raise DomainError("need at least one realization")

    @classmethod
    def for_params(cls, params: SinrParams, n_realizations: int, seed: SeedSpec,
                   fraction: float = 1e-3, z_max: Optional[float] = None,
                   chunk_size: int = DEFAULT_CHUNK) -> "FieldConfig":
        radius = snap_radius(params.d, truncation_radius(params, fraction, z_max))
        return cls(params, radius, n_realizations, seed, chunk_size)

    @property
    def mean_interferers(self) -> float:
        return self.params.lambda_density * math.pi * self.radius ** 2

    @property
    def bias_bound(self) -> float:
        """Truncation bias bound on the CDF, maximized over z."""
        if self.params.lambda_density == 0:
            return 0.0
        p = self.params
        return -math.expm1(-_far_field_coefficient(p) * self.radius ** (2 - p.alpha)
                           * _peak_weighted_level(p))


@dataclass(frozen=True)
class EmpiricalDistribution:
    samples: np.ndarray

    def __post_init__(self):
        arr = np.sort(np.asarray(self.samples, dtype=float))
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    @property
    def count(self) -> int:
        return int(self.samples.size)


def ring_edges(d: float, radius: float) -> np.ndarray:
    """Edges 0, d, d*q, d*q**2, ... (q = 2**(1/4)) ending exactly at ``radius``.

    Interferers are drawn ring by ring, innermost first, from one stream.
    A disc whose radius lies on this grid is therefore a prefix of every
    larger on-grid disc drawn with the same seed: doubling the radius
    appends four rings and leaves the inner draws untouched.
    """
    edges = [0.0]
    r = d
    while r < radius * (1 - 1e-12):
        edges.append(r)
        r *= RING_RATIO
    edges.append(radius)
    return np.array(edges)


def snap_radius(d: float, radius: float) -> float:
    """Smallest ring-grid radius d*q**k that is at least ``radius``."""
    if radius <= d:
        return d
    k = math.ceil(math.log(radius / d) / math.log(RING_RATIO) - 1e-9)
    return d * RING_RATIO ** k


def _draw_chunk(cfg: FieldConfig, rng: np.random.Generator, size: int) -> np.ndarray:
    p = cfg.params
    h0 = rng.standard_exponential(size)
    interference = np.zeros(size)
    edges = ring_edges(p.d, cfg.radius) ** 2
    for inner2, outer2 in zip(edges[:-1], edges[1:]):
        counts = rng.poisson(p.lambda_density * math.pi * (outer2 - inner2), size=size)
        ends = np.cumsum(counts)
        start = 0
        # Rows are consumed in blocks of at most MAX_BATCH_POINTS interferers.
        # The split depends only on the counts, so it is reproducible.
        while start < size:
            base = int(ends[start - 1]) if start else 0
            stop = max(start + 1, int(np.searchsorted(ends, base + MAX_BATCH_POINTS, "right")))
            block = counts[start:stop]
            total = int(ends[stop - 1]) - base
            # Uniform on the ring: r**2 uniform on [inner**2, outer**2].
            r2 = inner2 + (outer2 - inner2) * rng.random(total)
            fades = rng.standard_exponential(total)
            received = p.w_p * fades * r2 ** (-p.alpha / 2.0)
            owner = np.repeat(np.arange(stop - start), block)
            interference[start:stop] += np.bincount(owner, weights=received,
                                                    minlength=stop - start)
            start = stop
    signal = p.w_s * h0 * p.d ** (-p.alpha)
    with np.errstate(divide="ignore"):
        return signal / (interference + p.eta)


def realize_field(cfg: FieldConfig, stream: np.random.Generator) -> float:
    """One SINR draw from a fresh field realization using ``stream``."""
    return float(_draw_chunk(cfg, stream, 1)[0])


def sample_field(cfg: FieldConfig, workers: int = 1) -> EmpiricalDistribution:
    """All ``cfg.n_realizations`` SINR draws, chunked for reproducibility."""
    n, size = cfg.n_realizations, cfg.chunk_size
    jobs = [(j, min(size, n - j * size)) for j in range(-(-n // size))]

    def run(job):
        j, m = job
        return _draw_chunk(cfg, cfg.seed.substream(j), m)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, jobs))
    else:
        parts = [run(job) for job in jobs]
    return EmpiricalDistribution(np.concatenate(parts))


def sample_inverse_transform(p: SinrParams, count: int, seed: SeedSpec) -> EmpiricalDistribution:
    """Draws from the analytic SINR law by inverting its CDF."""
    rng = seed.substream(0)
    u = rng.random(count)
    u = np.where(u == 0.0, np.nextafter(0.0, 1.0), u)
    return EmpiricalDistribution(np.atleast_1d(sinr_quantile(p, u)))


def empirical_cdf(dist: EmpiricalDistribution, z: float) -> float:
    if dist.count < 1:
        raise DomainError("empty sample")
    return bisect.bisect_right(dist.samples, z) / dist.count


def empirical_outage(dist: EmpiricalDistribution, c: CodeParams) -> OutageEstimate:
    """Sample mean of the block error probability; bound is 2 standard errors."""
    if dist.count < 1:
        raise DomainError("empty sample")
    err = np.asarray(conditional_error(dist.samples, c), dtype=float)
    mean = float(err.mean())
    sd = float(err.std(ddof=1)) if dist.count > 1 else 0.0
    bound = 2.0 * sd / math.sqrt(dist.count)
    return OutageEstimate(min(max(mean, 0.0), 1.0), Method.MONTE_CARLO, bound)


def ks_statistic(dist: EmpiricalDistribution, p: SinrParams) -> float:
    """Two-sided Kolmogorov-Smirnov distance between the sample and the SINR law."""
    if dist.count < 10:
        raise DomainError("need at least 10 samples")
    n = dist.count
    f = np.asarray(sinr_cdf(p, dist.samples), dtype=float)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))


def ks_critical_value(count: int, level: float = 0.05) -> float:
    """Asymptotic KS critical value sqrt(-log(level/2)/2)/sqrt(count); 1.36/sqrt(n) at 5%."""
    return math.sqrt(-0.5 * math.log(level / 2.0)) / math.sqrt(count)


def dump_samples(dist: EmpiricalDistribution, path) -> None:
    """Write one SINR value per line."""
    with open(Path(path), "w", newline="\n") as fh:
        for v in dist.samples:
            fh.write(f"{float(v)!r}\n")


def load_samples(path) -> EmpiricalDistribution:
    with open(Path(path)) as fh:
        return EmpiricalDistribution(np.array([float(line) for line in fh if line.strip()]))
