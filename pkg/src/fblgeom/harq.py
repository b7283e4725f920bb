"""Type-I ARQ reliability and delay accounting.

Every attempt resends the same ``n``-symbol codeword and is answered by an
ACK/NACK costing ``nu`` channel uses, so one attempt occupies ``n + nu``
channel uses.  With per-attempt outage ``eps`` and at most ``m`` attempts:

* residual outage: ``eps**m``;
* worst-case delay: ``m * (n + nu)`` channel uses;
* expected delay: ``(n + nu) * sum_{j<m} eps**j`` channel uses (attempt
  j+1 happens only when the first j failed).

The expected delay replaces an "average delay" defined as a mean of
outage probabilities, which is not a time.  Channel uses convert to
seconds through the symbol time (8.3 us for a 120 kHz numerology).
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Context, Decimal
from typing import Optional

from .numerics import DomainError

__all__ = [
    "SYMBOL_TIME_5G",
    "SYMBOL_TIME_LTE",
    "ArqConfig",
    "DelayReport",
    "BudgetResult",
    "arq_outage",
    "worst_case_delay",
    "expected_delay",
    "max_attempts_within_budget",
]

SYMBOL_TIME_5G = 8.3e-6
SYMBOL_TIME_LTE = 66.7e-6

_POWER_CONTEXT = Context(prec=50)


@dataclass(frozen=True)
class ArqConfig:
    m: int = 1
    nu: int = 0
    symbol_time: float = SYMBOL_TIME_5G

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise DomainError("m must be an integer >= 1")
        if int(self.nu) != self.nu or self.nu < 0:
            raise DomainError("nu must be a nonnegative integer")
        if not self.symbol_time > 0:
            raise DomainError("symbol time must be positive")


@dataclass(frozen=True)
class DelayReport:
    channel_uses: float
    seconds: float
    reliability: Optional[float] = None

    @property
    def milliseconds(self) -> float:
        return self.seconds * 1e3


@dataclass(frozen=True)
class BudgetResult:
    m: Optional[int]
    feasible: bool
    outage: Optional[float]
    target_met: bool


def _check_eps(eps):
    if not 0.0 <= eps <= 1.0:
        raise DomainError("outage probability must lie in [0, 1]")


def arq_outage(eps: float, m: int) -> float:
    _check_eps(eps)
    if int(m) != m or m < 1:
        raise DomainError("m must be an integer >= 1")
    return _power(eps, int(m))


def _power(eps: float, m: int) -> float:
    # Probabilities normally arrive as short decimals (0.1, 0.05).  Raising
    # the decimal value and rounding once keeps 0.1**2 at 0.01 instead of
    # the binary product 0.010000000000000002.
    return float(_POWER_CONTEXT.power(Decimal(repr(float(eps))), m))


def worst_case_delay(cfg: ArqConfig, n: int) -> DelayReport:
    uses = cfg.m * (n + cfg.nu)
    return DelayReport(uses, uses * cfg.symbol_time)


def expected_delay(eps: float, cfg: ArqConfig, n: int) -> DelayReport:
    """Mean channel uses until success or the last allowed attempt."""
    _check_eps(eps)
    per_attempt = n + cfg.nu
    if eps == 1.0:
        uses = float(cfg.m * per_attempt)
    else:
        # sum_{j=0}^{m-1} eps**j, written out to keep eps = 0 exact
        uses = per_attempt * sum(eps ** j for j in range(cfg.m))
    return DelayReport(uses, uses * cfg.symbol_time, 1.0 - _power(eps, cfg.m))


def max_attempts_within_budget(eps: float, n: int, budget_seconds: float,
                               target_outage: float, nu: int = 0,
                               symbol_time: float = SYMBOL_TIME_5G) -> BudgetResult:
    """Largest attempt count whose worst-case delay fits ``budget_seconds``.

    Also reports whether the residual outage at that count meets
    ``target_outage``.  ``m`` is ``None`` when a single attempt already
    exceeds the budget.
    """
    _check_eps(eps)
    if not (budget_seconds > 0 and target_outage > 0):
        raise DomainError("budget and target must be positive")
    best = None
    m = 1
    while worst_case_delay(ArqConfig(m, nu, symbol_time), n).seconds <= budget_seconds:
        best = m
        m += 1
    if best is None:
        return BudgetResult(None, False, None, False)
    residual = arq_outage(eps, best)
    return BudgetResult(best, True, residual, residual <= target_outage)
