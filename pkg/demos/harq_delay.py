"""Retransmissions: reliability bought with delay.

For a 200-symbol codeword on a 120 kHz numerology (8.3 us per symbol) this
prints residual outage, worst-case and expected delay for one to four
attempts, then the largest attempt count that fits a 5 ms budget.
Run: python3 demos/harq_delay.py
"""

from fblgeom import harq
from fblgeom.outage import derive_code_params, outage
from fblgeom.sinr import SinrParams

code = derive_code_params(n=200, r=0.1)
eps = outage(SinrParams(alpha=4, lambda_density=1e-3, w_p=1.4), code).value
print(f"per-attempt outage: {eps:.4e}")
print(f"{'m':>2} {'residual':>11} {'worst ms':>9} {'expected ms':>12}")
for m in range(1, 5):
    cfg = harq.ArqConfig(m=m)
    worst = harq.worst_case_delay(cfg, code.n)
    mean = harq.expected_delay(eps, cfg, code.n)
    print(f"{m:2d} {harq.arq_outage(eps, m):11.3e} {worst.milliseconds:9.4g} {mean.milliseconds:12.5g}")

res = harq.max_attempts_within_budget(eps, code.n, 5e-3, 1e-5)
print(f"\n5 ms budget: m = {res.m}, residual {res.outage:.2e}, "
      f"target 1e-5 {'met' if res.target_met else 'not met'}")
