"""Outage probability by every evaluator, side by side.

The exact value integrates the finite-blocklength block error against the
SINR density.  The linearized value replaces the error curve by a ramp, and
the closed forms evaluate that ramp analytically.  The last column is the
relative gap between ramp and exact.  Run: python3 demos/outage_methods.py
"""

import numpy as np

from fblgeom.outage import derive_code_params, outage, select_method
from fblgeom.sinr import SinrParams

code = derive_code_params(n=500, r=0.1)
print(f"n={code.n} R={code.r}: theta={code.theta:.5f}, ramp [{code.rho:.5f}, {code.upsilon:.5f}]")

for title, make in [("interference-limited, W_p/W_s = 1.4",
                     lambda lam: dict(alpha=4, lambda_density=lam, w_p=1.4)),
                    ("noise xi = 1e-3, equal powers",
                     lambda lam: dict(alpha=4, lambda_density=lam, eta=1e-3))]:
    print(f"\n{title}")
    print(f"{'lambda':>9} {'exact':>12} {'linearized':>12} {'closed form':>12} {'gap':>7}")
    for lam in np.logspace(-5, -1, 5):
        p = SinrParams(**make(float(lam)))
        exact = outage(p, code, "exact").value
        lin = outage(p, code, "linearized").value
        closed = outage(p, code, select_method(p)).value
        print(f"{lam:9.1e} {exact:12.5e} {lin:12.5e} {closed:12.5e} {abs(lin - exact) / exact:7.4f}")
