"""The SINR law of a link surrounded by a Poisson field of Rayleigh interferers.

Prints the CDF at a few SINR values for an interference-limited network and
for a noisy one, then shows how density, interferer power and noise each
shift the distribution.  Run: python3 demos/sinr_law.py
"""

from fblgeom.sinr import SinrParams, sinr_cdf, sinr_quantile

base = SinrParams(alpha=4, lambda_density=1e-2)
noisy = SinrParams(alpha=4, lambda_density=1e-2, eta=1e-3)

print(f"kappa = {base.kappa:.6f}, zeta = {base.zeta:.6f}, xi (noisy) = {noisy.xi:g}")
print(f"{'z':>8} {'F (no noise)':>14} {'F (noise 1e-3)':>15}")
for z in (0.01, 0.1, 1.0, 10.0, 100.0):
    print(f"{z:8g} {sinr_cdf(base, z):14.6e} {sinr_cdf(noisy, z):15.6e}")

print("\nmedian SINR under parameter changes:")
for label, p in [("baseline", base),
                 ("density x10", base.replace(lambda_density=1e-1)),
                 ("interferer power x1.4", base.replace(w_p=1.4)),
                 ("with noise", noisy)]:
    print(f"  {label:24s} {sinr_quantile(p, 0.5):10.4f}")
