"""Hölder and Sobolev-Slobodeckij norms cannot control the parameters.

A narrow spike of height 1/n near a corner has vanishing Hölder and
fractional Sobolev norms, yet every parameter vector producing it has length
at least n^(q/2) d^(1/4).

    python demos/holder_sobolev_failure.py
"""
from reluparam.counterexamples import SPIKE, divergence_report

rows = divergence_report(SPIKE, [4, 16, 64, 256], [1.0], gamma=0.5, p=2.0, d=1)
print(f"steepness exponent q = {rows[0].extra_norms['q']:.3f}")
print(f"{'n':>5} {'lower bound':>12} {'Hölder':>10} {'Sobolev':>10} {'(stderr)':>10}")
for r in rows:
    print(f"{r.n:>5} {r.lower_bound:>12.4f} {r.norm:>10.4f} "
          f"{r.extra_norms['sobolev']:>10.5f} {r.extra_norms['sobolev_stderr']:>10.1e}")
