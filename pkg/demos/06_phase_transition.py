"""Empirical phase transition: exact-recovery rate vs sample count.

Sweeps the sample budget and reports the Monte-Carlo success rate of the
equality-constrained solver on a fixed synthetic low-rank image.
Writes phase.csv next to this script.
"""

import os

import numpy as np

from patchlr import AdmmConfig, PatchConfig, SyntheticSpec, phase_transition, write_phase_csv

spec = SyntheticSpec(n_side=16, components=1, seed=3, amp_range=(40.0, 80.0))
pcfg = PatchConfig(patch_n=4, n_side=16)
grid = [int(round(v)) for v in np.linspace(0.1 * 256, 256, 6)]
acfg = AdmmConfig(rho=0.01, max_iters=300, tol_primal=1e-8, tol_dual=1e-8)

points = phase_transition(
    spec, pcfg, m_grid=grid, trials=10, success_tol=1e-3, seed=11, acfg=acfg
)

print(f"{'m':>6} {'rate':>6} {'mean rel err':>14}")
for p in points:
    print(f"{p.m:6d} {p.successes / p.trials:6.2f} {p.mean_rel_error:14.3e}")

out = os.path.join(os.path.dirname(os.path.abspath(__file__)), "phase.csv")
write_phase_csv(points, out)
print(f"\nwrote {out}")
