"""Exact recovery of a low-rank image from half of its pixels.

A superposition of three random 2-D cosines has a patch lift of rank at
most six; the grouped nuclear-norm solver restores it essentially exactly
from 50% random samples.
"""

import numpy as np

from patchlr import (
    AdmmConfig,
    PatchConfig,
    SyntheticSpec,
    admm_inpaint,
    apply_mask,
    block_ranks,
    full_sweep_group,
    generate_synthetic,
    lift,
    sample_uniform,
)

spec = SyntheticSpec(n_side=32, components=3, seed=7, amp_range=(40.0, 80.0))
z_star = generate_synthetic(spec)
cfg = PatchConfig(patch_n=8, n_side=32)
groups = full_sweep_group(cfg)

ranks, total = block_ranks(lift(z_star, groups, cfg))
print(f"lift rank of the truth: {total} (components: {spec.components})")

s = sample_uniform(32, 512, seed=9)
y = apply_mask(z_star, s)
print(f"observing {s.distinct.shape[0]} distinct pixels of {32 * 32}")

acfg = AdmmConfig(rho=0.01, max_iters=500, tol_primal=1e-9, tol_dual=1e-9)
z, report = admm_inpaint(y, s, groups, cfg, acfg)

rel = np.linalg.norm(z - z_star) / np.linalg.norm(z_star)
print(f"relative l2 error: {rel:.2e} after {report.iterations} iterations")
print(f"solver block ranks at exit: {report.group_ranks}")
print(f"objective trajectory (first/last): {report.objective[0]:.1f} -> {report.objective[-1]:.1f}")
