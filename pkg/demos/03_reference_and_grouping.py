"""Build the Laplacian reference image and match similar patches.

The reference fills missing pixels by diffusion (projected gradient
descent on the Laplacian quadratic); block matching against it collects
each lattice reference patch with its nearest neighbors.
"""

import numpy as np

from patchlr import (
    GroupingConfig,
    PatchConfig,
    ReferenceConfig,
    build_groups,
    occurrence_counts,
    psnr,
    reference_image,
    sample_uniform,
)

rng = np.random.default_rng(1)
n = 32
k = np.arange(n)
truth = 100 + 60 * np.cos(2 * np.pi * 0.11 * k)[:, None] * np.cos(2 * np.pi * 0.07 * k)[None, :]

s = sample_uniform(n, round(0.3 * n * n), seed=5)
observed = np.where(s.mask, truth, 0.0)
print(f"observing {s.distinct.shape[0]} of {n * n} pixels")

ref = reference_image(observed, s, ReferenceConfig(max_iters=5000, tol=1e-10))
print(f"reference PSNR vs truth: {psnr(truth, ref):.2f} dB")

pcfg = PatchConfig(patch_n=4, n_side=n)
gcfg = GroupingConfig(k_groups=36, group_size=24, search_radius=8)
groups = build_groups(ref, gcfg, pcfg)
counts, m_ratio = occurrence_counts(groups, pcfg)
print(f"built {groups.k} groups of {groups.group_size} patches")
print(f"pixel coverage: min {counts.min()}, max {counts.max()}, ratio {m_ratio:.1f}")

first = groups.anchors[0]
print("\nfirst group anchors (reference first, then nearest):")
print(first[:6].tolist(), "...")
