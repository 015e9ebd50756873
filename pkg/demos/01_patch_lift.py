"""Walk through the grouped patch lift on a 3x3 image.

Shows the patch matrix (columns = vectorized 2x2 patches), the exact
adjoint, and the per-pixel occurrence counts that make the composition
G* o G diagonal.
"""

import numpy as np

from patchlr import PatchConfig, PatchFrame, full_sweep_group, occurrence_counts

z = np.arange(1.0, 10.0).reshape(3, 3)
print("image:\n", z)

cfg = PatchConfig(patch_n=2, n_side=3)
groups = full_sweep_group(cfg)
frame = PatchFrame(groups, cfg)

blocks = frame.lift(z)
print("\npatch matrix (4 offsets x 4 anchors):\n", blocks[0])
print("\ncolumn 0 is the patch anchored at (0,0):", blocks[0][:, 0])

counts, m_ratio = occurrence_counts(groups, cfg)
print("\noccurrence counts c_w:\n", counts)
print("count ratio M =", m_ratio)

back = frame.adjoint(blocks)
print("\nadjoint of the lift (equals c_w * z):\n", back)
print("matches counts * image:", np.allclose(back, counts * z))

rng = np.random.default_rng(0)
m = [rng.standard_normal(b.shape) for b in blocks]
lhs = sum(np.sum(a * b) for a, b in zip(frame.lift(z), m))
rhs = np.sum(z * frame.adjoint(m))
print(f"\nadjoint identity <G(z), M> = <z, G*(M)>: {lhs:.6f} vs {rhs:.6f}")
