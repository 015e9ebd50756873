"""The sampling basis: one normalized atom per pixel of the image.

Each atom B_w places 1/sqrt(c_w) at every lift position that reads pixel
w. Atoms have unit Frobenius norm, disjoint supports, at most four
nonzeros per row/column, and operator norms trapped in
[1/sqrt(c_w), 4/sqrt(c_w)].
"""

import numpy as np

from patchlr import PatchConfig, PatchFrame, full_sweep_group, sampling_basis
from patchlr.basis import b_omega_values

cfg = PatchConfig(patch_n=2, n_side=4, boundary="symmetric")
groups = full_sweep_group(cfg)
frame = PatchFrame(groups, cfg)

for pixel in [(0, 0), (1, 1), (3, 3)]:
    elem = sampling_basis(pixel, groups, cfg, frame=frame)
    print(
        f"pixel {pixel}: occurrences c={elem.c_omega:2d}  "
        f"operator norm b={elem.b_omega:.4f}  "
        f"bounds [{1/np.sqrt(elem.c_omega):.4f}, {4/np.sqrt(elem.c_omega):.4f}]"
    )

b_vals = b_omega_values(frame).reshape(4, 4)
print("\nall operator norms b_w:\n", np.round(b_vals, 4))
print("\nmax/min ratio:", round(b_vals.max() / b_vals.min(), 4))
print("Lemma bound 4*sqrt(M):", round(4 * np.sqrt(frame.m_ratio), 4))
