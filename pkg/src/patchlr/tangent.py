"""Per-block singular factors, tangent-space projection, rank and leverage.

The lifted matrix is block diagonal, so its SVD is the direct sum of the
per-block SVDs and the tangent space at it decomposes blockwise. All
operations here act on lists of blocks.
"""

from dataclasses import dataclass

import numpy as np

DEFAULT_RANK_TOL = 1e-8


@dataclass(frozen=True)
class TangentSpace:
    """Compact per-block factors (U_k, sigma_k, V_k) of a grouped matrix."""

    us: tuple  # (n^2, r_k) arrays
    sigmas: tuple  # (r_k,) arrays, positive nonincreasing
    vs: tuple  # (g_k, r_k) arrays

    @property
    def block_ranks(self):
        return [u.shape[1] for u in self.us]

    @property
    def rank(self):
        return int(sum(self.block_ranks))

    @classmethod
    def from_blocks(cls, blocks, tol_sigma=DEFAULT_RANK_TOL):
        us, sigmas, vs = [], [], []
        for b in blocks:
            u, s, vt = np.linalg.svd(np.asarray(b, dtype=np.float64), full_matrices=False)
            if s.size and s[0] > 0:
                r = int(np.count_nonzero(s > tol_sigma * s[0]))
            else:
                r = 0
            us.append(u[:, :r])
            sigmas.append(s[:r])
            vs.append(vt[:r, :].T)
        return cls(us=tuple(us), sigmas=tuple(sigmas), vs=tuple(vs))

    def uv_blocks(self):
        """The blocks of U V^T (zero blocks where the rank is zero)."""
        return [u @ v.T for u, v in zip(self.us, self.vs)]


def block_ranks(blocks, tol_sigma=DEFAULT_RANK_TOL):
    """Numerical rank of each block (singular values above tol * sigma_max)."""
    ranks = []
    for b in blocks:
        s = np.linalg.svd(np.asarray(b, dtype=np.float64), compute_uv=False)
        if s.size and s[0] > 0:
            ranks.append(int(np.count_nonzero(s > tol_sigma * s[0])))
        else:
            ranks.append(0)
    return ranks, int(sum(ranks))


def tangent_project(blocks, space):
    """Blockwise U U^T M + M V V^T - U U^T M V V^T."""
    if len(blocks) != len(space.us):
        raise ValueError(f"expected {len(space.us)} blocks, got {len(blocks)}")
    out = []
    for m, u, v in zip(blocks, space.us, space.vs):
        m = np.asarray(m, dtype=np.float64)
        if m.shape != (u.shape[0], v.shape[0]):
            raise ValueError(f"block shape {m.shape} does not match factors")
        um = u @ (u.T @ m)
        mv = (m @ v) @ v.T
        umv = u @ ((u.T @ m) @ v) @ v.T
        out.append(um + mv - umv)
    return out


def tangent_project_complement(blocks, space):
    proj = tangent_project(blocks, space)
    return [b - p for b, p in zip(blocks, proj)]


def incoherence(space):
    """Row-leverage incoherence of the block-diagonal singular factors.

    nu_left  = (N1 / r) * max_i ||row_i(U)||^2 over the K n^2 rows,
    nu_right = (N2 / r) * max_j ||row_j(V)||^2 over the K g rows,
    and nu is the larger of the two. Requires positive total rank.
    """
    r = space.rank
    if r == 0:
        raise ValueError("incoherence is undefined at rank zero")
    n1 = sum(u.shape[0] for u in space.us)
    n2 = sum(v.shape[0] for v in space.vs)
    max_u = max(
        float(np.max(np.sum(u * u, axis=1))) if u.size else 0.0 for u in space.us
    )
    max_v = max(
        float(np.max(np.sum(v * v, axis=1))) if v.size else 0.0 for v in space.vs
    )
    nu_left = n1 / r * max_u
    nu_right = n2 / r * max_v
    return {
        "nu": max(nu_left, nu_right),
        "nu_left": nu_left,
        "nu_right": nu_right,
        "r": r,
    }
