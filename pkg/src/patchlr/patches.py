"""Patch extraction and the grouped block-diagonal lift.

An n x n patch anchored at pixel (a, b) reads the image at (a + i, b + j)
for offsets (i, j) in [n]^2, subject to a boundary rule. Vectorizing each
patch (raster order over offsets) and collecting a group's patches as
columns yields one n^2 x group_size block; the K groups stack into a
block-diagonal matrix that is never materialized densely. We keep the K
blocks as a list of arrays and precompute, per block, the flat pixel index
every entry reads. All lift/adjoint/count machinery reduces to fancy
indexing and bincount over those maps.
"""

import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import CoverageError

VALID = "valid"
PERIODIC = "periodic"
SYMMETRIC = "symmetric"
BOUNDARIES = (VALID, PERIODIC, SYMMETRIC)


@dataclass(frozen=True)
class PatchConfig:
    patch_n: int
    n_side: int
    boundary: str = VALID

    def __post_init__(self):
        if not 1 <= self.patch_n <= self.n_side:
            raise ValueError(
                f"patch side {self.patch_n} must lie in [1, {self.n_side}]"
            )
        if self.boundary not in BOUNDARIES:
            raise ValueError(f"unknown boundary {self.boundary!r}, want one of {BOUNDARIES}")

    @property
    def anchor_side(self):
        """Side length of the grid of admissible patch anchors."""
        if self.boundary == VALID:
            return self.n_side - self.patch_n + 1
        return self.n_side


def all_anchors(cfg):
    """Every admissible anchor in raster order, shape (anchor_side**2, 2)."""
    a = cfg.anchor_side
    rows, cols = np.divmod(np.arange(a * a), a)
    return np.stack([rows, cols], axis=1).astype(np.int64)


def _fold(t, n_side, boundary):
    """Map raw coordinates anchor+offset into [0, n_side) per boundary rule."""
    t = np.asarray(t)
    if boundary == VALID:
        if t.size and (t.min() < 0 or t.max() >= n_side):
            raise ValueError("anchor out of range for valid boundary mode")
        return t
    if boundary == PERIODIC:
        return np.mod(t, n_side)
    # half-sample symmetric reflection: 0,...,N-1,N-1,...,0 with period 2N
    f = np.mod(t, 2 * n_side)
    return np.where(f < n_side, f, 2 * n_side - 1 - f)


@dataclass(frozen=True)
class PatchGroups:
    """K ordered anchor lists; group k's patches form block k of the lift."""

    anchors: tuple  # tuple of (g_k, 2) int64 arrays

    def __post_init__(self):
        groups = tuple(
            np.ascontiguousarray(np.asarray(g, dtype=np.int64)) for g in self.anchors
        )
        if not groups:
            raise ValueError("at least one group is required")
        for g in groups:
            if g.ndim != 2 or g.shape[1] != 2 or g.shape[0] < 1:
                raise ValueError("each group must be a nonempty (g, 2) anchor array")
            if len({tuple(a) for a in g.tolist()}) != g.shape[0]:
                raise ValueError("anchors within a group must be distinct")
        object.__setattr__(self, "anchors", groups)

    @property
    def k(self):
        return len(self.anchors)

    @property
    def group_sizes(self):
        return [g.shape[0] for g in self.anchors]

    @property
    def group_size(self):
        sizes = set(self.group_sizes)
        if len(sizes) != 1:
            raise ValueError(f"groups have unequal sizes {sorted(sizes)}")
        return sizes.pop()


def full_sweep_group(cfg):
    """A single group containing every admissible anchor (the full patch matrix)."""
    return PatchGroups(anchors=(all_anchors(cfg),))


def groups_to_json(groups, cfg):
    return json.dumps(
        {
            "patch_n": cfg.patch_n,
            "boundary": cfg.boundary,
            "groups": [g.tolist() for g in groups.anchors],
        }
    )


def groups_from_json(text, n_side):
    obj = json.loads(text)
    cfg = PatchConfig(patch_n=int(obj["patch_n"]), n_side=n_side, boundary=obj["boundary"])
    groups = PatchGroups(anchors=tuple(np.array(g, dtype=np.int64) for g in obj["groups"]))
    return groups, cfg


class PatchFrame:
    """Precomputed pixel-index maps for a fixed (groups, config) pair.

    `pix[k][i, j]` is the flat index of the image pixel read by entry (i, j)
    of block k. Everything else is derived: lift is a gather, the adjoint is
    a bincount-accumulate (deterministic summation order), and the per-pixel
    occurrence counts are the bincount of the maps themselves.
    """

    def __init__(self, groups, cfg):
        n, N = cfg.patch_n, cfg.n_side
        if cfg.boundary == VALID:
            amax = cfg.anchor_side - 1
            for g in groups.anchors:
                if g.min() < 0 or g.max() > amax:
                    raise ValueError(
                        "group contains anchors out of range for valid boundary mode"
                    )
        else:
            for g in groups.anchors:
                if g.min() < 0 or g.max() >= N:
                    raise ValueError("group contains anchors outside the grid")
        off = np.arange(n)
        off_r, off_c = np.meshgrid(off, off, indexing="ij")
        off_r, off_c = off_r.reshape(-1, 1), off_c.reshape(-1, 1)  # (n^2, 1)
        pix = []
        for g in groups.anchors:
            rows = _fold(g[:, 0][None, :] + off_r, N, cfg.boundary)
            cols = _fold(g[:, 1][None, :] + off_c, N, cfg.boundary)
            pix.append(np.ascontiguousarray(rows * N + cols))
        self.groups = groups
        self.cfg = cfg
        self.pix = pix
        self.n_pixels = N * N

    @cached_property
    def _pix_concat(self):
        return np.concatenate([p.reshape(-1) for p in self.pix])

    @cached_property
    def counts_flat(self):
        """Occurrence count c of every pixel in the lifted matrix, flat (N^2,)."""
        return np.bincount(self._pix_concat, minlength=self.n_pixels)

    @property
    def counts(self):
        N = self.cfg.n_side
        return self.counts_flat.reshape(N, N)

    @cached_property
    def total_positions(self):
        return int(sum(p.size for p in self.pix))

    def require_coverage(self):
        c = self.counts_flat
        if c.min() == 0:
            w = int(np.argmin(c))
            raise CoverageError((w // self.cfg.n_side, w % self.cfg.n_side))

    @property
    def m_ratio(self):
        self.require_coverage()
        c = self.counts_flat
        return float(c.max()) / float(c.min())

    def lift(self, z):
        z = np.asarray(z, dtype=np.float64)
        if z.shape != (self.cfg.n_side, self.cfg.n_side):
            raise ValueError(
                f"image shape {z.shape} does not match n_side {self.cfg.n_side}"
            )
        flat = z.reshape(-1)
        return [flat[p] for p in self.pix]

    def adjoint(self, blocks):
        self._check_blocks(blocks)
        weights = np.concatenate([np.asarray(b, dtype=np.float64).reshape(-1) for b in blocks])
        out = np.bincount(self._pix_concat, weights=weights, minlength=self.n_pixels)
        N = self.cfg.n_side
        return out.reshape(N, N)

    def _check_blocks(self, blocks):
        if len(blocks) != len(self.pix):
            raise ValueError(f"expected {len(self.pix)} blocks, got {len(blocks)}")
        for b, p in zip(blocks, self.pix):
            if np.shape(b) != p.shape:
                raise ValueError(f"block shape {np.shape(b)} does not match {p.shape}")

    def zero_blocks(self):
        return [np.zeros(p.shape) for p in self.pix]


def lift(z, groups, cfg):
    """Vectorized grouped patch matrix of z, as a list of K dense blocks."""
    return PatchFrame(groups, cfg).lift(z)


def adjoint_lift(blocks, groups, cfg):
    """Exact adjoint of `lift`: pixel w accumulates every entry that reads w."""
    return PatchFrame(groups, cfg).adjoint(blocks)


def occurrence_counts(groups, cfg):
    """Per-pixel occurrence counts and the max/min count ratio.

    Raises CoverageError naming an uncovered pixel if any count is zero.
    """
    frame = PatchFrame(groups, cfg)
    frame.require_coverage()
    return frame.counts, frame.m_ratio


def _max_line_multiplicity(idx):
    """Largest multiplicity of any value in a 1-D index array."""
    _, counts = np.unique(idx, return_counts=True)
    return int(counts.max())


def audit_assumptions(cfg, groups):
    """Row/column nonzero-count audit of the per-group patch operator.

    For every pixel, the lift of that pixel's indicator image touches each
    row and each column of each block a bounded number of times; the bound
    is 1 for valid and periodic boundaries and 4 for symmetric reflection.
    Reports the observed maxima together with the occurrence-count ratio.
    """
    frame = PatchFrame(groups, cfg)
    max_row = 0
    max_col = 0
    for p in frame.pix:
        for i in range(p.shape[0]):
            max_row = max(max_row, _max_line_multiplicity(p[i, :]))
        for j in range(p.shape[1]):
            max_col = max(max_col, _max_line_multiplicity(p[:, j]))
    frame.require_coverage()
    return {
        "max_row_nnz": max_row,
        "max_col_nnz": max_col,
        "m_ratio": frame.m_ratio,
        "row_bound_ok": max_row <= 4,
        "col_bound_ok": max_col <= 4,
    }
