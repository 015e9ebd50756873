"""Random pixel sampling and masking.

Samples are i.i.d. uniform draws over the pixel grid, kept as an ordered
multiset (collisions retained); a derived distinct view backs masking and
projection operations.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np


@dataclass(frozen=True)
class SampleSet:
    """An ordered multiset of pixel coordinates on an n_side x n_side grid."""

    n_side: int
    draws: np.ndarray  # (m, 2) int64, rows are (row, col)

    def __post_init__(self):
        draws = np.ascontiguousarray(np.asarray(self.draws, dtype=np.int64))
        if draws.ndim != 2 or draws.shape[1] != 2 or draws.shape[0] < 1:
            raise ValueError(f"draws must be a nonempty (m, 2) array, got {draws.shape}")
        if draws.min() < 0 or draws.max() >= self.n_side:
            raise ValueError("sample coordinates fall outside the grid")
        object.__setattr__(self, "draws", draws)

    @property
    def m(self):
        return self.draws.shape[0]

    @cached_property
    def distinct(self):
        """Unique coordinates in raster order, shape (d, 2)."""
        flat = self.draws[:, 0] * self.n_side + self.draws[:, 1]
        uniq = np.unique(flat)
        return np.stack([uniq // self.n_side, uniq % self.n_side], axis=1)

    @cached_property
    def mask(self):
        """Boolean (n_side, n_side) indicator of the distinct support."""
        out = np.zeros((self.n_side, self.n_side), dtype=bool)
        out[self.draws[:, 0], self.draws[:, 1]] = True
        return out

    @cached_property
    def multiplicity(self):
        """Flat (n_side**2,) count of how often each pixel was drawn."""
        flat = self.draws[:, 0] * self.n_side + self.draws[:, 1]
        return np.bincount(flat, minlength=self.n_side * self.n_side)


def sample_uniform(n_side, m, seed):
    """Draw m i.i.d. uniform pixel coordinates; deterministic per seed."""
    if n_side < 1:
        raise ValueError(f"n_side must be >= 1, got {n_side}")
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    rng = np.random.default_rng(seed)
    draws = rng.integers(0, n_side, size=(int(m), 2), dtype=np.int64)
    return SampleSet(n_side=int(n_side), draws=draws)


def apply_mask(z, s):
    """Zero out every pixel outside the distinct support of s."""
    z = np.asarray(z, dtype=np.float64)
    if z.shape != (s.n_side, s.n_side):
        raise ValueError(f"image shape {z.shape} does not match grid side {s.n_side}")
    return np.where(s.mask, z, 0.0)


def read_mask(path, n_side):
    """Read a sample set from a text file, one 0-indexed "row col" per line."""
    coords = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'row col', got {line!r}")
            coords.append((int(parts[0]), int(parts[1])))
    if not coords:
        raise ValueError(f"{path}: mask file contains no coordinates")
    return SampleSet(n_side=n_side, draws=np.array(coords, dtype=np.int64))


def write_mask(path, s):
    with open(path, "w") as fh:
        for r, c in s.draws:
            fh.write(f"{r} {c}\n")
