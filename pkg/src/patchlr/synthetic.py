"""Synthetic exactly-low-rank test images.

A superposition of r real 2-D sinusoids has a grouped patch lift of
numerical rank at most 2r for any patch size (each cosine splits into two
complex exponentials, and each exponential contributes a separable rank-one
pattern to every two-fold Hankel window).
"""

from dataclasses import dataclass

import numpy as np

from .patches import PatchConfig, full_sweep_group, lift
from .tangent import block_ranks

_MIN_FREQ_SEPARATION = 1e-3


@dataclass(frozen=True)
class SyntheticSpec:
    n_side: int
    components: int
    seed: int
    amp_range: tuple = (0.5, 1.5)
    max_retries: int = 20
    frequencies: tuple = None  # optional ((f, g), ...) override, else drawn from seed

    def __post_init__(self):
        if self.components < 1:
            raise ValueError("components must be >= 1")
        if self.n_side < 2:
            raise ValueError("n_side must be >= 2")
        lo, hi = self.amp_range
        if not (0 < lo <= hi):
            raise ValueError(f"bad amplitude range {self.amp_range}")
        if self.frequencies is not None:
            freqs = tuple((float(f), float(g)) for f, g in self.frequencies)
            if len(freqs) != self.components:
                raise ValueError("need one (f, g) pair per component")
            object.__setattr__(self, "frequencies", freqs)


def _separated(freqs):
    for i in range(len(freqs)):
        for j in range(i + 1, len(freqs)):
            df = abs(freqs[i][0] - freqs[j][0])
            dg = abs(freqs[i][1] - freqs[j][1])
            if max(df, dg) < _MIN_FREQ_SEPARATION:
                return False
    return True


def generate_synthetic(spec):
    """Deterministic sum of r random cosines; retries on clumped frequencies."""
    rng = np.random.default_rng(spec.seed)
    r = spec.components
    if spec.frequencies is not None:
        freqs = np.array(spec.frequencies, dtype=np.float64)
    else:
        for _ in range(spec.max_retries):
            freqs = rng.uniform(0.04, 0.46, size=(r, 2))
            if _separated([tuple(f) for f in freqs]):
                break
        else:
            raise RuntimeError(
                f"failed to draw {r} separated frequencies in {spec.max_retries} tries"
            )
    amps = rng.uniform(*spec.amp_range, size=r)
    phases = rng.uniform(0.0, 2.0 * np.pi, size=r)

    k1 = np.arange(spec.n_side)[:, None]
    k2 = np.arange(spec.n_side)[None, :]
    z = np.zeros((spec.n_side, spec.n_side))
    for a, (f, g), p in zip(amps, freqs, phases):
        z += a * np.cos(2.0 * np.pi * (f * k1 + g * k2) + p)

    _check_lift_rank(z, spec)
    return z


def _check_lift_rank(z, spec):
    n = spec.n_side
    r = spec.components
    side = int(np.ceil(np.sqrt(2 * r + 1)))
    side = min(max(side, 2), n // 2)
    cfg = PatchConfig(patch_n=side, n_side=n)
    blocks = lift(z, full_sweep_group(cfg), cfg)
    _, total = block_ranks(blocks)
    if total > 2 * r:
        raise RuntimeError(
            f"synthetic image lift has numerical rank {total} > {2 * r}"
        )
