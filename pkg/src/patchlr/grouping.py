"""Reference image by projected gradient descent, and block matching.

The reference solves min 0.5 * ||Gamma vec(z)||^2 subject to agreement with
the observed pixels, where Gamma = I (x) L + L (x) I and L is the 1-D
second-difference matrix with diagonal 1, 2, ..., 2, 1. Groups are then
formed by picking reference patches on an even lattice and collecting each
one's nearest patches (squared Euclidean distance on vectorized patches)
inside a local search window.
"""

from dataclasses import dataclass

import numpy as np

from .patches import PatchConfig, PatchFrame, PatchGroups, full_sweep_group


@dataclass(frozen=True)
class ReferenceConfig:
    max_iters: int = 2000
    tol: float = 1e-7
    power_iters: int = 50
    step_safety: float = 0.95

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.tol <= 0:
            raise ValueError("tol must be positive")


@dataclass(frozen=True)
class GroupingConfig:
    k_groups: int
    group_size: int
    search_radius: int

    def __post_init__(self):
        if self.k_groups < 1 or self.group_size < 1 or self.search_radius < 0:
            raise ValueError("k_groups, group_size must be >= 1 and search_radius >= 0")


def laplacian_1d(n):
    """Second-difference matrix with diagonal 1, 2, ..., 2, 1 (Neumann ends)."""
    if n < 2:
        return np.zeros((n, n))
    lap = 2.0 * np.eye(n)
    lap[0, 0] = lap[-1, -1] = 1.0
    lap -= np.diag(np.ones(n - 1), 1)
    lap -= np.diag(np.ones(n - 1), -1)
    return lap


def _gamma_apply(z, lap):
    # (I (x) L + L (x) I) vec(Z) == vec(L Z + Z L) for symmetric L
    return lap @ z + z @ lap


def estimate_max_eigenvalue(n_side, power_iters=50):
    """Power iteration for the top eigenvalue of Gamma^T Gamma."""
    lap = laplacian_1d(n_side)
    rng = np.random.default_rng(12345)
    x = rng.standard_normal((n_side, n_side))
    x /= np.linalg.norm(x)
    lam = 1.0
    for _ in range(power_iters):
        gx = _gamma_apply(_gamma_apply(x, lap), lap)
        lam = float(np.linalg.norm(gx))
        if lam == 0.0:
            return 1.0
        x = gx / lam
    return lam


def reference_objective(z):
    lap = laplacian_1d(z.shape[0])
    g = _gamma_apply(np.asarray(z, dtype=np.float64), lap)
    return 0.5 * float(np.sum(g * g))


def reference_image(y, s, cfg=None):
    """Fill missing pixels by minimizing the Laplacian quadratic.

    Iterates projected gradient descent with a fixed step 0.95 / lambda_max
    (power-iteration estimate); observed pixels are reset to y after every
    step, so the output agrees with y on the sample support exactly.
    """
    if cfg is None:
        cfg = ReferenceConfig()
    y = np.asarray(y, dtype=np.float64)
    if not np.all(np.isfinite(y)):
        raise ValueError("observed image contains non-finite values")
    if y.shape != (s.n_side, s.n_side):
        raise ValueError(f"image shape {y.shape} does not match grid side {s.n_side}")
    mask = s.mask
    lap = laplacian_1d(s.n_side)
    lam = estimate_max_eigenvalue(s.n_side, cfg.power_iters)
    eta = cfg.step_safety / lam

    z = np.where(mask, y, float(y[mask].mean()))
    for _ in range(cfg.max_iters):
        grad = _gamma_apply(_gamma_apply(z, lap), lap)
        z_new = z - eta * grad
        z_new[mask] = y[mask]
        change = np.linalg.norm(z_new - z) / max(np.linalg.norm(z), 1.0)
        z = z_new
        if change <= cfg.tol:
            break
    return z


def _lattice_coords(extent, points):
    if points == 1:
        return np.array([(extent - 1) // 2], dtype=np.int64)
    return np.unique(np.round(np.linspace(0, extent - 1, points)).astype(np.int64))


def reference_anchors(k_groups, pcfg):
    """K anchors on an even ceil(sqrt(K)) x ceil(sqrt(K)) lattice, raster order."""
    side = int(np.ceil(np.sqrt(k_groups)))
    a = pcfg.anchor_side
    coords = _lattice_coords(a, side)
    if coords.size * coords.size < k_groups:
        raise ValueError(
            f"cannot place {k_groups} distinct reference anchors on a {a}x{a} grid"
        )
    rr, cc = np.meshgrid(coords, coords, indexing="ij")
    anchors = np.stack([rr.reshape(-1), cc.reshape(-1)], axis=1)
    return anchors[:k_groups]


def build_groups(reference, gcfg, pcfg):
    """Block matching against the reference image.

    Each group holds its reference anchor first, followed by the
    group_size - 1 nearest patches (squared Euclidean distance) among the
    anchors within a Chebyshev search window; exact ties are broken by
    raster order of the anchors. Deterministic.
    """
    reference = np.asarray(reference, dtype=np.float64)
    if reference.shape != (pcfg.n_side, pcfg.n_side):
        raise ValueError("reference shape does not match the patch configuration")
    a = pcfg.anchor_side
    sweep = PatchFrame(full_sweep_group(pcfg), pcfg)
    patch_cols = sweep.lift(reference)[0]  # (n^2, a*a), column j = patch at anchor j

    refs = reference_anchors(gcfg.k_groups, pcfg)
    groups = []
    for ar, ac in refs:
        r0, r1 = max(0, ar - gcfg.search_radius), min(a - 1, ar + gcfg.search_radius)
        c0, c1 = max(0, ac - gcfg.search_radius), min(a - 1, ac + gcfg.search_radius)
        rows = np.arange(r0, r1 + 1)
        cols = np.arange(c0, c1 + 1)
        rr, cc = np.meshgrid(rows, cols, indexing="ij")
        cand = rr.reshape(-1) * a + cc.reshape(-1)  # raster-ordered window anchors
        if cand.size < gcfg.group_size:
            raise ValueError(
                f"search window around anchor ({ar}, {ac}) holds {cand.size} anchors, "
                f"need at least {gcfg.group_size}"
            )
        ref_idx = ar * a + ac
        cand = cand[cand != ref_idx]
        diffs = patch_cols[:, cand] - patch_cols[:, [ref_idx]]
        dists = np.sum(diffs * diffs, axis=0)
        order = np.lexsort((cand, dists))  # distance first, raster index on ties
        chosen = cand[order[: gcfg.group_size - 1]]
        idx = np.concatenate([[ref_idx], chosen])
        groups.append(np.stack([idx // a, idx % a], axis=1))
    return PatchGroups(anchors=tuple(groups))
