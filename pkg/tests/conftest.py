import os

import numpy as np
import pytest

from patchlr.patches import PatchConfig, PatchGroups, all_anchors

DATA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")


@pytest.fixture
def data_dir():
    return DATA_DIR


def random_covering_groups(rng, cfg, k_groups, group_size):
    """Random equal-size groups whose union is guaranteed to cover the image.

    Group 0 starts from an even anchor lattice with spacing <= patch side
    (those patches alone tile the image) and is padded with random anchors;
    the remaining groups are uniformly random anchor subsets.
    """
    anchors = all_anchors(cfg)
    a = cfg.anchor_side
    if cfg.boundary == "valid":
        step = cfg.patch_n
        lattice = []
        coords = sorted(set(list(range(0, a, step)) + [a - 1]))
        for r in coords:
            for c in coords:
                lattice.append(r * a + c)
        lattice = np.array(lattice)
    else:
        # periodic/symmetric anchors cover by themselves for any full row
        step = max(1, cfg.patch_n)
        coords = np.arange(0, a, step)
        rr, cc = np.meshgrid(coords, coords, indexing="ij")
        lattice = (rr * a + cc).reshape(-1)
    if lattice.size > group_size:
        raise ValueError(
            f"group_size {group_size} too small to cover with lattice {lattice.size}"
        )
    if group_size > anchors.shape[0]:
        raise ValueError("group_size exceeds the number of admissible anchors")
    groups = []
    for k in range(k_groups):
        if k == 0:
            rest = np.setdiff1d(np.arange(anchors.shape[0]), lattice)
            extra = rng.choice(rest, size=group_size - lattice.size, replace=False)
            idx = np.concatenate([lattice, extra])
        else:
            idx = rng.choice(anchors.shape[0], size=group_size, replace=False)
        groups.append(anchors[idx])
    return PatchGroups(anchors=tuple(groups))


def random_config(rng, boundaries=("valid", "periodic", "symmetric")):
    """A random small (cfg, groups) instance with guaranteed coverage."""
    n_side = int(rng.integers(6, 13))
    patch_n = int(rng.integers(2, 4))
    boundary = str(rng.choice(list(boundaries)))
    cfg = PatchConfig(patch_n=patch_n, n_side=n_side, boundary=boundary)
    k_groups = int(rng.choice([1, 2, 4]))
    lattice_need = (len(range(0, cfg.anchor_side, patch_n)) + 1) ** 2
    n_anchors = cfg.anchor_side ** 2
    group_size = int(min(rng.integers(lattice_need, 2 * lattice_need + 4), n_anchors))
    groups = random_covering_groups(rng, cfg, k_groups, group_size)
    return cfg, groups
