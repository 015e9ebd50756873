"""The sampling basis {B_w} of the lifted space and its induced norms.

B_w is the lift of pixel w's indicator image, scaled by 1/sqrt(c_w) so that
each element has unit Frobenius norm. The family has pairwise disjoint
supports, which makes every operator built from it (the range projector,
the multiset sampling operator, its distinct-support variant) diagonal in
the pixel basis: inner products against all B_w reduce to one adjoint-lift
pass, and reconstruction reduces to one lift pass.
"""

from dataclasses import dataclass

import numpy as np

from .errors import CoverageError


@dataclass(frozen=True)
class SamplingBasisElement:
    pixel: tuple  # (row, col)
    support: tuple  # ((block, row, col), ...) lift positions of the pixel
    c_omega: int
    b_omega: float  # operator norm of B_w


def basis_coefficients(blocks, frame):
    """<M, B_w> for every pixel w, as a flat (N^2,) array.

    Zero where the pixel is uncovered (the basis element does not exist
    there; callers needing full coverage should check the frame first).
    """
    s = frame.adjoint(blocks).reshape(-1)
    c = frame.counts_flat
    out = np.zeros_like(s)
    covered = c > 0
    out[covered] = s[covered] / np.sqrt(c[covered])
    return out


def project_range(blocks, frame):
    """Orthogonal projection onto the range of the lift (the operator B)."""
    s = frame.adjoint(blocks).reshape(-1)
    c = frame.counts_flat
    img = np.zeros_like(s)
    covered = c > 0
    img[covered] = s[covered] / c[covered]
    return frame.lift(img.reshape(frame.cfg.n_side, frame.cfg.n_side))


def project_range_complement(blocks, frame):
    """The complement B_perp = I - B."""
    proj = project_range(blocks, frame)
    return [b - p for b, p in zip(blocks, proj)]


def apply_sampling_operator(blocks, frame, multiplicity):
    """B_Lambda for a multiset of pixels given by its multiplicity vector.

    With multiplicity clipped to {0, 1} this is the distinct-support
    operator B'_Lambda, which is a projector; with raw draw counts it is
    the (non-projector) multiset sum.
    """
    mult = np.asarray(multiplicity, dtype=np.float64).reshape(-1)
    if mult.shape != (frame.n_pixels,):
        raise ValueError(f"multiplicity must be flat ({frame.n_pixels},)")
    s = frame.adjoint(blocks).reshape(-1)
    c = frame.counts_flat
    img = np.zeros_like(s)
    covered = c > 0
    img[covered] = mult[covered] * s[covered] / c[covered]
    return frame.lift(img.reshape(frame.cfg.n_side, frame.cfg.n_side))


def _support_positions(frame):
    """Per-pixel lists of (block, row, col) lift positions.

    Returns (order, splits) so that positions of pixel w live in
    order[splits[w]:splits[w+1]], encoded as flat indices into the
    concatenation of all blocks.
    """
    concat = frame._pix_concat
    order = np.argsort(concat, kind="stable")
    sorted_pix = concat[order]
    splits = np.searchsorted(sorted_pix, np.arange(frame.n_pixels + 1))
    return order, splits


def _decode_position(flat_index, frame):
    for k, p in enumerate(frame.pix):
        if flat_index < p.size:
            i, j = divmod(int(flat_index), p.shape[1])
            return (k, i, j)
        flat_index -= p.size
    raise IndexError(flat_index)


def _pattern_norm(positions):
    """Largest singular value of the 0/1 pattern at the given (block,row,col)s.

    The pattern is block-structured; the spectral norm is the max over
    blocks, each computed by dense SVD of the submatrix spanned by the
    touched rows and columns (at most c_w of each).
    """
    by_block = {}
    for k, i, j in positions:
        by_block.setdefault(k, []).append((i, j))
    worst = 0.0
    for entries in by_block.values():
        rows = sorted({i for i, _ in entries})
        cols = sorted({j for _, j in entries})
        sub = np.zeros((len(rows), len(cols)))
        rmap = {r: a for a, r in enumerate(rows)}
        cmap = {c: a for a, c in enumerate(cols)}
        for i, j in entries:
            sub[rmap[i], cmap[j]] += 1.0
        worst = max(worst, float(np.linalg.svd(sub, compute_uv=False)[0]))
    return worst


def sampling_basis(pixel, groups, cfg, frame=None):
    """Construct B_w for one pixel: support, count, and exact operator norm."""
    from .patches import PatchFrame

    if frame is None:
        frame = PatchFrame(groups, cfg)
    r, c = int(pixel[0]), int(pixel[1])
    w = r * cfg.n_side + c
    order, splits = _support_positions(frame)
    lo, hi = splits[w], splits[w + 1]
    if hi == lo:
        raise CoverageError((r, c))
    positions = tuple(_decode_position(int(f), frame) for f in order[lo:hi])
    c_omega = hi - lo
    b_omega = _pattern_norm(positions) / np.sqrt(c_omega)
    return SamplingBasisElement(
        pixel=(r, c), support=positions, c_omega=int(c_omega), b_omega=float(b_omega)
    )


def basis_element_blocks(elem, frame):
    """Materialize B_w as dense blocks (entries 1/sqrt(c_w) on the support)."""
    blocks = frame.zero_blocks()
    v = 1.0 / np.sqrt(elem.c_omega)
    for k, i, j in elem.support:
        blocks[k][i, j] += v
    return blocks


def b_omega_values(frame):
    """Operator norms b_w of every basis element, flat (N^2,).

    Zero for uncovered pixels.
    """
    frame_order, splits = _support_positions(frame)
    out = np.zeros(frame.n_pixels)
    for w in range(frame.n_pixels):
        lo, hi = splits[w], splits[w + 1]
        if hi == lo:
            continue
        positions = [_decode_position(int(f), frame) for f in frame_order[lo:hi]]
        out[w] = _pattern_norm(positions) / np.sqrt(hi - lo)
    return out


def b_norm(blocks, frame, b_values=None):
    """Weighted l2 norm over basis coefficients: (sum_w b_w^2 <M,B_w>^2)^(1/2)."""
    if b_values is None:
        b_values = b_omega_values(frame)
    coeff = basis_coefficients(blocks, frame)
    return float(np.sqrt(np.sum((b_values * coeff) ** 2)))


def b_inf_norm(blocks, frame, b_values=None):
    """Weighted max norm over basis coefficients: max_w b_w |<M,B_w>|."""
    if b_values is None:
        b_values = b_omega_values(frame)
    coeff = basis_coefficients(blocks, frame)
    return float(np.max(np.abs(b_values * coeff)))
