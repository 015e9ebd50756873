"""Desk-scale numerical verification of the sampling machinery.

Everything here works on small instances where the tangent space T of the
lifted matrix can be represented explicitly: operators restricted to T are
assembled against an orthonormal basis of T (rank-one products of singular
vectors and their orthogonal complements), giving exact spectral norms
instead of stochastic estimates. A hard dimension guard keeps runs at desk
scale.
"""

import math
from dataclasses import dataclass, asdict

import numpy as np

from .basis import (
    apply_sampling_operator,
    b_norm,
    b_omega_values,
    basis_element_blocks,
    project_range,
    sampling_basis,
)
from .patches import PatchFrame
from .tangent import TangentSpace, incoherence, tangent_project

DEFAULT_DIM_GUARD = 2000


@dataclass
class CertificateReport:
    cond1_residual: float  # ||(B - B'_Lambda)(Y)||_F, identically 0 up to fp
    cond2_norm: float  # ||P_T_perp(Y)||_op
    cond3_error: float  # ||U V^T - P_T(Y)||_F
    decay: list  # ||F_i||_F for i = 0..L
    L: int
    q: float
    y_norm: float  # ||Y||_F, the scale for the cond1 identity check
    telescoping_residual: float  # ||U V^T - P_T(Y) - P_T(F_L)||_F

    def to_dict(self):
        return asdict(self)


class TangentLab:
    """A fixed instance: image, groups, frame, tangent space, and basis.

    The orthonormal tangent basis per block is {u_i v_j^T : i < r_k} union
    {u_i v_j^T : i >= r_k, j < r_k} over full orthonormal extensions of the
    block's singular vectors; its coefficients against the sampling basis
    fill the dim(T) x N^2 matrix S used to assemble restricted operators.
    """

    def __init__(self, z, groups, pcfg, dim_guard=DEFAULT_DIM_GUARD):
        self.frame = PatchFrame(groups, pcfg)
        self.frame.require_coverage()
        self.z = np.asarray(z, dtype=np.float64)
        self.blocks = self.frame.lift(self.z)
        us, sigmas, vs, ufulls, vfulls = [], [], [], [], []
        for b in self.blocks:
            u, s, vt = np.linalg.svd(b, full_matrices=True)
            smax = s[0] if s.size else 0.0
            r = int(np.count_nonzero(s > 1e-8 * smax)) if smax > 0 else 0
            us.append(u[:, :r])
            sigmas.append(s[:r])
            vs.append(vt[:r, :].T)
            ufulls.append(u)
            vfulls.append(vt.T)
        self.space = TangentSpace(us=tuple(us), sigmas=tuple(sigmas), vs=tuple(vs))
        self._ufulls = ufulls
        self._vfulls = vfulls
        dims = [
            r * (u.shape[0] + v.shape[0] - r)
            for r, u, v in zip(self.space.block_ranks, us, vs)
        ]
        self.dim_t = int(sum(dims))
        if self.dim_t > dim_guard:
            raise ValueError(
                f"tangent-space dimension {self.dim_t} exceeds the guard {dim_guard}"
            )
        self._s_matrix = None

    @property
    def n_pixels(self):
        return self.frame.n_pixels

    def tangent_basis(self):
        """Yield (block index, left vector, right vector) rank-one factors."""
        for k, (uf, vf) in enumerate(zip(self._ufulls, self._vfulls)):
            r = self.space.block_ranks[k]
            n2, g = uf.shape[0], vf.shape[0]
            for i in range(r):
                for j in range(g):
                    yield k, uf[:, i], vf[:, j]
            for i in range(r, n2):
                for j in range(r):
                    yield k, uf[:, i], vf[:, j]

    @property
    def s_matrix(self):
        """S[a, w] = <T_a, B_w> for tangent basis T_a, shape (dim_t, N^2)."""
        if self._s_matrix is None:
            c = self.frame.counts_flat.astype(np.float64)
            inv_sqrt_c = 1.0 / np.sqrt(c)
            s = np.zeros((self.dim_t, self.n_pixels))
            for a, (k, u, v) in enumerate(self.tangent_basis()):
                e = np.outer(u, v)
                sums = np.bincount(
                    self.frame.pix[k].reshape(-1),
                    weights=e.reshape(-1),
                    minlength=self.n_pixels,
                )
                s[a] = sums * inv_sqrt_c
            self._s_matrix = s
        return self._s_matrix

    def restricted_projector_operator(self):
        """Matrix of P_T B P_T on T (exact, via the basis coefficients)."""
        s = self.s_matrix
        return s @ s.T

    def restricted_sampling_operator(self, multiplicity):
        """Matrix of P_T B_Lambda P_T on T for a sampling multiplicity vector."""
        s = self.s_matrix
        mult = np.asarray(multiplicity, dtype=np.float64).reshape(-1)
        return (s * mult) @ s.T


def sampling_deviation(lab, multiplicity, m):
    """Spectral norm of (N^2/m) P_T B_Lambda P_T - P_T B P_T restricted to T."""
    op0 = lab.restricted_projector_operator()
    op1 = (lab.n_pixels / m) * lab.restricted_sampling_operator(multiplicity)
    eig = np.linalg.eigvalsh(op1 - op0)
    return float(np.max(np.abs(eig)))


def concentration_probe(z, groups, pcfg, m, trials, seed, dim_guard=DEFAULT_DIM_GUARD):
    """Per-trial deviations of the rescaled sampling operator on T.

    Each trial draws a fresh multiset of m uniform pixels and measures the
    spectral-norm deviation of (N^2/m) P_T B_Lambda P_T from P_T B P_T.
    Also accumulates the empirical mean of the sampled operator across
    trials and reports its deviation (the Monte-Carlo unbiasedness check).
    """
    if m < 1 or trials < 1:
        raise ValueError("m and trials must be >= 1")
    lab = TangentLab(z, groups, pcfg, dim_guard=dim_guard)
    n_side = pcfg.n_side
    children = np.random.SeedSequence(seed).spawn(trials)
    deviations = np.empty(trials)
    mean_mult = np.zeros(lab.n_pixels)
    op0 = lab.restricted_projector_operator()
    s = lab.s_matrix
    for t in range(trials):
        rng = np.random.default_rng(children[t])
        draws = rng.integers(0, n_side, size=(m, 2))
        mult = np.bincount(
            draws[:, 0] * n_side + draws[:, 1], minlength=lab.n_pixels
        ).astype(np.float64)
        mean_mult += mult
        op1 = (lab.n_pixels / m) * ((s * mult) @ s.T)
        deviations[t] = float(np.max(np.abs(np.linalg.eigvalsh(op1 - op0))))
    mean_mult /= trials
    mean_op = (lab.n_pixels / m) * ((s * mean_mult) @ s.T)
    mean_dev = float(np.max(np.abs(np.linalg.eigvalsh(mean_op - op0))))
    return {
        "deviations": deviations,
        "mean_operator_deviation": mean_dev,
        "dim_t": lab.dim_t,
    }


def golfing_certificate(z, groups, pcfg, m, seed, dim_guard=DEFAULT_DIM_GUARD):
    """Build the dual certificate by the golfing scheme and report its quality.

    Partitions m uniform draws into L = ceil(4 ln N) batches (sizes differing
    by at most one; each batch uses its own q_i = |batch| / N^2), iterates

        F_0 = U V^T,   F_i = P_T (B - (1/q_i) B_{batch i}) P_T (F_{i-1}),

    and accumulates Y = sum_i ((1/q_i) B_{batch i} + B_perp)(F_{i-1}).
    """
    n_side = pcfg.n_side
    big_l = max(1, math.ceil(4.0 * math.log(n_side)))
    if m < big_l:
        raise ValueError(f"need m >= L = {big_l} samples, got {m}")
    lab = TangentLab(z, groups, pcfg, dim_guard=dim_guard)
    frame = lab.frame
    counts = frame.counts_flat.astype(np.float64)

    rng = np.random.default_rng(seed)
    draws = rng.integers(0, n_side, size=(m, 2))
    flat = draws[:, 0] * n_side + draws[:, 1]
    base, extra = divmod(m, big_l)
    sizes = [base + (1 if i < extra else 0) for i in range(big_l)]
    bounds = np.cumsum([0] + sizes)

    f_blocks = lab.space.uv_blocks()
    y_blocks = frame.zero_blocks()
    decay = [float(np.sqrt(sum(np.sum(b * b) for b in f_blocks)))]

    def lift_scaled(weights):
        img = (weights / counts).reshape(n_side, n_side)
        return frame.lift(img)

    for i in range(big_l):
        batch = flat[bounds[i]:bounds[i + 1]]
        mult = np.bincount(batch, minlength=lab.n_pixels).astype(np.float64)
        q_i = sizes[i] / lab.n_pixels
        s_f = frame.adjoint(f_blocks).reshape(-1)
        b_f = lift_scaled(s_f)  # B(F)
        bl_f = lift_scaled(mult * s_f)  # B_batch(F)
        # Y += (1/q_i) B_batch(F) + (F - B(F))
        y_blocks = [
            y + bl / q_i + f - bf
            for y, bl, f, bf in zip(y_blocks, bl_f, f_blocks, b_f)
        ]
        diff = [bf - bl / q_i for bf, bl in zip(b_f, bl_f)]
        f_blocks = tangent_project(diff, lab.space)
        decay.append(float(np.sqrt(sum(np.sum(b * b) for b in f_blocks))))

    # condition (dual 1): Y is built from sampled basis atoms and range
    # complements, so (B - B'_Lambda)(Y) vanishes identically
    distinct = (np.bincount(flat, minlength=lab.n_pixels) > 0).astype(np.float64)
    b_y = project_range(y_blocks, frame)
    bprime_y = apply_sampling_operator(y_blocks, frame, distinct)
    cond1 = float(
        np.sqrt(sum(np.sum((a - b) ** 2) for a, b in zip(b_y, bprime_y)))
    )

    pt_y = tangent_project(y_blocks, lab.space)
    perp = [y - p for y, p in zip(y_blocks, pt_y)]
    cond2 = max(
        (float(np.linalg.svd(b, compute_uv=False)[0]) if min(b.shape) else 0.0)
        for b in perp
    )

    uv = lab.space.uv_blocks()
    cond3 = float(np.sqrt(sum(np.sum((a - b) ** 2) for a, b in zip(uv, pt_y))))
    pt_f = tangent_project(f_blocks, lab.space)
    telescoping = float(
        np.sqrt(
            sum(np.sum((u - p - f) ** 2) for u, p, f in zip(uv, pt_y, pt_f))
        )
    )

    return CertificateReport(
        cond1_residual=cond1,
        cond2_norm=cond2,
        cond3_error=cond3,
        decay=decay,
        L=big_l,
        q=m / (lab.n_pixels * big_l),
        y_norm=float(np.sqrt(sum(np.sum(b * b) for b in y_blocks))),
        telescoping_residual=telescoping,
    )


def verify_lemma_bounds(z, groups, pcfg, dim_guard=DEFAULT_DIM_GUARD):
    """Exhaustive check of the tangent-projected basis-element bounds.

    For every pixel w, evaluates ||P_T(B_w)||_F^2 against mu * r / N^2 and
    ||P_T(b_w^-1 B_w)||_B^2 against 16 M mu r / N^2, where
    mu = 8 c_s^-2 M K^-1 nu and c_s = min(n^2, group_size) / N^2.
    """
    lab = TangentLab(z, groups, pcfg, dim_guard=dim_guard)
    frame = lab.frame
    n2 = pcfg.patch_n ** 2
    group_size = lab.frame.groups.group_size
    k_groups = lab.frame.groups.k
    n_pix = lab.n_pixels

    r = lab.space.rank
    nu = incoherence(lab.space)["nu"] if r > 0 else 0.0
    m_ratio = frame.m_ratio
    c_s = min(n2 / n_pix, group_size / n_pix)
    mu = 8.0 * c_s ** -2 * m_ratio * nu / k_groups
    bound_frob = mu * r / n_pix
    bound_bnorm = 16.0 * m_ratio * mu * r / n_pix

    b_values = b_omega_values(frame)
    max_frob = 0.0
    max_bnorm = 0.0
    for row in range(pcfg.n_side):
        for col in range(pcfg.n_side):
            elem = sampling_basis((row, col), groups, pcfg, frame=frame)
            blocks = basis_element_blocks(elem, frame)
            pt = tangent_project(blocks, lab.space)
            frob_sq = float(sum(np.sum(b * b) for b in pt))
            max_frob = max(max_frob, frob_sq)
            scaled = [b / elem.b_omega for b in pt]
            max_bnorm = max(max_bnorm, b_norm(scaled, frame, b_values=b_values) ** 2)

    return {
        "r": r,
        "nu": nu,
        "m_ratio": m_ratio,
        "c_s": c_s,
        "mu": mu,
        "max_frob_sq": max_frob,
        "bound_frob_sq": bound_frob,
        "frob_ok": max_frob <= bound_frob * (1 + 1e-12),
        "max_frob_ratio": max_frob / bound_frob if bound_frob > 0 else 0.0,
        "max_bnorm_sq": max_bnorm,
        "bound_bnorm_sq": bound_bnorm,
        "bnorm_ok": max_bnorm <= bound_bnorm * (1 + 1e-12),
        "max_bnorm_ratio": max_bnorm / bound_bnorm if bound_bnorm > 0 else 0.0,
    }
