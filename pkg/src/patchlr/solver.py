"""ADMM for grouped nuclear-norm inpainting.

Solves

    min_z  sum_k || lift(z) block k ||_*
    s.t.   z matches the observations exactly (delta = 0), or
           the sampled residual lies in an l2 ball of radius sqrt(m)*delta.

The splitting introduces one auxiliary matrix W_k per group with the
consensus constraint W_k = lift(z) block k. The W-update is singular-value
thresholding with threshold 1/rho; the z-update is an exact per-pixel
average (the lift composed with its adjoint is diagonal with the occurrence
counts) followed by the data projection; the dual ascent is standard.
"""

from dataclasses import dataclass, field, asdict

import numpy as np

from .patches import PatchFrame
from .tangent import block_ranks, DEFAULT_RANK_TOL


def svt(matrix, tau):
    """Singular-value thresholding: the prox of tau * nuclear norm.

    Returns U diag(max(s - tau, 0)) V^T for a thin SVD of the input.
    """
    m = np.asarray(matrix, dtype=np.float64)
    if not np.all(np.isfinite(m)):
        raise ValueError("svt input contains non-finite values")
    if tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau}")
    u, s, vt = np.linalg.svd(m, full_matrices=False)
    s = np.maximum(s - tau, 0.0)
    keep = s > 0
    return (u[:, keep] * s[keep]) @ vt[keep, :]


@dataclass(frozen=True)
class AdmmConfig:
    rho: float = 1.0
    max_iters: int = 500
    tol_primal: float = 1e-6
    tol_dual: float = 1e-6
    delta: float = 0.0  # 0 -> equality constraint, >0 -> l2 ball radius sqrt(m)*delta

    def __post_init__(self):
        if self.rho <= 0:
            raise ValueError(f"rho must be positive, got {self.rho}")
        if self.tol_primal <= 0 or self.tol_dual <= 0:
            raise ValueError("tolerances must be positive")
        if self.delta < 0:
            raise ValueError(f"delta must be >= 0, got {self.delta}")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")


@dataclass
class SolveReport:
    iterations: int
    primal_residual: float
    dual_residual: float
    converged: bool
    group_ranks: list
    objective: list = field(default_factory=list)
    primal_history: list = field(default_factory=list)
    dual_history: list = field(default_factory=list)

    def to_dict(self):
        return asdict(self)


def write_report_csv(report, path):
    """Per-iteration trajectories as CSV: iter, objective, primal, dual."""
    import csv

    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iter", "objective", "primal_residual", "dual_residual"])
        rows = zip(report.objective, report.primal_history, report.dual_history)
        for i, (obj, pri, dua) in enumerate(rows, start=1):
            writer.writerow([i, repr(obj), repr(pri), repr(dua)])


def _blocks_norm(blocks):
    return float(np.sqrt(sum(float(np.sum(b * b)) for b in blocks)))


def _nuclear_objective(blocks):
    return float(sum(np.sum(np.linalg.svd(b, compute_uv=False)) for b in blocks))


def admm_inpaint(y, s, groups, pcfg, acfg):
    """Inpaint the image y observed on the sample set s.

    Returns (restored image, SolveReport). Every pixel must be covered by
    at least one patch of one group.
    """
    frame = PatchFrame(groups, pcfg)
    frame.require_coverage()
    y = np.asarray(y, dtype=np.float64)
    if y.shape != (pcfg.n_side, pcfg.n_side):
        raise ValueError(f"image shape {y.shape} does not match n_side {pcfg.n_side}")
    if not np.all(np.isfinite(y)):
        raise ValueError("observed image contains non-finite values")

    mask = s.mask
    observed = y[mask]
    radius = np.sqrt(s.m) * acfg.delta
    counts = frame.counts_flat.astype(np.float64)

    z = np.where(mask, y, float(observed.mean()))
    gz = frame.lift(z)
    w = [b.copy() for b in gz]
    dual = frame.zero_blocks()
    rho = acfg.rho

    report = SolveReport(
        iterations=0,
        primal_residual=np.inf,
        dual_residual=np.inf,
        converged=False,
        group_ranks=[],
    )

    for it in range(1, acfg.max_iters + 1):
        # W-update: prox of the nuclear norm at lift(z) - dual/rho
        w = [svt(g - d / rho, 1.0 / rho) for g, d in zip(gz, dual)]

        # z-update: per-pixel average of W + dual/rho, then data projection
        acc = frame.adjoint([wk + d / rho for wk, d in zip(w, dual)]).reshape(-1)
        z = (acc / counts).reshape(pcfg.n_side, pcfg.n_side)
        if acfg.delta == 0.0:
            z[mask] = observed
        else:
            resid = z[mask] - observed
            nrm = float(np.linalg.norm(resid))
            if nrm > radius:
                resid *= radius / nrm
            z[mask] = observed + resid

        gz_new = frame.lift(z)
        dual = [d + rho * (wk - g) for d, wk, g in zip(dual, w, gz_new)]

        primal = _blocks_norm([wk - g for wk, g in zip(w, gz_new)])
        primal /= max(_blocks_norm(w), _blocks_norm(gz_new), 1.0)
        dual_res = rho * _blocks_norm([g - gp for g, gp in zip(gz_new, gz)])
        dual_res /= max(_blocks_norm(dual), 1.0)
        gz = gz_new

        report.objective.append(_nuclear_objective(w))
        report.primal_history.append(primal)
        report.dual_history.append(dual_res)
        report.iterations = it
        report.primal_residual = primal
        report.dual_residual = dual_res
        if primal < acfg.tol_primal and dual_res < acfg.tol_dual:
            report.converged = True
            break

    report.group_ranks, _ = block_ranks(w, DEFAULT_RANK_TOL)
    return z, report
