import numpy as np
import pytest
import scipy.linalg

from patchlr.patches import PatchConfig, full_sweep_group, lift
from patchlr.sampling import SampleSet, apply_mask, sample_uniform
from patchlr.solver import AdmmConfig, admm_inpaint, svt
from patchlr.synthetic import SyntheticSpec, generate_synthetic


def svt_oracle(m, tau):
    """Independent shrinkage via scipy's gesvd driver (different LAPACK path)."""
    u, s, vt = scipy.linalg.svd(m, full_matrices=False, lapack_driver="gesvd")
    return (u * np.maximum(s - tau, 0.0)) @ vt


def nuclear(m):
    return float(np.sum(np.linalg.svd(m, compute_uv=False)))


def test_svt_tau_zero_is_identity():
    rng = np.random.default_rng(0)
    m = rng.standard_normal((6, 4))
    assert np.allclose(svt(m, 0.0), m, atol=1e-10)


def test_svt_diagonal_case():
    assert np.allclose(svt(np.diag([3.0, 1.0]), 2.0), np.diag([1.0, 0.0]), atol=1e-12)


def test_svt_matches_oracle():
    rng = np.random.default_rng(1)
    for _ in range(50):
        rows = int(rng.integers(2, 21))
        cols = int(rng.integers(2, 31))
        m = rng.standard_normal((rows, cols)) * rng.uniform(0.1, 10)
        for tau in (0.0, 0.1, 1.0, 10.0):
            assert np.allclose(svt(m, tau), svt_oracle(m, tau), atol=1e-8)


def test_svt_rejects_bad_inputs():
    with pytest.raises(ValueError):
        svt(np.array([[np.nan, 0.0]]), 1.0)
    with pytest.raises(ValueError):
        svt(np.ones((2, 2)), -0.5)


def test_svt_nonexpansive():
    rng = np.random.default_rng(2)
    for _ in range(20):
        a = rng.standard_normal((7, 5))
        b = rng.standard_normal((7, 5))
        tau = float(rng.uniform(0, 3))
        lhs = np.linalg.norm(svt(a, tau) - svt(b, tau))
        assert lhs <= np.linalg.norm(a - b) + 1e-10


def test_svt_prox_optimality_against_perturbations():
    rng = np.random.default_rng(3)
    m = rng.standard_normal((5, 6))
    tau = 0.8

    def objective(x):
        return tau * nuclear(x) + 0.5 * np.linalg.norm(x - m) ** 2

    star = svt(m, tau)
    base = objective(star)
    for _ in range(100):
        pert = star + rng.standard_normal((5, 6)) * rng.uniform(1e-3, 1.0)
        assert objective(pert) >= base - 1e-10


def _recovery_instance(seed, n_side=32, components=1, patch_n=8):
    spec = SyntheticSpec(n_side=n_side, components=components, seed=seed)
    z = generate_synthetic(spec)
    cfg = PatchConfig(patch_n=patch_n, n_side=n_side)
    return z, cfg, full_sweep_group(cfg)


def test_full_observation_returns_input():
    z, cfg, groups = _recovery_instance(seed=4, n_side=16, patch_n=4)
    coords = [(r, c) for r in range(16) for c in range(16)]
    s = SampleSet(n_side=16, draws=np.array(coords))
    out, report = admm_inpaint(z, s, groups, cfg, AdmmConfig(max_iters=5))
    assert np.array_equal(out, z)


def test_exact_recovery_single_sinusoid():
    z, cfg, groups = _recovery_instance(seed=5)
    s = sample_uniform(32, 512, seed=7)
    y = apply_mask(z, s)
    acfg = AdmmConfig(rho=1.0, max_iters=500, tol_primal=1e-8, tol_dual=1e-8)
    out, report = admm_inpaint(y, s, groups, cfg, acfg)
    rel = np.linalg.norm(out - z) / np.linalg.norm(z)
    assert rel <= 1e-3
    assert np.array_equal(out[s.mask], y[s.mask])  # exact feasibility at exit


def test_objective_minimality_on_feasible_truth():
    z, cfg, groups = _recovery_instance(seed=6)
    s = sample_uniform(32, 512, seed=8)
    y = apply_mask(z, s)
    acfg = AdmmConfig(rho=1.0, max_iters=400, tol_primal=1e-8, tol_dual=1e-8)
    out, report = admm_inpaint(y, s, groups, cfg, acfg)
    truth_obj = sum(nuclear(b) for b in lift(z, groups, cfg))
    assert report.objective[-1] <= truth_obj * (1 + 1e-6) + 1e-8


def test_noise_ball_constraint_respected():
    z, cfg, groups = _recovery_instance(seed=9)
    s = sample_uniform(32, 614, seed=10)
    rng = np.random.default_rng(11)
    delta = 1.0
    noise = np.where(s.mask, rng.uniform(-delta, delta, z.shape), 0.0)
    y = apply_mask(z, s) + noise
    acfg = AdmmConfig(rho=1.0, max_iters=200, delta=delta)
    out, report = admm_inpaint(y, s, groups, cfg, acfg)
    resid = np.linalg.norm(out[s.mask] - y[s.mask])
    assert resid <= np.sqrt(s.m) * delta * (1 + 1e-9)


def test_noise_error_scales_linearly():
    # image-scale amplitudes so delta in {0.5, 1, 2} is a small perturbation
    spec = SyntheticSpec(n_side=32, components=3, seed=12, amp_range=(40.0, 80.0))
    z = generate_synthetic(spec)
    cfg = PatchConfig(patch_n=8, n_side=32)
    groups = full_sweep_group(cfg)
    s = sample_uniform(32, 614, seed=13)
    rng = np.random.default_rng(14)
    unit = np.where(s.mask, rng.choice([-1.0, 1.0], z.shape), 0.0)
    errors = []
    deltas = [0.5, 1.0, 2.0]
    for delta in deltas:
        y = apply_mask(z, s) + delta * unit
        acfg = AdmmConfig(rho=0.01, max_iters=600, delta=delta,
                          tol_primal=1e-9, tol_dual=1e-9)
        out, _ = admm_inpaint(y, s, groups, cfg, acfg)
        errors.append(np.linalg.norm(out - z))
    # slope-form stability: error grows about linearly with the noise level
    slope = sum(d * e for d, e in zip(deltas, errors)) / sum(d * d for d in deltas)
    fitted = [slope * d for d in deltas]
    ss_res = sum((e - f) ** 2 for e, f in zip(errors, fitted))
    ss_tot = sum(e ** 2 for e in errors)
    assert 1.0 - ss_res / ss_tot >= 0.9


def test_report_contents():
    z, cfg, groups = _recovery_instance(seed=15, n_side=16, patch_n=4)
    s = sample_uniform(16, 200, seed=16)
    y = apply_mask(z, s)
    out, report = admm_inpaint(y, s, groups, cfg, AdmmConfig(max_iters=50))
    assert report.iterations <= 50
    assert len(report.objective) == report.iterations
    assert len(report.group_ranks) == groups.k
    assert np.isfinite(report.primal_residual)
    assert np.isfinite(report.dual_residual)
    d = report.to_dict()
    assert set(d) >= {"iterations", "objective", "group_ranks", "converged"}


def test_rho_must_be_positive():
    with pytest.raises(ValueError):
        AdmmConfig(rho=0.0)
    with pytest.raises(ValueError):
        AdmmConfig(rho=-1.0)
