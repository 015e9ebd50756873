"""Patch-based low-rank image inpainting and its verification lab."""

from .errors import CoverageError, PgmFormatError
from .image import psnr, read_pgm, write_pgm
from .sampling import SampleSet, sample_uniform, apply_mask, read_mask, write_mask
from .patches import (
    PatchConfig,
    PatchGroups,
    PatchFrame,
    lift,
    adjoint_lift,
    occurrence_counts,
    audit_assumptions,
    full_sweep_group,
    groups_to_json,
    groups_from_json,
)
from .basis import (
    SamplingBasisElement,
    sampling_basis,
    b_norm,
    b_inf_norm,
    b_omega_values,
    project_range,
    project_range_complement,
    apply_sampling_operator,
    basis_coefficients,
)
from .tangent import TangentSpace, tangent_project, incoherence, block_ranks
from .solver import AdmmConfig, SolveReport, svt, admm_inpaint, write_report_csv
from .grouping import (
    ReferenceConfig,
    GroupingConfig,
    reference_image,
    build_groups,
    reference_anchors,
)
from .synthetic import SyntheticSpec, generate_synthetic
from .lab import (
    CertificateReport,
    TangentLab,
    concentration_probe,
    golfing_certificate,
    sampling_deviation,
    verify_lemma_bounds,
)
from .phase import PhasePoint, phase_transition, write_phase_csv, write_concentration_csv

__version__ = "0.1.0"

__all__ = [
    "AdmmConfig",
    "CertificateReport",
    "CoverageError",
    "GroupingConfig",
    "PatchConfig",
    "PatchFrame",
    "PatchGroups",
    "PgmFormatError",
    "PhasePoint",
    "ReferenceConfig",
    "SampleSet",
    "SamplingBasisElement",
    "SolveReport",
    "SyntheticSpec",
    "TangentLab",
    "TangentSpace",
    "adjoint_lift",
    "admm_inpaint",
    "apply_mask",
    "apply_sampling_operator",
    "audit_assumptions",
    "b_inf_norm",
    "b_norm",
    "b_omega_values",
    "basis_coefficients",
    "block_ranks",
    "build_groups",
    "concentration_probe",
    "full_sweep_group",
    "generate_synthetic",
    "golfing_certificate",
    "groups_from_json",
    "groups_to_json",
    "incoherence",
    "lift",
    "occurrence_counts",
    "phase_transition",
    "project_range",
    "project_range_complement",
    "psnr",
    "read_mask",
    "read_pgm",
    "reference_anchors",
    "reference_image",
    "sample_uniform",
    "sampling_basis",
    "sampling_deviation",
    "svt",
    "write_report_csv",
    "tangent_project",
    "verify_lemma_bounds",
    "write_mask",
    "write_pgm",
    "write_phase_csv",
    "write_concentration_csv",
]
