from typing import Any

from pydantic import BaseModel as BaseInfo

from nlqec.antypes.config import ComplexPair


class GammaAlternativeInfo(BaseInfo):
    """Residual under a neighbouring block relation"""

    gamma: list[list[int]]
    residual_rel: float


class NecessaryConditionInfo(BaseInfo):
    """Hermitian pairing and moment-matrix check of the normalised V entries"""

    max_violation: float
    psd_min_eigenvalue: float | None
    psd_holds: bool | None
    pairs_checked: int
    pairs_skipped: int


class SqueezedDiagnosticsInfo(BaseInfo):
    """Closed forms of the squeezed-state example against direct evaluation"""

    orthogonal_ratio_formula: list[float]
    orthogonal_ratio_direct: list[float]
    orthogonal_ratio_max_deviation: float
    cross_defect_max_deviation: float


class KLReductionInfo(BaseInfo):
    """Knill-Laflamme conditions of a codeword alphabet"""

    holds: bool
    codeword_defect: float
    offdiag_defect: float
    residual_rel: float | None = None
    coefficient_spread: float | None = None


class CriterionReport(BaseInfo):
    """Factorization found for the sampled alphabet"""

    verdict: str
    residual_rel: float
    gamma: list[list[int]]
    blocks: list[list[int]]
    c: list[list[ComplexPair]]
    u: list[list[ComplexPair]]
    zero_mask: list[bool]
    reference_sample: int
    iterations: int
    converged: bool
    degenerate_spectrum: bool
    gamma_consistent: bool
    dichotomy_ok: bool
    epsilon_max: float
    epsilon_ratio_max: float | None
    orthogonality_defect: float
    gamma_alternatives: list[GammaAlternativeInfo]
    necessary: NecessaryConditionInfo
    squeezed: SqueezedDiagnosticsInfo | None = None
    kl_reduction: KLReductionInfo | None = None


class RecoveryReport(BaseInfo):
    """Recovery channel structure and simulated fidelities"""

    strategy: str
    blocks: list[list[int]]
    includes_r0: bool
    isometry_defect: float
    block_equality_defect: float
    completeness_defect: float
    projector_algebra_defect: float
    lambda_defect_max: float
    lambda_norm: list[float]
    fidelity: list[float]
    probability: list[float]
    branch_fidelity: list[list[float]]
    trace_defect_max: float | None
    mixed_defect: float | None = None


class DiagnosticsInfo(BaseInfo):
    """Truncation, channel and sampling diagnostics"""

    dim: int
    n_max: int | None
    k_max: int | None
    sample_count: int
    samples_pruned: int
    params: list[list[float]]
    truncation_defect_max: float
    tp_defect: float
    trace_preserving: bool


class Report(BaseInfo):
    """Machine-readable result of ``nlqec check`` or ``nlqec recover``"""

    tool_version: str
    command: str
    scenario: str
    seed: int
    exit_code: int
    config: dict[str, Any]
    criterion: CriterionReport | None = None
    recovery: RecoveryReport | None = None
    diagnostics: DiagnosticsInfo | None = None
    warnings: list[str] = []
    wall_time_s: float = 0.0


class MixedRecoveryInfo(BaseInfo):
    """Recovery of a classical mixture of alphabet states"""

    defect: float
    passed: bool
    weights: list[float]
    # trace of E(|psi_j><psi_j|)
    channel_weights: list[float]
    # sum over q, n of |lambda_qn(alpha_j)|^2
    component_weights: list[float]
