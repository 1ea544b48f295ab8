from .approximate import (
    approximate_metrics,
    cat_overlap_identity,
    jn_operators,
    kl_reduction_check,
    necessary_condition_check,
    squeezed_cross_defect,
    squeezed_diagnostics,
    squeezed_omega,
    squeezed_orthogonal_ratio,
)
from .main import (
    align_gauge,
    build_v_tensor,
    criterion_residual,
    extract_coefficients,
    fix_gauge,
    gamma_blocks,
    infer_gamma,
    model_tensor,
    solve_factorization,
    spectral_init,
    transform_tensor,
    verdict,
)

__all__ = [
    "align_gauge",
    "approximate_metrics",
    "build_v_tensor",
    "cat_overlap_identity",
    "criterion_residual",
    "extract_coefficients",
    "fix_gauge",
    "gamma_blocks",
    "infer_gamma",
    "jn_operators",
    "kl_reduction_check",
    "model_tensor",
    "necessary_condition_check",
    "solve_factorization",
    "spectral_init",
    "squeezed_cross_defect",
    "squeezed_diagnostics",
    "squeezed_omega",
    "squeezed_orthogonal_ratio",
    "transform_tensor",
    "verdict",
]
