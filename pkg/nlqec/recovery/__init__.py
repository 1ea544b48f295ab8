from .main import (
    apply_channel,
    apply_recovery,
    branch_fidelity,
    build_code_projector,
    build_identity_recovery,
    build_isometries,
    build_recovery,
    code_basis,
    identity_lambda_table,
    jn_representation,
    lambda_defects,
    lambda_table,
    mixed_state_recovery_check,
    projector_algebra_defect,
    recovery_fidelity,
)

__all__ = [
    "apply_channel",
    "apply_recovery",
    "branch_fidelity",
    "build_code_projector",
    "build_identity_recovery",
    "build_isometries",
    "build_recovery",
    "code_basis",
    "identity_lambda_table",
    "jn_representation",
    "lambda_defects",
    "lambda_table",
    "mixed_state_recovery_check",
    "projector_algebra_defect",
    "recovery_fidelity",
]
