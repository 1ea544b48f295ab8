from .main import (
    amplitude_damping,
    build_channel,
    collective_dephasing,
    custom_channel,
    damped_coherent_action,
    damping_displacement,
    damping_operator,
    default_damping_k_max,
    pauli_channel,
    simplified_loss,
    tp_defect,
    transform_channel,
)

__all__ = [
    "amplitude_damping",
    "build_channel",
    "collective_dephasing",
    "custom_channel",
    "damped_coherent_action",
    "damping_displacement",
    "damping_operator",
    "default_damping_k_max",
    "pauli_channel",
    "simplified_loss",
    "tp_defect",
    "transform_channel",
]
