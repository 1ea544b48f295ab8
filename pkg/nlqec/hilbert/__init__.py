from .main import (
    PAULI,
    annihilation_op,
    basis_state,
    coherent_amplitudes,
    coherent_state,
    creation_op,
    default_cutoff,
    displacement_op,
    even_cat_state,
    fock_space,
    left_shift_op,
    number_op,
    odd_cat_state,
    pauli_op,
    pauli_string,
    sqrt_number_op,
    squeeze_op,
    squeezed_coherent_state,
    tensor,
    truncation_defect,
)

__all__ = [
    "PAULI",
    "annihilation_op",
    "basis_state",
    "coherent_amplitudes",
    "coherent_state",
    "creation_op",
    "default_cutoff",
    "displacement_op",
    "even_cat_state",
    "fock_space",
    "left_shift_op",
    "number_op",
    "odd_cat_state",
    "pauli_op",
    "pauli_string",
    "sqrt_number_op",
    "squeeze_op",
    "squeezed_coherent_state",
    "tensor",
    "truncation_defect",
]
