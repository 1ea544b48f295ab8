from .main import (
    EIG_TOL,
    HERM_TOL,
    POLAR_TOL,
    SVD_TOL,
    closest_unitary,
    dagger,
    eig_hermitian,
    expm_antihermitian,
    frobenius,
    hermitian_defect,
    isometric_part,
    joint_diagonalize,
    orthonormalize,
    polar_decompose,
    svd,
    unitarity_defect,
)

__all__ = [
    "EIG_TOL",
    "HERM_TOL",
    "POLAR_TOL",
    "SVD_TOL",
    "closest_unitary",
    "dagger",
    "eig_hermitian",
    "expm_antihermitian",
    "frobenius",
    "hermitian_defect",
    "isometric_part",
    "joint_diagonalize",
    "orthonormalize",
    "polar_decompose",
    "svd",
    "unitarity_defect",
]
