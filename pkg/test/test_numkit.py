import numpy as np
import pytest
from numpy.testing import assert_allclose

from nlqec.antypes import FockSpace
from nlqec.core.errors import (
    DimensionMismatch,
    NonAntiHermitianInput,
    NonHermitianInput,
)
from nlqec.hilbert import coherent_state
from nlqec.numkit import (
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


def _random_matrix(rng, n, m=None):
    m = n if m is None else m
    return rng.normal(size=(n, m)) + 1j * rng.normal(size=(n, m))


def _random_unitary(rng, n):
    q, _ = np.linalg.qr(_random_matrix(rng, n))
    return q


def test_eig_hermitian_diagonal():
    w, v = eig_hermitian(np.diag([2.0, 1.0]).astype(complex))
    assert_allclose(w, [1.0, 2.0])
    assert_allclose(np.abs(v), [[0, 1], [1, 0]], atol=1e-15)


def test_eig_hermitian_pauli_x():
    w, v = eig_hermitian(np.array([[0, 1], [1, 0]], dtype=complex))
    assert_allclose(w, [-1.0, 1.0], atol=1e-15)
    assert_allclose(np.abs(v), np.full((2, 2), 1 / np.sqrt(2)), atol=1e-15)
    # first significant entry of every column is real and positive
    assert np.all(v[0].real > 0) and np.all(np.abs(v[0].imag) < 1e-15)


def test_eig_hermitian_reconstruction():
    rng = np.random.default_rng(7)
    a = _random_matrix(rng, 8)
    h = a + dagger(a)
    w, v = eig_hermitian(h)
    assert frobenius(v @ np.diag(w) @ dagger(v) - h) <= 1e-12 * frobenius(h)
    assert unitarity_defect(v) <= 1e-12


def test_eig_hermitian_rejects_non_hermitian():
    with pytest.raises(NonHermitianInput, match="not Hermitian"):
        eig_hermitian(np.array([[0, 1], [0, 0]], dtype=complex))


def test_eig_hermitian_rejects_non_square():
    with pytest.raises(DimensionMismatch):
        eig_hermitian(np.zeros((2, 3)))


@pytest.mark.parametrize(
    "m, expected",
    [
        (np.zeros((3, 3)), [0, 0, 0]),
        (np.eye(3), [1, 1, 1]),
        (np.array([[0, 2], [0, 0]]), [2, 0]),
    ],
)
def test_svd_singular_values(m, expected):
    u, s, v = svd(m)
    assert_allclose(s, expected, atol=1e-15)
    assert_allclose(u @ np.diag(s) @ dagger(v), m, atol=1e-14)


def test_polar_of_unitary():
    u = _random_unitary(np.random.default_rng(1), 4)
    iso, h = polar_decompose(u)
    assert_allclose(iso, u, atol=1e-12)
    assert_allclose(h, np.eye(4), atol=1e-12)


def test_polar_of_nilpotent():
    m = np.array([[0, 2], [0, 0]], dtype=complex)
    iso, h = polar_decompose(m)
    assert_allclose(h, np.diag([0.0, 2.0]), atol=1e-15)
    assert_allclose(iso @ np.array([0, 1]), [1, 0], atol=1e-15)
    assert_allclose(iso @ h, m, atol=1e-15)
    assert unitarity_defect(iso) <= 1e-14


def test_polar_of_positive_scaling():
    iso, h = polar_decompose(3 * np.eye(3))
    assert_allclose(iso, np.eye(3), atol=1e-15)
    assert_allclose(h, 3 * np.eye(3), atol=1e-14)


def test_closest_unitary_drops_scaling():
    u = _random_unitary(np.random.default_rng(2), 3)
    assert_allclose(closest_unitary(2.5 * u), u, atol=1e-12)


def test_isometric_part_of_tall_matrix():
    m = _random_matrix(np.random.default_rng(3), 6, 3)
    w = isometric_part(m)
    assert w.shape == (6, 3)
    assert unitarity_defect(w) <= 1e-12


def test_orthonormalize_identical_columns():
    e = np.array([1.0, 0.0, 0.0])
    q, rank = orthonormalize(np.stack([e, e], axis=1), 1e-8)
    assert rank == 1
    assert q.shape == (3, 1)


def test_orthonormalize_basis_columns():
    cols = np.eye(3)[:, :2]
    q, rank = orthonormalize(cols, 1e-8)
    assert rank == 2
    assert_allclose(np.abs(q), cols, atol=1e-15)


def test_orthonormalize_close_coherent_states():
    space = FockSpace(n_max=40)
    cols = np.stack([coherent_state(2.0, space), coherent_state(2.001, space)], axis=1)
    _, rank = orthonormalize(cols, 1e-8)
    assert rank == 2


def test_orthonormalize_needs_positive_tolerance():
    with pytest.raises(ValueError, match="rank_tol"):
        orthonormalize(np.eye(2), 0.0)


def test_expm_of_zero_is_identity():
    assert_allclose(expm_antihermitian(np.zeros((3, 3))), np.eye(3), atol=1e-15)


def test_expm_of_diagonal_generator():
    g = 1j * np.pi * np.diag([1.0, 0.0])
    assert_allclose(expm_antihermitian(g), np.diag([-1.0, 1.0]), atol=1e-15)


def test_expm_inverse():
    a = _random_matrix(np.random.default_rng(4), 4)
    g = a - dagger(a)
    product = expm_antihermitian(g) @ expm_antihermitian(-g)
    assert frobenius(product - np.eye(4)) <= 1e-12


def test_expm_rejects_hermitian_generator():
    with pytest.raises(NonAntiHermitianInput):
        expm_antihermitian(np.array([[1, 0], [0, 2]], dtype=complex))


def test_joint_diagonalize_commuting_set():
    rng = np.random.default_rng(5)
    q = _random_unitary(rng, 4)
    mats = np.stack([q @ np.diag(rng.normal(size=4)) @ dagger(q) for _ in range(3)])
    v, sweeps = joint_diagonalize(mats)
    assert sweeps >= 1
    assert unitarity_defect(v) <= 1e-10
    for m in mats:
        d = dagger(v) @ m @ v
        assert frobenius(d - np.diag(np.diag(d))) <= 1e-8


def test_defect_helpers():
    assert hermitian_defect(np.array([[1, 2j], [-2j, 1]])) == 0.0
    assert hermitian_defect(np.array([[0, 1], [0, 0]])) == 1.0
    assert unitarity_defect(np.eye(3)) == 0.0
