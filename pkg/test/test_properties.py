import numpy as np
import pytest
from numpy.testing import assert_allclose

from nlqec.alphabets import coherent_family, fixed_phase_family, sample_parameters
from nlqec.antypes import DomainAxis, FockSpace
from nlqec.channels import collective_dephasing, simplified_loss, transform_channel
from nlqec.criterion import build_v_tensor, criterion_residual, solve_factorization
from nlqec.numkit import (
    dagger,
    eig_hermitian,
    expm_antihermitian,
    hermitian_defect,
    orthonormalize,
    polar_decompose,
    unitarity_defect,
)
from nlqec.recovery import (
    apply_channel,
    build_code_projector,
    build_isometries,
    build_recovery,
    projector_algebra_defect,
    recovery_fidelity,
)

DRAWS = 100


def _random_matrix(rng, n, m=None):
    m = n if m is None else m
    return rng.normal(size=(n, m)) + 1j * rng.normal(size=(n, m))


def _random_unitary(rng, n):
    q, r = np.linalg.qr(_random_matrix(rng, n))
    return q * (np.diag(r) / np.abs(np.diag(r)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def test_expm_of_antihermitian_is_unitary(rng):
    for _ in range(DRAWS):
        n = int(rng.integers(1, 9))
        m = _random_matrix(rng, n)
        g = 0.5 * (m - dagger(m))
        assert unitarity_defect(expm_antihermitian(g)) <= 1e-12 * n


def test_polar_factors(rng):
    for _ in range(DRAWS):
        n = int(rng.integers(1, 9))
        m = _random_matrix(rng, n)
        iso, h = polar_decompose(m)
        assert unitarity_defect(iso) <= 1e-12 * n
        assert hermitian_defect(h) == 0.0
        assert np.min(np.linalg.eigvalsh(h)) >= -1e-10
        assert_allclose(iso @ h, m, atol=1e-10)


def test_eig_reconstructs_matrix(rng):
    for _ in range(DRAWS):
        n = int(rng.integers(1, 9))
        m = _random_matrix(rng, n)
        h = m + dagger(m)
        w, v = eig_hermitian(h)
        assert np.all(np.diff(w) >= 0)
        assert unitarity_defect(v) <= 1e-12 * n
        assert_allclose((v * w) @ dagger(v), h, atol=1e-10)


def test_orthonormal_basis_gives_projector(rng):
    for _ in range(DRAWS):
        dim = int(rng.integers(2, 10))
        rank = int(rng.integers(1, dim + 1))
        columns = _random_matrix(rng, dim, rank) @ _random_matrix(rng, rank, dim)
        q, found = orthonormalize(columns, 1e-10)
        p = q @ dagger(q)
        assert found == rank
        assert_allclose(p @ p, p, atol=1e-10)
        assert_allclose(p @ columns, columns, atol=1e-9)


def test_mixed_kraus_set_has_the_same_action(rng):
    for _ in range(DRAWS):
        channel = collective_dephasing(float(rng.uniform()))
        m = _random_matrix(rng, 4)
        rho = m @ dagger(m)
        mixed = transform_channel(channel, _random_unitary(rng, 2))
        assert mixed.tp_defect <= 1e-12
        expected = apply_channel(channel, rho)
        assert_allclose(apply_channel(mixed, rho), expected, atol=1e-10)


def test_residual_is_invariant_under_phase_gauge(rng):
    space = FockSpace(n_max=40)
    samples = sample_parameters(
        coherent_family(space), "explicit", explicit=[[1, 0], [1.5, 0.5], [2, -0.5]]
    )
    v = build_v_tensor(simplified_loss(space), samples)
    sol = solve_factorization(v)
    for _ in range(DRAWS):
        phases = np.exp(1j * rng.uniform(-np.pi, np.pi, size=2))
        moved = criterion_residual(
            v, sol.u @ np.diag(phases), sol.c * phases[:, None], sol.gamma
        )
        assert moved == pytest.approx(sol.residual_rel, abs=1e-12)


def test_recovery_projectors_form_an_algebra(rng):
    family = fixed_phase_family(0.7)
    for _ in range(DRAWS // 5):
        channel = collective_dephasing(float(rng.uniform(0.05, 0.95)))
        thetas = np.sort(rng.uniform(0.1, 1.4, size=4)).tolist()
        samples = sample_parameters(
            family, "explicit", domain={"theta": DomainAxis(values=thetas)}
        )
        sol = solve_factorization(build_v_tensor(channel, samples))
        isometries = build_isometries(sol, channel, samples)
        rec = build_recovery(isometries, build_code_projector(samples))
        assert projector_algebra_defect(rec) <= 1e-10
        for i in range(samples.count):
            fidelity, _ = recovery_fidelity(samples.states[:, i], channel, rec)
            assert fidelity == pytest.approx(1.0, abs=1e-10)
