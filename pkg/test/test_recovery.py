import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from nlqec.alphabets import (
    coherent_family,
    dephasing_pair_family,
    even_cat_family,
    fixed_phase_family,
    sample_parameters,
)
from nlqec.antypes import DomainAxis, FockSpace, RecoveryStrategy, SolverConfig
from nlqec.channels import (
    amplitude_damping,
    collective_dephasing,
    custom_channel,
    simplified_loss,
)
from nlqec.core.errors import (
    DimensionMismatch,
    DomainViolation,
    IllConditionedSolve,
    ZeroCoefficientBlock,
    ZeroTrace,
)
from nlqec.criterion import build_v_tensor, solve_factorization
from nlqec.hilbert import (
    annihilation_op,
    coherent_state,
    even_cat_state,
    fock_space,
    odd_cat_state,
    sqrt_number_op,
)
from nlqec.numkit import frobenius, unitarity_defect
from nlqec.recovery import (
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

SPACE = FockSpace(n_max=60)
ALPHAS = [1.0, 1.5, 2.0, 2.5]


def _setup(channel, samples, options=None):
    sol = solve_factorization(build_v_tensor(channel, samples), options)
    isometries = build_isometries(sol, channel, samples, options)
    rec = build_recovery(isometries, build_code_projector(samples), options)
    return sol, isometries, rec


def _coherent_samples(alphas=ALPHAS):
    return sample_parameters(
        coherent_family(SPACE), "explicit", explicit=[[a, 0] for a in alphas]
    )


def _fixed_phase_samples():
    return sample_parameters(
        fixed_phase_family(0.7),
        "explicit",
        domain={"theta": DomainAxis(values=[0.2, 0.5, 0.9, 1.3])},
    )


def test_code_projector_of_one_state():
    samples = _coherent_samples([2.0])
    psi = samples.states[:, 0]
    expected = np.outer(psi, psi.conj())
    assert_allclose(build_code_projector(samples), expected, atol=1e-12)


def test_code_projector_of_coherent_samples():
    samples = _coherent_samples()
    p = build_code_projector(samples)
    assert code_basis(samples).shape == (61, 4)
    assert np.trace(p).real == pytest.approx(4.0)
    assert_allclose(p @ samples.states, samples.states, atol=1e-9)


def test_coherent_loss_recovery_is_the_code_projector():
    samples = _coherent_samples()
    channel = simplified_loss(SPACE)
    sol, isometries, rec = _setup(channel, samples)
    p = build_code_projector(samples)
    assert rec.strategy is RecoveryStrategy.SAMPLED
    assert rec.blocks == ((0, 1),)
    assert len(rec.operators) == 1 and not rec.includes_r0
    assert_allclose(rec.operators[0], p, atol=1e-8)
    assert isometries.isometry_defect <= 1e-8
    assert isometries.block_equality_defect <= 1e-8

    for i in range(samples.count):
        fidelity, probability = recovery_fidelity(samples.states[:, i], channel, rec)
        assert fidelity == pytest.approx(1.0, abs=1e-8)
        assert probability == pytest.approx(1.0, abs=1e-8)

    table = lambda_table(sol)
    assert_allclose(table[0, 0], 1.0, atol=1e-6)
    assert_allclose(table[0, 1], ALPHAS, atol=1e-6)
    assert np.max(lambda_defects(rec, channel, samples, table)) <= 1e-8


def test_superposition_of_alphabet_states_is_not_protected():
    samples = _coherent_samples()
    channel = simplified_loss(SPACE)
    _, _, rec = _setup(channel, samples)
    psi = coherent_state(1.0, SPACE) + coherent_state(2.5, SPACE)
    fidelity, _ = recovery_fidelity(psi, channel, rec)
    assert fidelity < 0.99


@pytest.mark.parametrize("p", [0.1, 0.5, 0.9])
def test_dephasing_pair_recovery(p):
    samples = sample_parameters(dephasing_pair_family())
    channel = collective_dephasing(p)
    _, _, rec = _setup(channel, samples)
    assert_allclose(rec.code_projector, np.eye(4), atol=1e-12)
    for i in range(samples.count):
        fidelity, _ = recovery_fidelity(samples.states[:, i], channel, rec)
        assert fidelity == pytest.approx(1.0, abs=1e-12)

    info = mixed_state_recovery_check(rec, channel, None, samples)
    assert info.passed
    assert info.defect <= 1e-10
    assert_allclose(info.weights, np.full(8, 1 / 8))


@pytest.mark.parametrize("p", [0.1, 0.5, 0.9])
def test_fixed_phase_recovery_undoes_zz(p):
    samples = _fixed_phase_samples()
    channel = collective_dephasing(p)
    sol, _, rec = _setup(channel, samples)
    zz = channel.ops[1] / math.sqrt(1 - p)
    assert rec.blocks == ((0,), (1,))
    assert not rec.includes_r0
    assert projector_algebra_defect(rec) <= 1e-10
    assert_allclose(rec.operators[1] @ zz @ samples.states, samples.states, atol=1e-10)

    table = lambda_table(sol)
    assert_allclose(np.sum(np.abs(table) ** 2, axis=(0, 1)), 1.0, atol=1e-10)
    for i in range(samples.count):
        fidelity, probability = recovery_fidelity(samples.states[:, i], channel, rec)
        assert fidelity == pytest.approx(1.0, abs=1e-12)
        assert probability == pytest.approx(1.0, abs=1e-12)


def test_isometries_need_a_live_block():
    samples = _coherent_samples()
    channel = simplified_loss(SPACE)
    sol = solve_factorization(build_v_tensor(channel, samples))
    dead = sol.model_copy(update={"zero_mask": np.array([True, True])})
    with pytest.raises(ZeroCoefficientBlock):
        build_isometries(dead, channel, samples)


def test_isometries_refuse_ill_conditioned_fit():
    samples = _coherent_samples([1.0, 2.0])
    channel = simplified_loss(SPACE)
    options = SolverConfig(cond_max=2.0)
    sol = solve_factorization(build_v_tensor(channel, samples), options)
    with pytest.raises(IllConditionedSolve, match="ill conditioned") as info:
        build_isometries(sol, channel, samples, options)
    assert info.value.condition > 2.0


def test_identity_recovery_under_weak_damping():
    space = fock_space(2.5)
    samples = sample_parameters(
        coherent_family(space), "explicit", explicit=[[2, 0], [2.5, 0]]
    )
    channel = amplitude_damping(0.999, space)
    rec = build_identity_recovery(build_code_projector(samples), channel.n_ops)
    assert rec.strategy is RecoveryStrategy.IDENTITY
    assert rec.blocks == (tuple(range(channel.n_ops)),)
    fidelity, probability = recovery_fidelity(samples.states[:, 0], channel, rec)
    assert fidelity >= 0.999
    assert probability == pytest.approx(1.0, abs=1e-10)

    table = identity_lambda_table(channel, samples)
    assert table.shape == (1, channel.n_ops, 2)
    survival = np.exp(-(1 - math.sqrt(0.999)) * np.array([4, 6.25]))
    assert_allclose(np.abs(table[0, 0]), survival, atol=1e-10)


def test_recovery_of_annihilated_state():
    samples = _coherent_samples()
    rec = build_identity_recovery(build_code_projector(samples), 1)
    channel = custom_channel([np.zeros((61, 61))])
    with pytest.raises(ZeroTrace, match="annihilates"):
        recovery_fidelity(samples.states[:, 0], channel, rec)


def test_apply_channel_and_recovery():
    samples = _coherent_samples()
    channel = simplified_loss(SPACE)
    _, _, rec = _setup(channel, samples)
    psi = samples.states[:, 1]
    rho = np.outer(psi, psi.conj())
    corrupted = apply_channel(channel, rho)
    assert np.trace(corrupted).real == pytest.approx(1 + 1.5**2, abs=1e-8)

    branches = apply_recovery(rec, corrupted, trajectories=True)
    assert len(branches) == len(rec.operators)
    assert_allclose(sum(branches), apply_recovery(rec, corrupted))

    with pytest.raises(DimensionMismatch):
        apply_channel(channel, np.eye(4))
    with pytest.raises(DimensionMismatch):
        apply_recovery(rec, np.eye(4))


def test_mixed_check_rejects_bad_weights():
    samples = sample_parameters(dephasing_pair_family())
    channel = collective_dephasing(0.5)
    _, _, rec = _setup(channel, samples)
    with pytest.raises(DomainViolation, match="non-negative"):
        mixed_state_recovery_check(rec, channel, [1.0, -1.0] + [0.0] * 6, samples)
    with pytest.raises(DomainViolation):
        mixed_state_recovery_check(rec, channel, [1.0], samples)


def test_mixed_check_component_weights():
    samples = sample_parameters(dephasing_pair_family())
    channel = collective_dephasing(0.3)
    _, _, rec = _setup(channel, samples)
    info = mixed_state_recovery_check(rec, channel, [3.0] + [1.0] * 7, samples)
    assert info.weights[0] == pytest.approx(0.3)
    assert_allclose(info.channel_weights, 1.0, atol=1e-12)
    assert_allclose(info.component_weights, 1.0, atol=1e-12)


def test_mixed_check_weights_of_identity_recovery():
    samples = _fixed_phase_samples()
    channel = collective_dephasing(0.3)
    rec = build_identity_recovery(build_code_projector(samples), channel.n_ops)
    info = mixed_state_recovery_check(rec, channel, None, samples)
    assert not info.passed
    assert_allclose(info.channel_weights, 1.0, atol=1e-12)
    assert_allclose(info.component_weights, 0.3, atol=1e-12)


def test_jn_representation_of_loss():
    space = FockSpace(n_max=20)
    a = annihilation_op(space)
    u, j = jn_representation(a)
    assert_allclose(j, sqrt_number_op(space), atol=1e-10)
    assert_allclose(u @ j, a, atol=1e-10)
    assert unitarity_defect(u) <= 1e-12


@pytest.mark.parametrize("alpha, tol", [(3.0, 5e-3), (4.0, 2e-3), (5.0, 2e-3)])
def test_cat_branch_fidelity(alpha, tol):
    space = FockSpace(n_max=80)
    fidelity = branch_fidelity(even_cat_state(alpha, space), annihilation_op(space))
    assert fidelity == pytest.approx(1 - 1 / (4 * alpha**2), abs=tol)
    assert fidelity < 1


def test_branch_fidelity_of_annihilated_state():
    space = FockSpace(n_max=20)
    vacuum = np.eye(21)[:, 0]
    with pytest.raises(ZeroTrace):
        branch_fidelity(vacuum, annihilation_op(space))


def test_projector_algebra_of_identity_recovery():
    samples = _coherent_samples()
    rec = build_identity_recovery(build_code_projector(samples), 2)
    assert projector_algebra_defect(rec) == 0.0
    assert frobenius(rec.operators[0] - np.eye(61)) == 0.0


def test_cat_isometry_maps_even_to_odd_cats():
    space = FockSpace(n_max=80)
    samples = sample_parameters(
        even_cat_family(space), "explicit", explicit=[[3, 0], [4, 0], [5, 0]]
    )
    _, _, rec = _setup(simplified_loss(space), samples)
    assert rec.blocks[:2] == ((0,), (1,))

    mapped = rec.isometries[1] @ even_cat_state(4.0, space)
    assert np.linalg.norm(mapped - odd_cat_state(4.0, space)) <= 0.1 / 4.0

    even, odd = rec.projectors[:2]
    assert np.linalg.norm(even @ odd, 2) <= 1e-10
