import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from nlqec.antypes import ChannelConfig, FockSpace
from nlqec.channels import (
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
from nlqec.core.errors import (
    DimensionMismatch,
    DomainViolation,
    IndexOutOfRange,
    NonUnitaryTransform,
)
from nlqec.hilbert import coherent_state, number_op
from nlqec.recovery import apply_channel

SPACE = FockSpace(n_max=60)


def test_simplified_loss_is_not_trace_preserving():
    channel = simplified_loss(SPACE)
    assert channel.n_ops == 2
    assert channel.tp_defect == pytest.approx(np.linalg.norm(number_op(SPACE)))
    assert not channel.is_trace_preserving()


def test_simplified_loss_on_vacuum_and_coherent_state():
    channel = simplified_loss(SPACE)
    vacuum = np.outer(np.eye(61)[0], np.eye(61)[0])
    assert_allclose(apply_channel(channel, vacuum), vacuum)

    psi = coherent_state(1.0, SPACE)
    rho = np.outer(psi, psi.conj())
    assert_allclose(apply_channel(channel, rho), 2 * rho, atol=1e-8)


def test_lossless_damping():
    channel = amplitude_damping(1.0, FockSpace(n_max=10))
    assert_allclose(channel.ops[0], np.eye(11))
    assert all(not np.any(op) for op in channel.ops[1:])
    assert channel.tp_defect == 0.0


def test_damping_closed_form():
    alpha, gamma = 2.0, 0.99
    direct = damping_operator(gamma, 1, SPACE) @ coherent_state(alpha, SPACE)
    closed = damped_coherent_action(alpha, gamma, 1, SPACE)
    assert np.max(np.abs(direct - closed)) <= 1e-9


@pytest.mark.parametrize("gamma", [0.9, 0.99])
def test_damping_is_trace_preserving_with_all_operators(gamma):
    channel = amplitude_damping(gamma, FockSpace(n_max=40))
    assert channel.k_max == 40
    assert tp_defect(channel.ops, guard_band=10) <= 1e-10


def test_damping_operators_shrink_as_loss_vanishes():
    space = FockSpace(n_max=30)
    largest = [
        max(np.linalg.norm(op, 2) for op in amplitude_damping(g, space).ops[1:])
        for g in (0.9, 0.99, 0.999)
    ]
    assert largest[0] > largest[1] > largest[2]


def test_default_damping_k_max():
    assert default_damping_k_max(0.99, 1.0, 60) == 6
    assert default_damping_k_max(1.0, 1.0, 60) == 1
    assert default_damping_k_max(0.5, 5.0, 4) == 4


def test_damping_with_tail_rule():
    channel = amplitude_damping(0.99, SPACE, alpha_max=1.0)
    assert channel.k_max == 6
    assert channel.n_ops == 7


@pytest.mark.parametrize("gamma", [0.0, 1.2])
def test_damping_gamma_outside_domain(gamma):
    with pytest.raises(DomainViolation):
        amplitude_damping(gamma, SPACE)


def test_damping_k_max_above_cutoff():
    with pytest.raises(IndexOutOfRange):
        amplitude_damping(0.9, FockSpace(n_max=5), k_max=6)


def test_damping_displacement_estimate():
    direct, estimate = damping_displacement(2.0, 0.999, SPACE)
    assert 1 / 1.1 <= direct / estimate <= 1.1


def test_collective_dephasing():
    channel = collective_dephasing(0.3)
    assert channel.tp_defect <= 1e-15
    assert_allclose(channel.ops[0], math.sqrt(0.3) * np.eye(4))
    signs = np.array([1, -1, -1, 1])
    assert_allclose(np.diag(channel.ops[1]).real, math.sqrt(0.7) * signs)
    assert not np.any(collective_dephasing(1.0).ops[1])


def test_collective_dephasing_outside_domain():
    with pytest.raises(DomainViolation, match="Dephasing"):
        collective_dephasing(1.5)


def test_pauli_channel():
    channel = pauli_channel(
        [("III", 0.25), ("XII", 0.25), ("IXI", 0.25), ("IIX", 0.25)]
    )
    assert channel.dim == 8
    assert channel.tp_defect <= 1e-15
    assert channel.label == "pauli(III,XII,IXI,IIX)"


def test_custom_channel_shapes():
    with pytest.raises(DimensionMismatch, match="different shapes"):
        custom_channel([np.eye(2), np.eye(3)])
    with pytest.raises(DimensionMismatch, match="square"):
        custom_channel([np.ones((2, 3))])
    with pytest.raises(DimensionMismatch):
        custom_channel([])


def test_transform_channel_preserves_action():
    space = FockSpace(n_max=7)
    channel = simplified_loss(space)
    rng = np.random.default_rng(11)
    m = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    rho = m @ m.conj().T
    hadamard = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
    mixed = transform_channel(channel, hadamard)
    assert_allclose(mixed.ops[0], (channel.ops[0] + channel.ops[1]) / math.sqrt(2))
    assert_allclose(apply_channel(mixed, rho), apply_channel(channel, rho), atol=1e-12)
    assert_allclose(transform_channel(channel, np.eye(2)).ops, channel.ops)


def test_transform_channel_rejects_bad_mixing():
    channel = collective_dephasing(0.5)
    with pytest.raises(NonUnitaryTransform):
        transform_channel(channel, 2 * np.eye(2))
    with pytest.raises(DimensionMismatch):
        transform_channel(channel, np.eye(3))


def test_build_channel_from_config():
    config = ChannelConfig(type="custom", ops=[[[1, 0], [0, 1]], [[0, [0, 1]], [0, 0]]])
    channel = build_channel(config)
    assert_allclose(channel.ops[1], [[0, 1j], [0, 0]])
    assert channel.label == "custom"

    config = ChannelConfig(type="collective_dephasing", p=0.5, label="zz")
    labelled = build_channel(config)
    assert labelled.label == "zz"
