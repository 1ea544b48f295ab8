"""Error channels as ordered Kraus operator sets.

Non-trace-preserving channels are accepted; their defect is recorded on the
:class:`~nlqec.antypes.KrausChannel` and downstream fidelities renormalise.
"""

import math

import numpy as np
from scipy.special import gammaln

from nlqec.antypes import (
    ChannelConfig,
    ChannelKind,
    FockSpace,
    KrausChannel,
    PauliTerm,
    QubitRegister,
    to_complex,
)
from nlqec.core.errors import (
    DimensionMismatch,
    DomainViolation,
    IndexOutOfRange,
    NonUnitaryTransform,
)
from nlqec.core.logs import get_logger
from nlqec.hilbert import (
    annihilation_op,
    coherent_amplitudes,
    coherent_state,
    pauli_op,
    pauli_string,
)
from nlqec.numkit import EIG_TOL, dagger, frobenius, unitarity_defect

# A_k is dropped once its weight on <n> falls below this
DAMPING_TAIL = 1e-14

logger = get_logger("nlqec.channels")


def tp_defect(
    ops: list[np.ndarray] | tuple[np.ndarray, ...], guard_band: int = 0
) -> float:
    """
    Trace-preservation defect ``||sum_n E_n^dagger E_n - I||_F``.

    :param ops: Kraus operators
    :type ops: list[np.ndarray] | tuple[np.ndarray, ...]
    :param guard_band: top levels excluded from the comparison, defaults to 0
    :type guard_band: int, optional
    :return: Frobenius defect
    :rtype: float
    """
    total = sum(dagger(op) @ op for op in ops)
    keep = total.shape[0] - guard_band
    return frobenius(total[:keep, :keep] - np.eye(keep))


def _channel(
    label: str, ops: list[np.ndarray], k_max: int | None = None
) -> KrausChannel:
    ops = tuple(np.asarray(op, dtype=complex) for op in ops)
    channel = KrausChannel(label=label, ops=ops, tp_defect=tp_defect(ops), k_max=k_max)
    logger.debug(
        f"Built channel [{label}] [ops = {len(ops)}] "
        f"[tp_defect = {channel.tp_defect:.3e}]"
    )
    return channel


def custom_channel(ops: list[np.ndarray], label: str = "custom") -> KrausChannel:
    """
    Channel from user supplied Kraus operators

    :raises DimensionMismatch: when the operators are not square of one size
    """
    if not ops:
        raise DimensionMismatch("A channel needs at least one Kraus operator")
    shapes = {np.shape(op) for op in ops}
    if len(shapes) != 1:
        raise DimensionMismatch(
            f"Kraus operators have different shapes {sorted(shapes)}"
        )
    rows, cols = shapes.pop()
    if rows != cols:
        raise DimensionMismatch(f"Kraus operators must be square, got ({rows}, {cols})")
    return _channel(label, list(ops))


def simplified_loss(space: FockSpace) -> KrausChannel:
    """Loss channel ``{I, a}``, not trace preserving."""
    return _channel("simplified_loss", [np.eye(space.dim), annihilation_op(space)])


def default_damping_k_max(gamma: float, alpha_max: float, n_max: int) -> int:
    """
    Smallest ``k`` with ``(1 - gamma)^k / k! * |alpha|^(2k)`` below the tail.

    The result is capped at ``n_max``.
    """
    loss = (1.0 - gamma) * alpha_max**2
    if loss == 0.0:
        return min(1, n_max)
    log_tail = math.log(DAMPING_TAIL)
    k = 0
    while k < n_max and k * math.log(loss) - gammaln(k + 1) >= log_tail:
        k += 1
    return k


def damping_operator(gamma: float, k: int, space: FockSpace) -> np.ndarray:
    """``A_k = sqrt((1 - gamma)^k / k!) sqrt(gamma)^n a^k``."""
    if k == 0:
        weight = 1.0
    elif gamma == 1.0:
        return np.zeros((space.dim, space.dim), dtype=complex)
    else:
        weight = math.exp(0.5 * (k * math.log1p(-gamma) - gammaln(k + 1)))
    survival = np.diag(np.sqrt(gamma) ** np.arange(space.dim))
    lowering = np.linalg.matrix_power(annihilation_op(space), k)
    return weight * survival @ lowering


def amplitude_damping(
    gamma: float,
    space: FockSpace,
    k_max: int | None = None,
    alpha_max: float | None = None,
) -> KrausChannel:
    """
    Amplitude damping ``{A_0, ..., A_k_max}`` with survival probability ``gamma``

    :param gamma: survival probability in (0, 1], ``gamma = 1`` is lossless
    :type gamma: float
    :param space: Fock space
    :type space: FockSpace
    :param k_max: last Kraus index, defaults to the tail rule or ``n_max``
    :type k_max: int | None, optional
    :param alpha_max: largest sampled amplitude used by the tail rule, defaults to None
    :type alpha_max: float | None, optional
    :raises DomainViolation: when ``gamma`` is outside (0, 1]
    :raises IndexOutOfRange: when ``k_max`` exceeds ``n_max``
    :return: Kraus channel
    :rtype: KrausChannel
    """
    if not 0.0 < gamma <= 1.0:
        raise DomainViolation(f"Damping gamma must lie in (0, 1], got [{gamma}]")
    if k_max is None:
        if alpha_max is None:
            k_max = space.n_max
        else:
            k_max = default_damping_k_max(gamma, alpha_max, space.n_max)
    if k_max > space.n_max:
        raise IndexOutOfRange(f"k_max [{k_max}] exceeds n_max [{space.n_max}]")
    ops = [damping_operator(gamma, k, space) for k in range(k_max + 1)]
    return _channel(f"amplitude_damping({gamma})", ops, k_max=k_max)


def collective_dephasing(p: float) -> KrausChannel:
    """Two-qubit dephasing ``{sqrt(p) I, sqrt(1 - p) Z_1 Z_2}``."""
    if not 0.0 <= p <= 1.0:
        raise DomainViolation(f"Dephasing p must lie in [0, 1], got [{p}]")
    register = QubitRegister(n_qubits=2)
    zz = pauli_op(register, "Z", 0) @ pauli_op(register, "Z", 1)
    return _channel(
        f"collective_dephasing({p})",
        [math.sqrt(p) * np.eye(register.dim), math.sqrt(1.0 - p) * zz],
    )


def pauli_channel(terms: list[PauliTerm] | list[tuple[str, float]]) -> KrausChannel:
    """Kraus operators ``sqrt(weight) P`` for labelled Pauli strings."""
    pairs = [
        (term.label, term.weight) if isinstance(term, PauliTerm) else tuple(term)
        for term in terms
    ]
    if not pairs:
        raise DimensionMismatch("A Pauli channel needs at least one term")
    register = QubitRegister(n_qubits=len(pairs[0][0]))
    ops = [math.sqrt(weight) * pauli_string(register, label) for label, weight in pairs]
    return _channel("pauli(" + ",".join(label for label, _ in pairs) + ")", ops)


def transform_channel(
    channel: KrausChannel, u: np.ndarray, eig_tol: float = EIG_TOL
) -> KrausChannel:
    """
    Unitarily mixed Kraus set ``F_m = sum_n E_n u[n, m]``

    :param channel: input channel
    :type channel: KrausChannel
    :param u: unitary over the Kraus index
    :type u: np.ndarray
    :param eig_tol: unitarity tolerance, defaults to EIG_TOL
    :type eig_tol: float, optional
    :raises DimensionMismatch: when ``u`` does not match the number of operators
    :raises NonUnitaryTransform: when ``u`` is not unitary
    :return: transformed channel with the same action
    :rtype: KrausChannel
    """
    u = np.asarray(u, dtype=complex)
    if u.shape != (channel.n_ops, channel.n_ops):
        raise DimensionMismatch(
            f"Mixing matrix of shape {u.shape} for [{channel.n_ops}] Kraus operators"
        )
    defect = unitarity_defect(u)
    if defect > eig_tol:
        raise NonUnitaryTransform(
            f"Mixing matrix is not unitary [defect = {defect:.3e}]"
        )
    ops = np.einsum("nij,nm->mij", np.stack(channel.ops), u)
    return _channel(channel.label + "'", list(ops), k_max=channel.k_max)


def damped_coherent_action(
    alpha: complex, gamma: float, k: int, space: FockSpace
) -> np.ndarray:
    """
    Closed form ``exp(-|a|^2 eps / 2) sqrt(eps^k / k!) a^k |sqrt(gamma) a>``.

    ``eps = 1 - gamma``; amplitudes are not renormalised.
    """
    eps = 1.0 - gamma
    weight = math.exp(-0.5 * abs(alpha) ** 2 * eps) * math.sqrt(
        eps**k / math.factorial(k)
    )
    return weight * alpha**k * coherent_amplitudes(math.sqrt(gamma) * alpha, space.dim)


def damping_displacement(
    alpha: complex, gamma: float, space: FockSpace
) -> tuple[float, float]:
    """
    Distance ``|| |sqrt(gamma) alpha> - |alpha> ||`` and its estimate
    ``eps |alpha| / 2``

    :return: direct distance and the small-loss estimate
    :rtype: tuple[float, float]
    """
    shrunk = coherent_state(math.sqrt(gamma) * alpha, space)
    direct = float(np.linalg.norm(shrunk - coherent_state(alpha, space)))
    return direct, (1.0 - gamma) * abs(alpha) / 2


def build_channel(
    config: ChannelConfig,
    space: FockSpace | None = None,
    alpha_max: float | None = None,
) -> KrausChannel:
    """Channel described by a config node."""
    kind = ChannelKind(config.type)
    if kind is ChannelKind.SIMPLIFIED_LOSS:
        channel = simplified_loss(space)
    elif kind is ChannelKind.AMPLITUDE_DAMPING:
        channel = amplitude_damping(config.gamma, space, config.k_max, alpha_max)
    elif kind is ChannelKind.COLLECTIVE_DEPHASING:
        channel = collective_dephasing(config.p)
    elif kind is ChannelKind.PAULI:
        channel = pauli_channel(config.terms)
    else:
        ops = [
            np.array([[to_complex(entry) for entry in row] for row in op])
            for op in config.ops
        ]
        channel = custom_channel(ops)
    if config.label:
        channel = channel.model_copy(update={"label": config.label})
    return channel
