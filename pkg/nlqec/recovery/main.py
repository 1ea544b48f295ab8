"""Recovery channel built from a factorization, and its simulation.

For each block ``q`` of the block relation the representative transformed error
``F_n`` defines an isometry ``U_q`` on the code span with
``U_q |psi_j> = F_n |psi_j> / c_n(j)``. The error projector is
``P_q = U_q P U_q^dagger`` and the recovery operator ``R_q = P U_q^dagger P_q``.

:Usage example:

.. code-block:: python

    from nlqec.recovery import build_code_projector, build_isometries, build_recovery

    projector = build_code_projector(samples)
    isometries = build_isometries(solution, channel, samples)
    recovery = build_recovery(isometries, projector)
"""

import numpy as np

from nlqec.alphabets import independent_subset
from nlqec.antypes import (
    BlockIsometries,
    CriterionSolution,
    KrausChannel,
    MixedRecoveryInfo,
    RecoveryChannel,
    RecoveryStrategy,
    SampleSet,
    SolverConfig,
)
from nlqec.channels import transform_channel
from nlqec.core.errors import (
    DegenerateSampleSet,
    DimensionMismatch,
    DomainViolation,
    IllConditionedSolve,
    ZeroCoefficientBlock,
    ZeroTrace,
)
from nlqec.core.logs import get_logger
from nlqec.numkit import (
    dagger,
    frobenius,
    isometric_part,
    orthonormalize,
    polar_decompose,
)

# traces below this are treated as an annihilated state
TRACE_FLOOR = 1e-300

logger = get_logger("nlqec.recovery")


def code_basis(samples: SampleSet, rank_tol: float = 1e-8) -> np.ndarray:
    """
    Orthonormal basis of the span of the sampled states

    :raises DegenerateSampleSet: when the states span nothing
    """
    q, rank = orthonormalize(samples.states, rank_tol)
    if rank == 0:
        raise DegenerateSampleSet("Sampled states span the zero space")
    return q


def build_code_projector(samples: SampleSet, rank_tol: float = 1e-8) -> np.ndarray:
    """Projector ``P = Q Q^dagger`` onto the span of the sampled states."""
    q = code_basis(samples, rank_tol)
    return q @ dagger(q)


def _solve_block(
    op: np.ndarray,
    row: np.ndarray,
    states: np.ndarray,
    subset: np.ndarray,
    basis: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    live = states[:, subset]
    targets = op @ live / row[subset][None, :]
    fitted = targets @ np.linalg.pinv(live)
    isometry = isometric_part(fitted @ basis)
    u = isometry @ dagger(basis)
    defects = np.linalg.norm(u @ states - op @ states / row[None, :], axis=0)
    return u, defects


def build_isometries(
    sol: CriterionSolution,
    channel: KrausChannel,
    samples: SampleSet,
    options: SolverConfig | None = None,
) -> BlockIsometries:
    """
    Block isometries fitted on the sampled span

    The fit uses a linearly independent subset of the samples chosen so that
    its Gram matrix stays below ``cond_max``; the defect is reported on every
    sample. Every Γ-equivalent error gets its own fit and is compared with
    the representative on the code span.

    :param sol: factorization
    :type sol: CriterionSolution
    :param channel: error channel the factorization was computed for
    :type channel: KrausChannel
    :param samples: sampled alphabet states
    :type samples: SampleSet
    :param options: solver tolerances, defaults to None
    :type options: SolverConfig | None, optional
    :raises IllConditionedSolve: when the fitting Gram matrix exceeds ``cond_max``
    :raises ZeroCoefficientBlock: when every block has vanishing coefficients
    :return: one isometry per block with non-vanishing coefficients
    :rtype: BlockIsometries
    """
    options = options or SolverConfig()
    transformed = transform_channel(channel, sol.u, options.eig_tol)

    subset = independent_subset(samples, options.cond_max**-0.5)
    sub_gram = samples.gram[np.ix_(subset, subset)]
    condition = float(np.linalg.cond(sub_gram))
    if condition > options.cond_max:
        raise IllConditionedSolve(
            f"Sample Gram matrix is ill conditioned [cond = {condition:.3e}]",
            condition=condition,
        )
    basis, _ = orthonormalize(samples.states[:, subset], options.svd_tol)
    projector = basis @ dagger(basis)

    blocks, leaders, isometries, defects = [], [], [], []
    equality = 0.0
    for block in sol.blocks:
        live = [n for n in block if not sol.zero_mask[n]]
        if not live:
            logger.warning(f"Skipping block with vanishing coefficients {list(block)}")
            continue
        leader = live[0]
        u, sample_defects = _solve_block(
            transformed.ops[leader], sol.c[leader], samples.states, subset, basis
        )
        for other in live[1:]:
            u_other, _ = _solve_block(
                transformed.ops[other], sol.c[other], samples.states, subset, basis
            )
            equality = max(equality, frobenius((u - u_other) @ projector))
        blocks.append(tuple(block))
        leaders.append(leader)
        isometries.append(u)
        defects.append(sample_defects)

    if not isometries:
        raise ZeroCoefficientBlock("Every block has vanishing coefficients")
    logger.debug(
        f"Built block isometries [blocks = {len(blocks)}] "
        f"[fit samples = {len(subset)}] [cond = {condition:.3e}]"
    )
    return BlockIsometries(
        blocks=tuple(blocks),
        representatives=tuple(leaders),
        isometries=tuple(isometries),
        sample_defects=np.array(defects),
        block_equality_defect=equality,
    )


def _support_projector(columns: list[np.ndarray], rank_tol: float) -> np.ndarray:
    q, _ = orthonormalize(np.hstack(columns), rank_tol)
    return q @ dagger(q)


def build_recovery(
    isometries: BlockIsometries,
    code_projector: np.ndarray,
    options: SolverConfig | None = None,
) -> RecoveryChannel:
    """
    Error projectors and recovery operators of every block

    ``R_0 = P`` is appended when the error projectors do not cover the code
    span within ``block_tol``. The completeness defect
    ``||sum_q R_q^dagger R_q - Pi||_F``, with ``Pi`` the projector on the
    support of the recovery, is reported, not enforced.

    :param isometries: block isometries
    :type isometries: BlockIsometries
    :param code_projector: projector on the code span
    :type code_projector: np.ndarray
    :param options: solver tolerances, defaults to None
    :type options: SolverConfig | None, optional
    :return: recovery channel
    :rtype: RecoveryChannel
    """
    options = options or SolverConfig()
    p = code_projector
    projectors = tuple(u @ p @ dagger(u) for u in isometries.isometries)
    operators = [p @ dagger(u) @ pq for u, pq in zip(isometries.isometries, projectors)]

    cover = sum(projectors)
    includes_r0 = frobenius(p - cover @ p) > options.block_tol
    if includes_r0:
        operators.append(p)

    support = _support_projector(
        list(projectors) + ([p] if includes_r0 else []), options.svd_tol
    )
    completeness = frobenius(sum(dagger(r) @ r for r in operators) - support)
    logger.info(
        f"Built recovery [blocks = {len(projectors)}] [r0 = {includes_r0}] "
        f"[completeness = {completeness:.3e}]"
    )
    return RecoveryChannel(
        strategy=RecoveryStrategy.SAMPLED,
        code_projector=p,
        blocks=isometries.blocks,
        isometries=isometries.isometries,
        projectors=projectors,
        operators=tuple(operators),
        includes_r0=includes_r0,
        isometry_defect=isometries.isometry_defect,
        block_equality_defect=isometries.block_equality_defect,
        completeness_defect=completeness,
    )


def build_identity_recovery(code_projector: np.ndarray, n_ops: int) -> RecoveryChannel:
    """Trivial recovery ``R = I`` treating all errors as one block."""
    eye = np.eye(code_projector.shape[0], dtype=complex)
    return RecoveryChannel(
        strategy=RecoveryStrategy.IDENTITY,
        code_projector=code_projector,
        blocks=(tuple(range(n_ops)),),
        isometries=(eye,),
        projectors=(eye,),
        operators=(eye,),
    )


def projector_algebra_defect(rec: RecoveryChannel) -> float:
    """Largest ``||P_q P_r - delta_qr P_q||_F`` over block pairs."""
    worst = 0.0
    for q, pq in enumerate(rec.projectors):
        for r, pr in enumerate(rec.projectors):
            target = pq if q == r else 0.0
            worst = max(worst, frobenius(pq @ pr - target))
    return worst


def lambda_table(
    sol: CriterionSolution, blocks: tuple[tuple[int, ...], ...] | None = None
) -> np.ndarray:
    """
    Proportionality constants ``lambda[q, n, i]`` of ``R_q E_n psi_i``

    ``lambda_qn(i) = sum_{n' in block q} conj(u[n, n']) c_n'(i)``.
    """
    blocks = sol.blocks if blocks is None else blocks
    table = np.zeros((len(blocks), sol.u.shape[0], sol.c.shape[1]), dtype=complex)
    for q, block in enumerate(blocks):
        members = list(block)
        table[q] = sol.u[:, members].conj() @ sol.c[members]
    return table


def identity_lambda_table(channel: KrausChannel, samples: SampleSet) -> np.ndarray:
    """Best constants ``<psi_i|E_n|psi_i>`` for the trivial recovery."""
    images = np.stack([op @ samples.states for op in channel.ops])
    return np.einsum("di,ndi->ni", samples.states.conj(), images)[None, :, :]


def lambda_defects(
    rec: RecoveryChannel,
    channel: KrausChannel,
    samples: SampleSet,
    table: np.ndarray,
) -> np.ndarray:
    """
    Relative defects ``||R_q E_n psi_i - lambda psi_i|| / ||E_n psi_i||``

    :return: array of shape ``(blocks, errors, samples)``
    :rtype: np.ndarray
    """
    psi = samples.states
    out = np.zeros(table.shape)
    for n, op in enumerate(channel.ops):
        image = op @ psi
        scale = np.maximum(np.linalg.norm(image, axis=0), TRACE_FLOOR)
        for q in range(table.shape[0]):
            miss = rec.operators[q] @ image - psi * table[q, n][None, :]
            out[q, n] = np.linalg.norm(miss, axis=0) / scale
    return out


def _require_dim(dim: int, rho: np.ndarray, what: str) -> None:
    if rho.shape != (dim, dim):
        raise DimensionMismatch(
            f"{what} acts on dimension [{dim}], state has shape {rho.shape}"
        )


def apply_channel(channel: KrausChannel, rho: np.ndarray) -> np.ndarray:
    """``sum_n E_n rho E_n^dagger``; the trace is not renormalised."""
    _require_dim(channel.dim, rho, f"Channel [{channel.label}]")
    return sum(op @ rho @ dagger(op) for op in channel.ops)


def apply_recovery(
    rec: RecoveryChannel, rho: np.ndarray, trajectories: bool = False
) -> np.ndarray | list[np.ndarray]:
    """
    ``sum_q R_q rho R_q^dagger``, or the unnormalised branches ``R_q rho R_q^dagger``

    :param rec: recovery channel
    :type rec: RecoveryChannel
    :param rho: density matrix
    :type rho: np.ndarray
    :param trajectories: return one branch per outcome, defaults to False
    :type trajectories: bool, optional
    :return: recovered state or per-outcome branches
    :rtype: np.ndarray | list[np.ndarray]
    """
    _require_dim(rec.dim, rho, "Recovery")
    branches = [r @ rho @ dagger(r) for r in rec.operators]
    return branches if trajectories else sum(branches)


def recovery_fidelity(
    psi: np.ndarray, channel: KrausChannel, rec: RecoveryChannel
) -> tuple[float, float]:
    """
    Fidelity and probability of error followed by recovery for a pure state

    ``fidelity = <psi|R(E(rho))|psi> / tr R(E(rho))`` and
    ``probability = tr R(E(rho)) / tr E(rho)``.

    :raises ZeroTrace: when the channel or the recovery annihilates the state
    """
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    images = [op @ psi for op in channel.ops]
    after_error = sum(float(np.real(np.vdot(x, x))) for x in images)
    if after_error <= TRACE_FLOOR:
        raise ZeroTrace(f"Channel [{channel.label}] annihilates the state")

    branches = [r @ x for r in rec.operators for x in images]
    after_recovery = sum(float(np.real(np.vdot(y, y))) for y in branches)
    if after_recovery <= TRACE_FLOOR:
        raise ZeroTrace("Recovery annihilates the corrupted state")
    overlap = sum(abs(np.vdot(psi, y)) ** 2 for y in branches)
    return overlap / after_recovery, after_recovery / after_error


def jn_representation(op: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    Split ``F = U J`` with ``J = sqrt(F^dagger F)`` and ``U`` unitary.

    For the loss operator ``a`` this is ``a = T sqrt(n)``.
    """
    return polar_decompose(op)


def branch_fidelity(psi: np.ndarray, op: np.ndarray) -> float:
    """
    Fidelity after undoing the unitary part of ``op``

    ``<psi|J|psi>^2 / <psi|J^dagger J|psi>`` for ``op = U J``.

    :raises ZeroTrace: when ``op`` annihilates the state
    """
    _, j = jn_representation(op)
    jpsi = j @ psi
    norm2 = float(np.real(np.vdot(jpsi, jpsi)))
    if norm2 <= TRACE_FLOOR:
        raise ZeroTrace("Error operator annihilates the state")
    return abs(np.vdot(psi, jpsi)) ** 2 / (norm2 * float(np.real(np.vdot(psi, psi))))


def mixed_state_recovery_check(
    rec: RecoveryChannel,
    channel: KrausChannel,
    weights: list[float] | None,
    samples: SampleSet,
    mixed_tol: float = 1e-10,
    tp_tol: float = 1e-10,
) -> MixedRecoveryInfo:
    """
    Recover ``rho = sum_j p_j |psi_j><psi_j|`` and compare with the input

    :param rec: recovery channel
    :type rec: RecoveryChannel
    :param channel: error channel, expected to be trace preserving
    :type channel: KrausChannel
    :param weights: mixture weights, defaults to uniform
    :type weights: list[float] | None
    :param samples: sampled alphabet states
    :type samples: SampleSet
    :param mixed_tol: pass threshold on ``||R(E(rho)) - rho||_F``, defaults to 1e-10
    :type mixed_tol: float, optional
    :param tp_tol: trace-preservation tolerance, defaults to 1e-10
    :type tp_tol: float, optional
    :raises DomainViolation: for negative, all-zero or mis-sized weights
    :return: defect, verdict, the channel trace of every component and the weight
        ``sum_qn |lambda_qn|^2`` with which the recovery returns it
    :rtype: MixedRecoveryInfo
    """
    count = samples.count
    weights = np.full(count, 1.0 / count) if weights is None else np.asarray(weights)
    if weights.shape != (count,) or np.any(weights < 0) or weights.sum() <= 0:
        raise DomainViolation(
            f"Mixture needs [{count}] non-negative weights, got {weights.tolist()}"
        )
    weights = weights / weights.sum()
    if not channel.is_trace_preserving(tp_tol):
        logger.warning(
            f"Mixed-state check on a non trace-preserving channel [{channel.label}]"
        )

    psi = samples.states
    rho = (psi * weights[None, :]) @ dagger(psi)
    recovered = apply_recovery(rec, apply_channel(channel, rho))
    defect = frobenius(recovered - rho)
    images = np.stack([op @ psi for op in channel.ops])
    branches = np.stack([r @ image for r in rec.operators for image in images])
    lambdas = np.einsum("di,kdi->ki", psi.conj(), branches)
    return MixedRecoveryInfo(
        defect=defect,
        passed=defect <= mixed_tol,
        weights=weights.tolist(),
        channel_weights=np.sum(np.abs(images) ** 2, axis=(0, 1)).tolist(),
        component_weights=np.sum(np.abs(lambdas) ** 2, axis=0).tolist(),
    )
