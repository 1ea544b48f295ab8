"""Diagnostics for factorizations that hold only approximately.

Besides the generic residual tables, this module carries the closed forms of the
squeezed-state and cat-state examples and the Knill-Laflamme reduction check.
"""

import math

import numpy as np
from scipy import linalg

from nlqec.alphabets import kl_codeword_family, sample_parameters
from nlqec.antypes import (
    ApproximateMetrics,
    CriterionSolution,
    FockSpace,
    JnOperator,
    KLReduction,
    KrausChannel,
    NecessaryConditionInfo,
    SampleSet,
    SampleStrategy,
    SolverConfig,
    SqueezedDiagnosticsInfo,
    VTensor,
)
from nlqec.core.errors import DimensionMismatch
from nlqec.core.logs import get_logger
from nlqec.hilbert import (
    annihilation_op,
    coherent_state,
    even_cat_state,
    odd_cat_state,
    squeezed_coherent_state,
)
from nlqec.numkit import frobenius

from .main import build_v_tensor, solve_factorization, transform_tensor

# relative tolerance on the smallest eigenvalue of the moment matrix
PSD_TOL = 1e-8

logger = get_logger("nlqec.criterion")


def necessary_condition_check(
    v: VTensor, options: SolverConfig | None = None
) -> tuple[np.ndarray, NecessaryConditionInfo]:
    """
    Hermitian pairing and Gram factorizability of ``W = V / gram``

    Sample pairs whose overlap is below ``overlap_floor`` are skipped; the
    moment-matrix test needs every pair and is left out otherwise.

    :param v: V-tensor
    :type v: VTensor
    :param options: solver tolerances, defaults to None
    :type options: SolverConfig | None, optional
    :return: table ``W[n, m, i, j]`` (NaN where skipped) and its summary
    :rtype: tuple[np.ndarray, NecessaryConditionInfo]
    """
    options = options or SolverConfig()
    gram = v.gram
    linked = np.abs(gram) > options.overlap_floor * np.max(np.abs(gram))
    w = np.full(v.entries.shape, np.nan, dtype=complex)
    w[:, :, linked] = v.entries[:, :, linked] / gram[linked]

    pairing = np.abs(w - w.transpose(1, 0, 3, 2).conj())[:, :, linked]
    max_violation = float(np.max(pairing)) if pairing.size else 0.0
    checked = int(np.count_nonzero(linked))
    skipped = linked.size - checked

    min_eig, holds = None, None
    if skipped == 0:
        n_ops, _, size, _ = w.shape
        moments = w.transpose(0, 2, 1, 3).reshape(n_ops * size, n_ops * size)
        moments = 0.5 * (moments + moments.conj().T)
        min_eig = float(linalg.eigvalsh(moments)[0])
        holds = min_eig >= -PSD_TOL * max(1.0, frobenius(moments))

    return w, NecessaryConditionInfo(
        max_violation=max_violation,
        psd_min_eigenvalue=min_eig,
        psd_holds=holds,
        pairs_checked=checked,
        pairs_skipped=skipped,
    )


def approximate_metrics(
    v: VTensor, sol: CriterionSolution, options: SolverConfig | None = None
) -> ApproximateMetrics:
    """
    Residual table, residual-to-signal ratios and cross-block overlaps

    ``ratio[n, m, i, j] = |eps| / (|c_n(i)| |c_m(j)|)`` where the coefficients
    do not vanish, NaN elsewhere. The orthogonality defect is the largest
    normalised overlap ``|<F_n psi_i|F_m psi_j>|`` between different blocks.
    """
    options = options or SolverConfig()
    eps = sol.epsilon
    mag = np.abs(sol.c)
    signal = np.einsum("ni,mj->nmij", mag, mag)
    floor = options.c_zero_tol * float(np.max(mag)) ** 2 if mag.size else 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(signal > floor, np.abs(eps) / signal, np.nan)

    a = transform_tensor(v.entries, sol.u)
    norms = np.sqrt(np.clip(np.real(np.einsum("nnii->ni", a)), 0.0, None))
    scale = np.einsum("ni,mj->nmij", norms, norms)
    apart = (np.asarray(sol.gamma) == 0)[:, :, None, None] & (scale > 0)
    apart = np.broadcast_to(apart, a.shape)
    orthogonality = 0.0
    if apart.any():
        orthogonality = float(np.max(np.abs(a)[apart] / scale[apart]))

    finite = ratio[np.isfinite(ratio)]
    return ApproximateMetrics(
        epsilon=eps,
        ratio=ratio,
        epsilon_max=float(np.max(np.abs(eps))) if eps.size else 0.0,
        ratio_max=float(np.max(finite)) if finite.size else None,
        orthogonality_defect=orthogonality,
    )


def squeezed_omega(alpha: complex, beta: complex, xi: complex) -> complex:
    """``Omega(alpha, beta) = beta cosh(r) - alpha* e^{i theta} sinh(r)``."""
    r, theta = abs(xi), np.angle(xi)
    return beta * math.cosh(r) - np.conj(alpha) * np.exp(1j * theta) * math.sinh(r)


def _orthogonal_ratio(psi: np.ndarray, a: np.ndarray) -> float:
    image = a @ psi
    perp = image - np.vdot(psi, image) * psi
    return float(np.real(np.vdot(perp, perp)) / np.real(np.vdot(image, image)))


def squeezed_orthogonal_ratio(
    alpha: complex, xi: complex, space: FockSpace
) -> tuple[float, float]:
    """
    Weight of ``a|alpha>_xi`` orthogonal to ``|alpha>_xi``

    :return: closed form ``sinh^2 r / (|Omega(alpha, alpha)|^2 + sinh^2 r)`` and
        the value from the explicit orthogonal component
    :rtype: tuple[float, float]
    """
    sinh2 = math.sinh(abs(xi)) ** 2
    formula = sinh2 / (abs(squeezed_omega(alpha, alpha, xi)) ** 2 + sinh2)
    psi = squeezed_coherent_state(alpha, xi, space)
    return formula, _orthogonal_ratio(psi, annihilation_op(space))


def _cross_defect(
    psi_a: np.ndarray,
    psi_b: np.ndarray,
    alpha: complex,
    beta: complex,
    xi: complex,
    a: np.ndarray,
) -> tuple[complex, complex]:
    overlap = np.vdot(psi_a, psi_b)
    direct = np.vdot(psi_a, a @ psi_b) - squeezed_omega(beta, beta, xi) * overlap
    phase = np.exp(1j * np.angle(xi))
    formula = (np.conj(beta) - np.conj(alpha)) * phase * math.sinh(abs(xi)) * overlap
    return complex(direct), complex(formula)


def squeezed_cross_defect(
    alpha: complex, beta: complex, xi: complex, space: FockSpace
) -> tuple[complex, complex]:
    """
    ``eps(beta, alpha) = V_01(alpha, beta) - Omega(beta, beta) <alpha|beta>``

    :return: direct value and the closed form
        ``(beta* - alpha*) e^{i theta} sinh r <alpha|beta>``
    :rtype: tuple[complex, complex]
    """
    return _cross_defect(
        squeezed_coherent_state(alpha, xi, space),
        squeezed_coherent_state(beta, xi, space),
        alpha,
        beta,
        xi,
        annihilation_op(space),
    )


def squeezed_diagnostics(
    samples: SampleSet, xi: complex, space: FockSpace
) -> SqueezedDiagnosticsInfo:
    """Closed forms of the squeezed example evaluated on every sample and pair."""
    a = annihilation_op(space)
    labels = [complex(row[0], row[1]) for row in samples.params]
    formula = [
        (math.sinh(abs(xi)) ** 2)
        / (abs(squeezed_omega(z, z, xi)) ** 2 + math.sinh(abs(xi)) ** 2)
        for z in labels
    ]
    direct = [_orthogonal_ratio(samples.states[:, i], a) for i in range(len(labels))]
    cross = 0.0
    for i, alpha in enumerate(labels):
        for j, beta in enumerate(labels):
            got, expected = _cross_defect(
                samples.states[:, i], samples.states[:, j], alpha, beta, xi, a
            )
            cross = max(cross, abs(got - expected))
    return SqueezedDiagnosticsInfo(
        orthogonal_ratio_formula=formula,
        orthogonal_ratio_direct=direct,
        orthogonal_ratio_max_deviation=float(
            np.max(np.abs(np.subtract(formula, direct)))
        ),
        cross_defect_max_deviation=cross,
    )


def cat_overlap_identity(
    alpha: complex, beta: complex, space: FockSpace
) -> tuple[complex, complex]:
    """
    Both sides of ``<a_e|b_e> - <a_o|b_o> = <-a|b> + <a|-b>``

    The left side uses the exactly normalised cats; the identity holds once both
    normalisations reach ``1/sqrt(2)``, up to terms of order ``exp(-2|alpha|^2)``.
    """
    lhs = np.vdot(even_cat_state(alpha, space), even_cat_state(beta, space))
    lhs -= np.vdot(odd_cat_state(alpha, space), odd_cat_state(beta, space))
    rhs = np.vdot(coherent_state(-alpha, space), coherent_state(beta, space))
    rhs += np.vdot(coherent_state(alpha, space), coherent_state(-beta, space))
    return complex(lhs), complex(rhs)


def jn_operators(
    samples: SampleSet, sol: CriterionSolution, rank_tol: float = 1e-8
) -> list[JnOperator]:
    """
    Operators acting as ``c_n(alpha_j)`` on each sampled state

    ``J_n = Psi diag(c_n) Psi^+`` on the sampled span; the defect is the
    largest ``||J_n psi_j - c_n(j) psi_j||``.
    """
    psi = samples.states
    pinv = np.linalg.pinv(psi, rcond=rank_tol)
    out = []
    for n, row in enumerate(sol.c):
        matrix = psi @ (row[:, None] * pinv)
        defect = np.linalg.norm(matrix @ psi - psi * row[None, :], axis=0)
        out.append(JnOperator(index=n, matrix=matrix, defect=float(np.max(defect))))
    return out


def kl_reduction_check(
    codewords: list[str] | list[np.ndarray],
    channel: KrausChannel,
    options: SolverConfig | None = None,
    count: int = 12,
    seed: int = 0,
    tol: float = 1e-10,
) -> KLReduction:
    """
    Knill-Laflamme conditions and the factorization they imply

    Builds ``h[n, m] = <xi_i| E_n^dagger E_m |xi_i>``, checks that it does not
    depend on the codeword and that cross-codeword terms vanish, then solves the
    factorization on random codeword superpositions. The reduction holds when
    the residual and the spread of ``|c_n|`` over samples stay below
    ``10 * eig_tol``.

    :param codewords: bit strings or orthonormal vectors
    :type codewords: list[str] | list[np.ndarray]
    :param channel: error channel
    :type channel: KrausChannel
    :param options: solver tolerances, defaults to None
    :type options: SolverConfig | None, optional
    :param count: number of random superpositions, defaults to 12
    :type count: int, optional
    :param seed: RNG seed of the superpositions, defaults to 0
    :type seed: int, optional
    :param tol: tolerance of the Knill-Laflamme conditions, defaults to 1e-10
    :type tol: float, optional
    :raises DimensionMismatch: when codewords and channel live on different spaces
    :return: KL matrix, defects and the induced factorization
    :rtype: KLReduction
    """
    options = options or SolverConfig()
    family = kl_codeword_family(codewords)
    if channel.dim != family.dim:
        raise DimensionMismatch(
            f"Codewords of dimension [{family.dim}] for channel of "
            f"dimension [{channel.dim}]"
        )
    images = np.stack([op @ family.codewords for op in channel.ops])
    terms = np.einsum("ndi,mdj->nmij", images.conj(), images)
    per_codeword = np.einsum("nmii->inm", terms)
    h = per_codeword.mean(axis=0)
    codeword_defect = float(np.max(np.abs(per_codeword - h)))
    cross = terms.copy()
    for i in range(cross.shape[2]):
        cross[:, :, i, i] = 0.0
    offdiag_defect = float(np.max(np.abs(cross))) if cross.size else 0.0

    if codeword_defect > tol or offdiag_defect > tol:
        logger.info(
            f"Knill-Laflamme conditions fail [codeword = {codeword_defect:.3e}] "
            f"[cross = {offdiag_defect:.3e}]"
        )
        return KLReduction(
            holds=False,
            h=h,
            codeword_defect=codeword_defect,
            offdiag_defect=offdiag_defect,
        )

    samples = sample_parameters(
        family, SampleStrategy.UNIFORM_RANDOM, count=count, seed=seed
    )
    sol = solve_factorization(build_v_tensor(channel, samples), options, seed)
    mag = np.abs(sol.c)
    spread = float(np.max(mag.max(axis=1) - mag.min(axis=1)))
    bound = 10 * options.eig_tol
    return KLReduction(
        holds=sol.residual_rel <= bound and spread <= bound,
        h=h,
        codeword_defect=codeword_defect,
        offdiag_defect=offdiag_defect,
        residual_rel=sol.residual_rel,
        coefficient_spread=spread,
        solution=sol,
    )
