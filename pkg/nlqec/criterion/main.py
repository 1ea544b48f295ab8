"""Factorization of the criterion tensor over the unitary group.

The criterion holds on a sample set when a unitary ``u`` over the Kraus index,
coefficients ``c[n, i]`` and a 0/1 block relation ``gamma`` satisfy

    u^dagger V(i, j) u = (conj(c[:, i]) c[:, j]^T) * gamma * gram[i, j]

for every sample pair. :func:`solve_factorization` searches for such a triple
and reports the relative residual when no exact one exists.
"""

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from nlqec.antypes import (
    CriterionSolution,
    GammaAlternative,
    KrausChannel,
    SampleSet,
    SolverConfig,
    Verdict,
    VTensor,
)
from nlqec.core.errors import (
    DegenerateInput,
    DegenerateSampleSet,
    DimensionMismatch,
    InconsistentGamma,
)
from nlqec.core.logs import get_logger
from nlqec.numkit import (
    dagger,
    eig_hermitian,
    expm_antihermitian,
    frobenius,
    joint_diagonalize,
    polar_decompose,
)

# backtracking halvings per refinement step
LINE_SEARCH_STEPS = 40

logger = get_logger("nlqec.criterion")


def build_v_tensor(channel: KrausChannel, samples: SampleSet) -> VTensor:
    """
    Tensor ``V[n, m, i, j] = <psi_i| E_n^dagger E_m |psi_j>``

    :param channel: error channel
    :type channel: KrausChannel
    :param samples: sampled alphabet states
    :type samples: SampleSet
    :raises DimensionMismatch: when channel and states live on different spaces
    :return: V-tensor, Hermitian under ``(n, i) <-> (m, j)`` by construction
    :rtype: VTensor
    """
    if channel.dim != samples.dim:
        raise DimensionMismatch(
            f"Channel [{channel.label}] acts on dimension [{channel.dim}], "
            f"states have dimension [{samples.dim}]"
        )
    images = np.stack([op @ samples.states for op in channel.ops])
    entries = np.einsum("ndi,mdj->nmij", images.conj(), images, optimize=True)
    entries = 0.5 * (entries + entries.transpose(1, 0, 3, 2).conj())
    return VTensor(label=channel.label, entries=entries, samples=samples)


def transform_tensor(entries: np.ndarray, u: np.ndarray) -> np.ndarray:
    """``u^dagger V(i, j) u`` for every sample pair."""
    return np.einsum("an,abij,bm->nmij", u.conj(), entries, u, optimize=True)


def model_tensor(c: np.ndarray, gamma: np.ndarray, gram: np.ndarray) -> np.ndarray:
    return np.einsum("ni,mj,nm,ij->nmij", c.conj(), c, gamma, gram, optimize=True)


def _relative(defect: np.ndarray, entries: np.ndarray) -> float:
    scale = frobenius(entries.ravel())
    return frobenius(defect.ravel()) / scale if scale > 0 else 0.0


def criterion_residual(
    v: VTensor, u: np.ndarray, c: np.ndarray, gamma: np.ndarray
) -> float:
    """Relative Frobenius residual of the factorization over all ``(n, m, i, j)``."""
    a = transform_tensor(v.entries, u)
    return _relative(a - model_tensor(c, gamma, v.gram), v.entries)


def _normalized_diagonal(v: VTensor) -> np.ndarray:
    norms = np.real(np.diag(v.gram))
    slices = np.einsum("nmii->inm", v.entries) / norms[:, None, None]
    if not np.any(slices):
        raise DegenerateInput(f"All diagonal slices of [{v.label}] vanish")
    return slices


def spectral_init(
    v: VTensor, options: SolverConfig | None = None
) -> tuple[np.ndarray, bool]:
    """
    Eigenvectors of the sample-averaged normalised diagonal slice

    Columns follow descending eigenvalues; ties keep the order of the first
    significant eigenvector entry. The spectrum is degenerate when two
    neighbouring eigenvalues are closer than ``spec_gap_tol``.

    :param v: V-tensor
    :type v: VTensor
    :param options: solver tolerances, defaults to None
    :type options: SolverConfig | None, optional
    :raises DegenerateInput: when every diagonal slice vanishes
    :return: starting unitary and the degenerate-spectrum flag
    :rtype: tuple[np.ndarray, bool]
    """
    options = options or SolverConfig()
    average = _normalized_diagonal(v).mean(axis=0)
    w, vecs = eig_hermitian(average, options.herm_tol, options.eig_tol)
    gap_tol = options.spec_gap_tol * max(1.0, float(np.max(np.abs(w))))
    leading = np.argmax(np.abs(vecs) > 1e-12, axis=0)
    order = np.lexsort((leading, -np.round(w / gap_tol)))
    degenerate = bool(np.any(np.diff(np.sort(w)) < gap_tol))
    return vecs[:, order], degenerate


def _joint_start(
    v: VTensor, start: np.ndarray, options: SolverConfig, seed: int
) -> np.ndarray:
    gram = v.gram
    floor = options.overlap_floor * np.max(np.abs(gram))
    pairs = [
        (i, j)
        for i in range(v.n_samples)
        for j in range(i, v.n_samples)
        if abs(gram[i, j]) > floor
    ]
    if len(pairs) > options.jd_slices:
        rng = np.random.default_rng(seed)
        picked = rng.choice(len(pairs), options.jd_slices, replace=False)
        pairs = [pairs[k] for k in np.sort(picked)]
    slices = np.stack([v.entries[:, :, i, j] / gram[i, j] for i, j in pairs])
    slices = 0.5 * (slices + slices.conj().transpose(0, 2, 1))
    u, sweeps = joint_diagonalize(
        slices, start=start, threshold=options.refine_tol, max_sweeps=options.jd_sweeps
    )
    logger.debug(f"Joint diagonalization [slices = {len(pairs)}] [sweeps = {sweeps}]")
    spread = np.real(np.einsum("an,kab,bn->n", u.conj(), slices, u)) / len(pairs)
    return u[:, np.argsort(-spread, kind="stable")]


def _magnitudes(a: np.ndarray, gram: np.ndarray) -> np.ndarray:
    diag = np.real(np.einsum("nnii->ni", a))
    return np.sqrt(np.clip(diag, 0.0, None) / np.real(np.diag(gram)))


def _classify(mag: np.ndarray, c_zero_tol: float) -> tuple[np.ndarray, bool]:
    tol = c_zero_tol * (float(np.max(mag)) if mag.size else 0.0)
    small = mag <= tol
    zero_mask = small.all(axis=1)
    dichotomy_ok = bool(np.all(zero_mask | ~small.any(axis=1)))
    return zero_mask, dichotomy_ok


def _phase_tree(
    gram: np.ndarray, weights: np.ndarray, floor: float
) -> tuple[list[int], list[tuple[int, int]]]:
    # maximum spanning forest over |gram|, roots at the heaviest sample
    size = gram.shape[0]
    mag = np.abs(gram)
    visited = np.zeros(size, dtype=bool)
    roots: list[int] = []
    edges: list[tuple[int, int]] = []
    while not visited.all():
        root = int(np.argmax(np.where(visited, -np.inf, weights)))
        roots.append(root)
        visited[root] = True
        best = np.where((mag[root] > floor) & ~visited, mag[root], -np.inf)
        parent = np.full(size, root)
        while np.isfinite(best).any():
            k = int(np.argmax(best))
            visited[k] = True
            edges.append((int(parent[k]), k))
            better = (mag[k] > best) & (mag[k] > floor) & ~visited
            best[better] = mag[k][better]
            parent[better] = k
            best[visited] = -np.inf
    return roots, edges


def extract_coefficients(
    a: np.ndarray,
    gram: np.ndarray,
    blocks: tuple[tuple[int, ...], ...],
    overlap_floor: float = 1e-10,
) -> tuple[np.ndarray, int]:
    """
    Closed-form coefficients for a fixed unitary

    Moduli come from the diagonal slices. Phases follow a spanning tree of the
    sample overlaps; at each tree root the block leader is real and the other
    block members take the phase of their coupling to the leader. The solver
    then moves the whole gauge onto the reference sample with :func:`fix_gauge`.

    :param a: transformed tensor ``u^dagger V u``
    :type a: np.ndarray
    :param gram: sample Gram matrix
    :type gram: np.ndarray
    :param blocks: block partition of the error indices
    :type blocks: tuple[tuple[int, ...], ...]
    :param overlap_floor: relative overlap below which samples are unlinked
    :type overlap_floor: float, optional
    :return: coefficient table ``c[n, i]`` and the reference sample
    :rtype: tuple[np.ndarray, int]
    """
    mag = _magnitudes(a, gram)
    floor = overlap_floor * np.max(np.abs(gram))
    roots, edges = _phase_tree(gram, mag.sum(axis=0), floor)

    phase = np.zeros(mag.shape)
    for root in roots:
        for block in blocks:
            for n in block[1:]:
                phase[n, root] = np.angle(a[block[0], n, root, root])
    for parent, child in edges:
        link = np.einsum("nn->n", a[:, :, parent, child]) / gram[parent, child]
        phase[:, child] = phase[:, parent] + np.angle(link)
    return mag * np.exp(1j * phase), roots[0]


def fix_gauge(
    u: np.ndarray, c: np.ndarray, reference: int
) -> tuple[np.ndarray, np.ndarray]:
    """Rotate every error so that ``c_n`` is real and non-negative at ``reference``."""
    phases = np.exp(-1j * np.angle(c[:, reference]))
    return u * phases[None, :], c * phases[:, None]


def _gamma_statistic(
    a: np.ndarray, mag: np.ndarray, gram: np.ndarray, options: SolverConfig
) -> np.ndarray:
    n_ops = a.shape[0]
    linked = np.abs(gram) > options.overlap_floor * np.max(np.abs(gram))
    live = mag > options.c_zero_tol * (float(np.max(mag)) if mag.size else 0.0)
    stat = np.zeros((n_ops, n_ops))
    for n in range(n_ops):
        for m in range(n_ops):
            valid = linked & live[n][:, None] & live[m][None, :]
            if not valid.any():
                continue
            denom = mag[n][:, None] * mag[m][None, :] * np.abs(gram)
            ratio = np.abs(a[n, m])[valid] / (denom[valid] + options.floor_eps)
            stat[n, m] = float(np.median(ratio))
    return stat


def _close_gamma(
    stat: np.ndarray, zero_mask: np.ndarray, threshold: float
) -> tuple[np.ndarray, np.ndarray, int]:
    gamma = (stat > threshold) & (stat.T > threshold)
    gamma[zero_mask, :] = False
    gamma[:, zero_mask] = False
    np.fill_diagonal(gamma, True)
    closure = gamma.copy()
    for k in range(len(closure)):
        closure |= closure[:, [k]] & closure[[k], :]
    flips = int(np.count_nonzero(np.triu(closure & ~gamma, 1)))
    return gamma.astype(int), closure.astype(int), flips


def gamma_blocks(gamma: np.ndarray) -> tuple[tuple[int, ...], ...]:
    """Connected components of the block relation, each sorted, ordered by leader."""
    _, labels = connected_components(csr_matrix(np.asarray(gamma) != 0), directed=False)
    groups: dict[int, list[int]] = {}
    for index, label in enumerate(labels):
        groups.setdefault(int(label), []).append(index)
    return tuple(sorted(tuple(group) for group in groups.values()))


def infer_gamma(
    v: VTensor, u: np.ndarray, options: SolverConfig | None = None
) -> np.ndarray:
    """
    Block relation of the transformed errors

    ``gamma[n, m] = 1`` when the median over sample pairs of
    ``|A[n, m, i, j]| / (|c_n(i)| |c_m(j)| |gram[i, j]| + floor_eps)`` exceeds
    ``gamma_threshold`` in both directions. Errors with vanishing coefficients
    are related only to themselves.

    :param v: V-tensor
    :type v: VTensor
    :param u: unitary over the error index
    :type u: np.ndarray
    :param options: solver tolerances, defaults to None
    :type options: SolverConfig | None, optional
    :raises InconsistentGamma: when more than ``flip_budget`` entries break transitivity
    :return: symmetric 0/1 matrix with unit diagonal
    :rtype: np.ndarray
    """
    options = options or SolverConfig()
    a = transform_tensor(v.entries, u)
    mag = _magnitudes(a, v.gram)
    zero_mask, _ = _classify(mag, options.c_zero_tol)
    stat = _gamma_statistic(a, mag, v.gram, options)
    gamma, closure, flips = _close_gamma(stat, zero_mask, options.gamma_threshold)
    if flips > options.flip_budget:
        raise InconsistentGamma(
            f"Block relation is not transitive [flips = {flips}]", flips=flips
        )
    return closure if flips else gamma


def align_gauge(
    u: np.ndarray, blocks: tuple[tuple[int, ...], ...]
) -> tuple[np.ndarray, np.ndarray]:
    """
    Rotate ``u`` towards the identity inside each block, then order its columns.

    Each block is mixed by the unitary that makes its heaviest rows Hermitian
    positive; columns are then assigned to error indices by maximum weight
    ``|u|^2``.

    :return: aligned unitary and the column permutation applied
    :rtype: tuple[np.ndarray, np.ndarray]
    """
    u = np.array(u, dtype=complex, copy=True)
    for block in blocks:
        cols = u[:, list(block)]
        heavy = np.argsort(-np.linalg.norm(cols, axis=1), kind="stable")
        rows = np.sort(heavy[: len(block)])
        iso, _ = polar_decompose(cols[rows, :])
        u[:, list(block)] = cols @ dagger(iso)
    _, perm = linear_sum_assignment(np.abs(u) ** 2, maximize=True)
    return u[:, perm], perm


def _descent_direction(
    entries: np.ndarray, u: np.ndarray, defect: np.ndarray
) -> np.ndarray:
    grad = np.einsum("abij,bm,nmij->an", entries, u, defect.conj(), optimize=True)
    grad += np.einsum("baij,bm,mnij->an", entries.conj(), u, defect, optimize=True)
    skew = 0.5 * (dagger(u) @ grad - dagger(grad) @ u)
    return skew


def _refine(
    v: VTensor,
    u: np.ndarray,
    gamma: np.ndarray,
    blocks: tuple[tuple[int, ...], ...],
    options: SolverConfig,
) -> tuple[np.ndarray, np.ndarray, int, float, int, bool]:
    def evaluate(trial):
        a = transform_tensor(v.entries, trial)
        c, ref = extract_coefficients(a, v.gram, blocks, options.overlap_floor)
        return _relative(a - model_tensor(c, gamma, v.gram), v.entries), c, ref

    residual, c, reference = evaluate(u)
    if residual <= options.refine_tol:
        return u, c, reference, residual, 0, True

    step = 0.1
    for iteration in range(1, options.max_iters + 1):
        a = transform_tensor(v.entries, u)
        skew = _descent_direction(v.entries, u, a - model_tensor(c, gamma, v.gram))
        norm = frobenius(skew)
        if norm == 0.0:
            return u, c, reference, residual, iteration - 1, True

        accepted = False
        for _ in range(LINE_SEARCH_STEPS):
            trial = u @ expm_antihermitian(-step / norm * skew)
            trial_residual, trial_c, trial_ref = evaluate(trial)
            if trial_residual < residual:
                accepted = True
                break
            step /= 2
        if not accepted:
            return u, c, reference, residual, iteration - 1, True

        change = residual - trial_residual
        u, c, reference, residual = trial, trial_c, trial_ref, trial_residual
        step = min(2 * step, 1.0)
        if change < options.refine_tol:
            return u, c, reference, residual, iteration, True
    return u, c, reference, residual, options.max_iters, False


def _alternatives(
    v: VTensor,
    u: np.ndarray,
    c: np.ndarray,
    gamma: np.ndarray,
    zero_mask: np.ndarray,
    options: SolverConfig,
) -> tuple[GammaAlternative, ...]:
    a = transform_tensor(v.entries, u)
    stat = _gamma_statistic(a, _magnitudes(a, v.gram), v.gram, options)
    stat = np.minimum(stat, stat.T)
    live = np.flatnonzero(~zero_mask)
    pairs = [(n, m) for k, n in enumerate(live) for m in live[k + 1 :]]
    pairs.sort(key=lambda pair: abs(stat[pair] - options.gamma_threshold))
    out = []
    for n, m in pairs[:2]:
        flipped = gamma.copy()
        flipped[n, m] = flipped[m, n] = 1 - gamma[n, m]
        out.append(
            GammaAlternative(
                gamma=flipped, residual_rel=criterion_residual(v, u, c, flipped)
            )
        )
    return tuple(out)


def _solve_from(
    v: VTensor, start: np.ndarray, options: SolverConfig
) -> CriterionSolution:
    warnings: list[str] = []
    a = transform_tensor(v.entries, start)
    mag = _magnitudes(a, v.gram)
    zero_mask, _ = _classify(mag, options.c_zero_tol)
    stat = _gamma_statistic(a, mag, v.gram, options)
    gamma, closure, flips = _close_gamma(stat, zero_mask, options.gamma_threshold)
    consistent = flips <= options.flip_budget
    if flips:
        gamma = closure
        if not consistent:
            warnings.append(f"Block relation is not transitive [flips = {flips}]")

    u, perm = align_gauge(start, gamma_blocks(gamma))
    gamma = gamma[np.ix_(perm, perm)]
    blocks = gamma_blocks(gamma)

    u, c, reference, residual, iterations, converged = _refine(
        v, u, gamma, blocks, options
    )
    u, c = fix_gauge(u, c, reference)
    if not converged:
        warnings.append(f"Refinement stopped at the iteration cap [{iterations}]")

    zero_mask, dichotomy_ok = _classify(np.abs(c), options.c_zero_tol)
    if not dichotomy_ok:
        warnings.append("Coefficients mix vanishing and finite values for one error")
    epsilon = transform_tensor(v.entries, u) - model_tensor(c, gamma, v.gram)
    return CriterionSolution(
        u=u,
        c=c,
        gamma=gamma,
        residual_rel=residual,
        epsilon=epsilon,
        zero_mask=zero_mask,
        blocks=blocks,
        reference_sample=reference,
        iterations=iterations,
        converged=converged,
        gamma_consistent=consistent,
        gamma_flips=flips,
        dichotomy_ok=dichotomy_ok,
        gamma_alternatives=_alternatives(v, u, c, gamma, zero_mask, options),
        warnings=tuple(warnings),
    )


def _rank(
    solution: CriterionSolution, options: SolverConfig
) -> tuple[bool, bool, bool, float]:
    return (
        not solution.dichotomy_ok,
        not solution.gamma_consistent,
        solution.residual_rel > options.accept_residual,
        solution.residual_rel,
    )


def solve_factorization(
    v: VTensor, options: SolverConfig | None = None, seed: int = 0
) -> CriterionSolution:
    """
    Search for ``(u, c, gamma)`` factorizing the V-tensor

    Starts from :func:`spectral_init`; a degenerate spectrum adds the identity
    and a joint-diagonalization start and the best candidate is kept. Each start
    goes through block inference, gauge alignment and refinement on the
    unitary group.

    :param v: V-tensor
    :type v: VTensor
    :param options: solver tolerances, defaults to None
    :type options: SolverConfig | None, optional
    :param seed: seed for the slice subset of the joint diagonalization, defaults to 0
    :type seed: int, optional
    :raises DegenerateSampleSet: with fewer than two samples
    :return: best factorization found, with diagnostics
    :rtype: CriterionSolution
    """
    options = options or SolverConfig()
    if v.n_samples < 2:
        raise DegenerateSampleSet(
            f"Factorization needs at least two samples, got [{v.n_samples}]"
        )

    start, degenerate = spectral_init(v, options)
    starts = [start]
    if degenerate:
        logger.warning(f"Degenerate spectrum, adding more starts [{v.label}]")
        joint = _joint_start(v, start, options, seed)
        starts = [np.eye(v.n_ops, dtype=complex), start, joint]
    candidates = [_solve_from(v, u, options) for u in starts]
    best = min(candidates, key=lambda solution: _rank(solution, options))

    warnings = best.warnings
    if degenerate:
        warnings = ("Degenerate spectrum of the averaged diagonal slice",) + warnings
    for message in best.warnings:
        logger.warning(f"{message} [{v.label}]")
    logger.info(
        f"Solved factorization [{v.label}] [residual = {best.residual_rel:.3e}] "
        f"[iterations = {best.iterations}] [blocks = {len(best.blocks)}]"
    )
    return best.model_copy(
        update={"degenerate_spectrum": degenerate, "warnings": warnings}
    )


def verdict(
    solution: CriterionSolution, options: SolverConfig | None = None
) -> Verdict:
    """Exact, approximate or failed, from the residual and the structural checks."""
    options = options or SolverConfig()
    if not (solution.dichotomy_ok and solution.gamma_consistent):
        return Verdict.FAIL
    if solution.residual_rel <= options.accept_residual:
        return Verdict.EXACT
    if solution.residual_rel <= options.approx_ceiling:
        return Verdict.APPROXIMATE
    return Verdict.FAIL
