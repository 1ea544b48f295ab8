"""Dense complex linear algebra used by every other nlqec module.

All routines are pure functions of their inputs. Tolerances are relative to the
Frobenius norm of the input unless stated otherwise.

:Usage example:

.. code-block:: python

    import numpy as np
    from nlqec.numkit import eig_hermitian, polar_decompose

    w, v = eig_hermitian(np.array([[0, 1], [1, 0]], dtype=complex))
    iso, h = polar_decompose(np.array([[0, 2], [0, 0]], dtype=complex))
"""

import numpy as np
from scipy import linalg

from nlqec.core.errors import (
    ConvergenceFailure,
    DimensionMismatch,
    NonAntiHermitianInput,
    NonHermitianInput,
)

HERM_TOL = 1e-10
EIG_TOL = 1e-10
POLAR_TOL = 1e-9
SVD_TOL = 1e-10


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def frobenius(m: np.ndarray) -> float:
    return float(np.linalg.norm(m))


def _require_square(m: np.ndarray, op: str) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"{op} needs a square matrix, got shape {m.shape}")


def hermitian_defect(m: np.ndarray) -> float:
    """Largest entry of ``|M - M^dagger|``."""
    if m.size == 0:
        return 0.0
    return float(np.max(np.abs(m - dagger(m))))


def unitarity_defect(u: np.ndarray) -> float:
    """Frobenius distance of ``u^dagger u`` from the identity."""
    return frobenius(dagger(u) @ u - np.eye(u.shape[1]))


def _scale(m: np.ndarray) -> float:
    return max(1.0, frobenius(m))


def _fix_phases(vectors: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """
    Rotate each column so its first significant entry is real and positive.

    :param vectors: matrix whose columns are normalised vectors
    :type vectors: np.ndarray
    :param tol: magnitude below which an entry is ignored, defaults to 1e-12
    :type tol: float, optional
    :return: phase-normalised copy
    :rtype: np.ndarray
    """
    out = np.array(vectors, dtype=complex, copy=True)
    for k in range(out.shape[1]):
        column = out[:, k]
        magnitude = np.abs(column)
        significant = np.flatnonzero(magnitude > tol * max(1.0, magnitude.max()))
        if significant.size:
            lead = column[significant[0]]
            out[:, k] = column * (abs(lead) / lead)
    return out


def eig_hermitian(
    m: np.ndarray,
    herm_tol: float = HERM_TOL,
    eig_tol: float = EIG_TOL,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Eigendecomposition of a Hermitian matrix.

    :param m: square Hermitian matrix
    :type m: np.ndarray
    :param herm_tol: allowed symmetry defect relative to ``max(1, ||M||_F)``
    :type herm_tol: float
    :param eig_tol: allowed reconstruction defect relative to ``max(1, ||M||_F)``
    :type eig_tol: float
    :return: ascending eigenvalues and a unitary matrix of phase-fixed eigenvectors
    :rtype: tuple[np.ndarray, np.ndarray]
    :raises NonHermitianInput: if the symmetry defect exceeds ``herm_tol``
    :raises ConvergenceFailure: if LAPACK does not converge
    """
    m = np.asarray(m, dtype=complex)
    _require_square(m, "eig_hermitian")
    defect = hermitian_defect(m)
    if defect > herm_tol * _scale(m):
        raise NonHermitianInput(f"Matrix is not Hermitian [defect = {defect:.3e}]")

    sym = 0.5 * (m + dagger(m))
    try:
        w, v = linalg.eigh(sym)
    except linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"eigh did not converge: {exc}") from exc

    v = _fix_phases(v)
    residual = frobenius(sym @ v - v * w) if m.size else 0.0
    if residual > eig_tol * _scale(m) * max(1, m.shape[0]):
        raise ConvergenceFailure(f"eigh residual too large [{residual:.3e}]")
    return w, v


def svd(
    m: np.ndarray, full_matrices: bool = False
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Singular value decomposition ``M = U diag(s) V^dagger``.

    Note that ``V`` is returned, not ``V^dagger``.
    """
    m = np.asarray(m, dtype=complex)
    try:
        u, s, vh = linalg.svd(m, full_matrices=full_matrices, lapack_driver="gesdd")
    except linalg.LinAlgError:
        try:
            u, s, vh = linalg.svd(
                m, full_matrices=full_matrices, lapack_driver="gesvd"
            )
        except linalg.LinAlgError as exc:
            raise ConvergenceFailure(f"svd did not converge: {exc}") from exc
    return u, s, dagger(vh)


def polar_decompose(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    Right polar decomposition ``M = V_iso H`` with ``H = sqrt(M^dagger M)``.

    The isometry is built from a full SVD as ``U V^dagger``. On the kernel of
    ``H`` this pairs left null vectors with right null vectors in index order,
    which completes ``V_iso`` to a unitary deterministically.

    :param m: square matrix
    :type m: np.ndarray
    :return: unitary factor and positive semidefinite factor
    :rtype: tuple[np.ndarray, np.ndarray]
    """
    m = np.asarray(m, dtype=complex)
    _require_square(m, "polar_decompose")
    u, s, v = svd(m, full_matrices=True)
    iso = u @ dagger(v)
    h = (v * s) @ dagger(v)
    h = 0.5 * (h + dagger(h))
    return iso, h


def isometric_part(m: np.ndarray) -> np.ndarray:
    """Closest matrix with orthonormal columns, the polar factor of a tall ``m``."""
    u, _, v = svd(m, full_matrices=False)
    return u @ dagger(v)


def orthonormalize(columns: np.ndarray, rank_tol: float) -> tuple[np.ndarray, int]:
    """
    Orthonormal basis of the column span.

    :param columns: matrix whose columns span the space
    :type columns: np.ndarray
    :param rank_tol: relative singular value cutoff, must be positive
    :type rank_tol: float
    :return: basis ``Q`` with ``rank`` columns, and the rank
    :rtype: tuple[np.ndarray, int]
    """
    if rank_tol <= 0:
        raise ValueError("rank_tol must be positive")
    columns = np.asarray(columns, dtype=complex)
    if columns.ndim == 1:
        columns = columns[:, None]
    if columns.size == 0:
        return np.zeros((columns.shape[0], 0), dtype=complex), 0

    u, s, _ = svd(columns, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((columns.shape[0], 0), dtype=complex), 0
    rank = int(np.count_nonzero(s > rank_tol * s[0]))
    return _fix_phases(u[:, :rank]), rank


def expm_antihermitian(g: np.ndarray, herm_tol: float = HERM_TOL) -> np.ndarray:
    """
    Exponential of an anti-Hermitian matrix, unitary to machine precision.

    ``G = iH`` with ``H`` Hermitian, so ``exp(G) = W diag(exp(i w)) W^dagger``.

    :raises NonAntiHermitianInput: if ``||G + G^dagger||`` exceeds ``herm_tol``
    """
    g = np.asarray(g, dtype=complex)
    _require_square(g, "expm_antihermitian")
    defect = float(np.max(np.abs(g + dagger(g)))) if g.size else 0.0
    if defect > herm_tol * _scale(g):
        raise NonAntiHermitianInput(
            f"Generator is not anti-Hermitian [defect = {defect:.3e}]"
        )
    h = -0.5j * (g - dagger(g))
    try:
        w, v = linalg.eigh(h)
    except linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"eigh did not converge: {exc}") from exc
    return (v * np.exp(1j * w)) @ dagger(v)


def closest_unitary(m: np.ndarray) -> np.ndarray:
    """Polar projection of ``m`` onto the unitary group."""
    return polar_decompose(m)[0]


def joint_diagonalize(
    matrices: np.ndarray,
    start: np.ndarray | None = None,
    threshold: float = 1e-12,
    max_sweeps: int = 100,
) -> tuple[np.ndarray, int]:
    """
    Approximate joint diagonalization of complex matrices by Jacobi rotations.

    Each sweep visits all index pairs and applies the complex Givens rotation
    that minimises the off-diagonal mass of ``V^dagger A_k V`` summed over k.

    :param matrices: stack of shape ``(K, n, n)``
    :type matrices: np.ndarray
    :param start: initial unitary, defaults to the identity
    :type start: np.ndarray | None, optional
    :param threshold: stop when every rotation sine is below it, defaults to 1e-12
    :type threshold: float, optional
    :param max_sweeps: sweep cap, defaults to 100
    :type max_sweeps: int, optional
    :return: the unitary ``V`` and the number of sweeps used
    :rtype: tuple[np.ndarray, int]
    """
    mats = np.array(matrices, dtype=complex, copy=True)
    _, n, _ = mats.shape
    v = np.eye(n, dtype=complex) if start is None else np.array(start, dtype=complex)
    mats = np.einsum("ap,kab,bq->kpq", v.conj(), mats, v)
    basis = np.array([[1, 0, 0], [0, 1, 1], [0, -1j, 1j]])

    sweeps = 0
    rotating = True
    while rotating and sweeps < max_sweeps:
        rotating = False
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                g = np.vstack(
                    [mats[:, p, p] - mats[:, q, q], mats[:, p, q], mats[:, q, p]]
                )
                gram = np.real(basis @ (g @ dagger(g)) @ dagger(basis))
                _, vecs = linalg.eigh(gram)
                angles = vecs[:, -1]
                if angles[0] < 0:
                    angles = -angles
                c = np.sqrt(0.5 + angles[0] / 2)
                s = 0.5 * (angles[1] - 1j * angles[2]) / c
                if abs(s) > threshold:
                    rotating = True
                    rot = np.array([[c, -np.conj(s)], [s, c]])
                    pair = [p, q]
                    v[:, pair] = v[:, pair] @ rot
                    mats[:, pair, :] = np.einsum(
                        "ab,kbj->kaj", dagger(rot), mats[:, pair, :]
                    )
                    mats[:, :, pair] = mats[:, :, pair] @ rot
    return v, sweeps
