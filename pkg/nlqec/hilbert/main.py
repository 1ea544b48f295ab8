"""Truncated Fock-space and qubit-register constructors.

Operators live on Fock levels ``0..n_max``. Their top row and column carry the
usual truncation artefacts; measured quantities stay below the guard band.
"""

import math
from functools import lru_cache, reduce

import numpy as np
from scipy.special import gammaln

from nlqec.antypes import FockSpace, QubitRegister
from nlqec.core.errors import DegenerateInput, IndexOutOfRange, TruncationError
from nlqec.numkit import expm_antihermitian

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# squeezed-vacuum tail target, tanh(r)^N < 10^-14
SQUEEZE_TAIL_DIGITS = 14


def default_cutoff(
    alpha_max: float, squeeze_r: float = 0.0, guard_band: int = 10
) -> int:
    """
    Fock cutoff ``N_max`` large enough for states up to ``|alpha| = alpha_max``.

    Uses ``ceil(|a|^2 + 6|a| + 20)`` with ``|a| = alpha_max * exp(r)``; for
    squeezed states the squeezed-vacuum tail is covered as well.

    :param alpha_max: largest displacement amplitude
    :type alpha_max: float
    :param squeeze_r: squeezing magnitude, defaults to 0
    :type squeeze_r: float, optional
    :param guard_band: levels kept free above the tail, defaults to 10
    :type guard_band: int, optional
    :return: cutoff level ``N_max``
    :rtype: int
    """
    a = abs(alpha_max) * math.exp(abs(squeeze_r))
    n_max = math.ceil(a * a + 6 * a + 20)
    if squeeze_r:
        decay = -math.log(math.tanh(abs(squeeze_r)))
        tail = math.ceil(SQUEEZE_TAIL_DIGITS * math.log(10) / decay)
        n_max = max(n_max, tail + guard_band)
    return n_max


def fock_space(
    alpha_max: float,
    squeeze_r: float = 0.0,
    guard_band: int = 10,
    trunc_tol: float = 1e-10,
) -> FockSpace:
    return FockSpace(
        n_max=default_cutoff(alpha_max, squeeze_r, guard_band),
        guard_band=guard_band,
        trunc_tol=trunc_tol,
    )


def annihilation_op(space: FockSpace) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, space.dim)), k=1).astype(complex)


def creation_op(space: FockSpace) -> np.ndarray:
    return annihilation_op(space).conj().T


def number_op(space: FockSpace) -> np.ndarray:
    return np.diag(np.arange(space.dim)).astype(complex)


def sqrt_number_op(space: FockSpace) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(space.dim))).astype(complex)


def left_shift_op(space: FockSpace) -> np.ndarray:
    """``T = sum_n |n><n+1|``, so that ``a = T sqrt(n)``."""
    return np.eye(space.dim, k=1, dtype=complex)


def truncation_defect(v: np.ndarray, guard_band: int) -> float:
    """
    Probability mass of ``v`` in its top ``guard_band`` levels.

    :raises IndexOutOfRange: if the guard band is not smaller than the dimension
    """
    if guard_band >= v.shape[0]:
        raise IndexOutOfRange(
            f"Guard band [{guard_band}] must be smaller than dimension [{v.shape[0]}]"
        )
    if guard_band == 0:
        return 0.0
    return float(np.sum(np.abs(v[-guard_band:]) ** 2))


def _checked(v: np.ndarray, space: FockSpace, what: str) -> np.ndarray:
    norm2 = float(np.vdot(v, v).real)
    defect = truncation_defect(v, space.guard_band) / norm2
    if defect > space.trunc_tol:
        raise TruncationError(
            f"{what} leaks into the guard band [defect = {defect:.3e}] "
            f"[n_max = {space.n_max}]",
            defect=defect,
        )
    return v / math.sqrt(norm2)


def coherent_amplitudes(alpha: complex, dim: int) -> np.ndarray:
    """Untruncated amplitudes ``exp(-|a|^2/2) a^n / sqrt(n!)`` for ``n < dim``."""
    n = np.arange(dim)
    out = np.zeros(dim, dtype=complex)
    if alpha == 0:
        out[0] = 1.0
        return out
    r = abs(alpha)
    log_mag = -0.5 * r * r + n * math.log(r) - 0.5 * gammaln(n + 1)
    out[:] = np.exp(log_mag) * np.exp(1j * n * np.angle(alpha))
    return out


def coherent_state(alpha: complex, space: FockSpace) -> np.ndarray:
    """
    Coherent state ``|alpha>`` renormalised after truncation.

    :raises TruncationError: if the guard band holds more than ``trunc_tol``
    """
    return _checked(coherent_amplitudes(alpha, space.dim), space, f"|{alpha}>")


def displacement_op(alpha: complex, space: FockSpace) -> np.ndarray:
    a = annihilation_op(space)
    return expm_antihermitian(alpha * a.conj().T - np.conj(alpha) * a)


@lru_cache(maxsize=32)
def _squeeze_matrix(xi: complex, space: FockSpace) -> np.ndarray:
    a = annihilation_op(space)
    ad = a.conj().T
    out = expm_antihermitian(0.5 * (np.conj(xi) * a @ a - xi * ad @ ad))
    out.setflags(write=False)
    return out


def squeeze_op(xi: complex, space: FockSpace) -> np.ndarray:
    """
    Squeeze operator ``S(xi) = exp((xi* a^2 - xi a^dagger^2) / 2)``.

    :raises TruncationError: if ``S(xi)|0>`` leaks into the guard band
    """
    s = _squeeze_matrix(complex(xi), space)
    _checked(s[:, 0], space, f"S({xi})|0>")
    return s


def squeezed_coherent_state(
    alpha: complex, xi: complex, space: FockSpace
) -> np.ndarray:
    """``|alpha>_xi = S(xi) D(alpha)|0>``."""
    state = squeeze_op(xi, space) @ coherent_state(alpha, space)
    return _checked(state, space, f"|{alpha}>_{xi}")


def even_cat_state(alpha: complex, space: FockSpace) -> np.ndarray:
    """``(|alpha> + |-alpha>) / sqrt(2(1 + exp(-2|alpha|^2)))``, even Fock support."""
    amps = coherent_amplitudes(alpha, space.dim)
    amps[1::2] = 0.0
    norm = math.sqrt(2 * (1 + math.exp(-2 * abs(alpha) ** 2)))
    return _checked(2 * amps / norm, space, f"|{alpha}_e>")


def odd_cat_state(alpha: complex, space: FockSpace) -> np.ndarray:
    """
    ``(|alpha> - |-alpha>) / sqrt(2(1 - exp(-2|alpha|^2)))``, odd Fock support.

    :raises DegenerateInput: for ``alpha = 0``
    """
    if alpha == 0:
        raise DegenerateInput("Odd cat state is undefined at alpha = 0")
    amps = coherent_amplitudes(alpha, space.dim)
    amps[0::2] = 0.0
    norm = math.sqrt(-2 * math.expm1(-2 * abs(alpha) ** 2))
    return _checked(2 * amps / norm, space, f"|{alpha}_o>")


def tensor(matrices: list[np.ndarray]) -> np.ndarray:
    return reduce(np.kron, matrices)


def pauli_op(register: QubitRegister, which: str, site: int) -> np.ndarray:
    """
    Pauli ``which`` on qubit ``site`` (0 is the leftmost tensor factor).

    :raises IndexOutOfRange: if ``site`` is not a qubit of the register
    """
    if not 0 <= site < register.n_qubits:
        raise IndexOutOfRange(
            f"Site [{site}] outside register of [{register.n_qubits}] qubits"
        )
    factors = [PAULI["I"]] * register.n_qubits
    factors[site] = PAULI[which.upper()]
    return tensor(factors)


def pauli_string(register: QubitRegister, label: str) -> np.ndarray:
    """Tensor product for a label such as ``"XZI"``."""
    if len(label) != register.n_qubits:
        raise IndexOutOfRange(
            f"Pauli label [{label}] does not match [{register.n_qubits}] qubits"
        )
    return tensor([PAULI[p] for p in label.upper()])


def basis_state(register: QubitRegister, bits: str) -> np.ndarray:
    """Computational basis vector ``|bits>``."""
    if len(bits) != register.n_qubits or set(bits) - {"0", "1"}:
        raise IndexOutOfRange(f"Invalid basis label [{bits}]")
    out = np.zeros(register.dim, dtype=complex)
    out[int(bits, 2)] = 1.0
    return out
