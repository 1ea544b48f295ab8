"""Alphabet-state families and the sampler that turns their domains into samples.

:Usage example:

.. code-block:: python

    from nlqec.alphabets import coherent_family, sample_parameters
    from nlqec.antypes import DomainAxis, FockSpace

    family = coherent_family(FockSpace(n_max=60))
    samples = sample_parameters(
        family,
        "grid",
        count=5,
        domain={"re": DomainAxis(low=1, high=3), "im": DomainAxis(values=[0])},
    )
"""

import itertools
import math
from enum import Enum

import numpy as np
from scipy import linalg

from nlqec.antypes import (
    AlphabetConfig,
    DomainAxis,
    FamilyKind,
    FockSpace,
    QubitRegister,
    SampleSet,
    SampleStrategy,
)
from nlqec.core.errors import (
    DegenerateSampleSet,
    DimensionMismatch,
    DomainEmpty,
    DomainViolation,
)
from nlqec.core.logs import get_logger
from nlqec.hilbert import (
    basis_state,
    coherent_state,
    even_cat_state,
    pauli_op,
    squeezed_coherent_state,
)
from nlqec.interfaces import IAlphabetFamily
from nlqec.numkit import dagger

CAT_HALF_PLANE_MARGIN = 1.5

logger = get_logger("nlqec.alphabets")


def _require_fock(space) -> FockSpace:
    if not isinstance(space, FockSpace):
        raise DomainViolation("This alphabet family needs a Fock space")
    return space


class CoherentFamily(IAlphabetFamily):
    """Coherent states ``|alpha>``, the eigenstates of the loss operator."""

    kind = FamilyKind.COHERENT
    param_names = ("re", "im")

    def __init__(self, space: FockSpace):
        super().__init__(space.dim)
        self.space = space

    @classmethod
    def from_config(cls, config: AlphabetConfig, space):
        return cls(_require_fock(space))

    def state(self, params: np.ndarray) -> np.ndarray:
        return coherent_state(complex(params[0], params[1]), self.space)

    def default_domain(self) -> dict[str, DomainAxis]:
        return {"re": DomainAxis(low=1.0, high=3.0), "im": DomainAxis(values=[0.0])}


class SqueezedCoherentFamily(IAlphabetFamily):
    """Squeezed coherent states ``S(xi)|alpha>`` at a fixed squeezing ``xi``."""

    kind = FamilyKind.SQUEEZED_COHERENT
    param_names = ("re", "im")

    def __init__(self, space: FockSpace, xi: complex):
        xi = complex(xi)
        super().__init__(space.dim, {"r": abs(xi), "theta": float(np.angle(xi))})
        self.space = space
        self.xi = xi

    @classmethod
    def from_config(cls, config: AlphabetConfig, space):
        r = config.fixed.get("r", 0.0)
        theta = config.fixed.get("theta", 0.0)
        return cls(_require_fock(space), r * complex(math.cos(theta), math.sin(theta)))

    def state(self, params: np.ndarray) -> np.ndarray:
        return squeezed_coherent_state(
            complex(params[0], params[1]), self.xi, self.space
        )

    def default_domain(self) -> dict[str, DomainAxis]:
        return {"re": DomainAxis(low=8.0, high=12.0), "im": DomainAxis(values=[0.0])}


class EvenCatFamily(IAlphabetFamily):
    """
    Even cat states ``|alpha_e>`` with the exact normalisation.

    ``|alpha_e>`` and ``|-alpha_e>`` coincide, so the domain is the right
    half-plane: ``Re(alpha)`` must reach ``half_plane_margin``.
    """

    kind = FamilyKind.EVEN_CAT
    param_names = ("re", "im")

    def __init__(
        self, space: FockSpace, half_plane_margin: float = CAT_HALF_PLANE_MARGIN
    ):
        if half_plane_margin <= 0:
            raise DomainViolation(
                f"Half-plane margin must be positive, got [{half_plane_margin}]"
            )
        super().__init__(space.dim, {"margin": half_plane_margin})
        self.space = space
        self.half_plane_margin = half_plane_margin

    @classmethod
    def from_config(cls, config: AlphabetConfig, space):
        margin = config.fixed.get("margin", CAT_HALF_PLANE_MARGIN)
        return cls(_require_fock(space), margin)

    def validate(self, params: np.ndarray) -> np.ndarray:
        params = np.asarray(params, dtype=float)
        if params[0] < self.half_plane_margin:
            raise DomainViolation(
                f"Cat parameter [{complex(params[0], params[1])}] is outside the "
                f"half-plane Re(alpha) >= [{self.half_plane_margin}]"
            )
        return params

    def state(self, params: np.ndarray) -> np.ndarray:
        return even_cat_state(complex(params[0], params[1]), self.space)

    def default_domain(self) -> dict[str, DomainAxis]:
        return {"re": DomainAxis(low=3.0, high=5.0), "im": DomainAxis(values=[0.0])}


class DephasingPairFamily(IAlphabetFamily):
    """Two-qubit states ``X_2^j (cos(theta)|00> + exp(i phi) sin(theta)|11>)``."""

    kind = FamilyKind.DEPHASING_PAIR
    param_names = ("j", "theta", "phi")

    def __init__(self):
        self.register = QubitRegister(n_qubits=2)
        super().__init__(self.register.dim)
        self._flip = pauli_op(self.register, "X", 1)
        self._even = basis_state(self.register, "00")
        self._odd = basis_state(self.register, "11")

    @classmethod
    def from_config(cls, config: AlphabetConfig, space):
        return cls()

    def validate(self, params: np.ndarray) -> np.ndarray:
        params = np.asarray(params, dtype=float)
        if params[0] not in (0.0, 1.0):
            raise DomainViolation(f"Parameter j must be 0 or 1, got [{params[0]}]")
        return params

    def state(self, params: np.ndarray) -> np.ndarray:
        j, theta, phi = params
        odd = np.exp(1j * phi) * math.sin(theta) * self._odd
        psi = math.cos(theta) * self._even + odd
        return self._flip @ psi if j == 1 else psi

    def default_domain(self) -> dict[str, DomainAxis]:
        return {
            "j": DomainAxis(values=[0.0, 1.0]),
            "theta": DomainAxis(values=[math.pi / 8, math.pi / 3]),
            "phi": DomainAxis(values=[0.0, math.pi / 2]),
        }


class FixedPhaseFamily(IAlphabetFamily):
    """
    Two-qubit states parametrised by ``theta`` at a fixed relative phase ``phi0``.

    ``(e^{i phi0} cos|00> + sin|01> + cos|10> + e^{i phi0} sin|11>) / sqrt(2)``
    """

    kind = FamilyKind.FIXED_PHASE
    param_names = ("theta",)

    def __init__(self, phi0: float):
        self.register = QubitRegister(n_qubits=2)
        super().__init__(self.register.dim, {"phi0": phi0})
        self.phi0 = phi0

    @classmethod
    def from_config(cls, config: AlphabetConfig, space):
        return cls(config.fixed.get("phi0", 0.0))

    def state(self, params: np.ndarray) -> np.ndarray:
        cos, sin = math.cos(params[0]), math.sin(params[0])
        phase = np.exp(1j * self.phi0)
        psi = np.array([phase * cos, sin, cos, phase * sin], dtype=complex)
        return psi / math.sqrt(2)

    def default_domain(self) -> dict[str, DomainAxis]:
        return {"theta": DomainAxis(low=0.1, high=1.4)}


class KLCodewordFamily(IAlphabetFamily):
    """Superpositions ``sum_j alpha_j |xi_j>`` of orthonormal codewords."""

    kind = FamilyKind.KL_CODEWORD

    def __init__(self, codewords: list[str] | list[np.ndarray], tol: float = 1e-10):
        if not codewords:
            raise DomainEmpty("A codeword family needs at least one codeword")
        if all(isinstance(word, str) for word in codewords):
            self.register = QubitRegister(n_qubits=len(codewords[0]))
            columns = [basis_state(self.register, word) for word in codewords]
        else:
            self.register = None
            columns = [np.asarray(word, dtype=complex) for word in codewords]
        if len({column.shape for column in columns}) != 1:
            raise DimensionMismatch("Codewords must share one dimension")

        self.codewords = np.stack(columns, axis=1)
        defect = np.max(
            np.abs(dagger(self.codewords) @ self.codewords - np.eye(len(columns)))
        )
        if defect > tol:
            raise DomainViolation(
                f"Codewords are not orthonormal [defect = {defect:.3e}]"
            )

        super().__init__(self.codewords.shape[0])
        self.param_names = tuple(
            f"c{k}_{part}" for k in range(len(columns)) for part in ("re", "im")
        )

    @classmethod
    def from_config(cls, config: AlphabetConfig, space):
        if not config.codewords:
            raise DomainEmpty("Family [kl_codeword] needs 'codewords'")
        return cls(config.codewords)

    def validate(self, params: np.ndarray) -> np.ndarray:
        params = np.asarray(params, dtype=float)
        if len(params) != len(self.param_names):
            raise DomainViolation(
                f"Expected [{len(self.param_names)}] coefficients, got [{len(params)}]"
            )
        if not np.any(params):
            raise DomainViolation("The zero superposition is not a state")
        return params

    def state(self, params: np.ndarray) -> np.ndarray:
        coeffs = np.asarray(params[0::2]) + 1j * np.asarray(params[1::2])
        psi = self.codewords @ coeffs
        return psi / np.linalg.norm(psi)

    def default_domain(self) -> dict[str, DomainAxis]:
        return {name: DomainAxis(low=-1.0, high=1.0) for name in self.param_names}


def coherent_family(space: FockSpace) -> CoherentFamily:
    return CoherentFamily(space)


def squeezed_coherent_family(xi: complex, space: FockSpace) -> SqueezedCoherentFamily:
    return SqueezedCoherentFamily(space, xi)


def even_cat_family(
    space: FockSpace, half_plane_margin: float = CAT_HALF_PLANE_MARGIN
) -> EvenCatFamily:
    return EvenCatFamily(space, half_plane_margin)


def dephasing_pair_family() -> DephasingPairFamily:
    return DephasingPairFamily()


def fixed_phase_family(phi0: float) -> FixedPhaseFamily:
    return FixedPhaseFamily(phi0)


def kl_codeword_family(codewords: list[str] | list[np.ndarray]) -> KLCodewordFamily:
    return KLCodewordFamily(codewords)


class AlphabetKind(Enum):
    """Supported alphabet families"""

    COHERENT = CoherentFamily
    SQUEEZED_COHERENT = SqueezedCoherentFamily
    EVEN_CAT = EvenCatFamily
    DEPHASING_PAIR = DephasingPairFamily
    FIXED_PHASE = FixedPhaseFamily
    KL_CODEWORD = KLCodewordFamily


def build_family(config: AlphabetConfig, space) -> IAlphabetFamily:
    """
    Alphabet family described by a config node

    :param config: alphabet section of a scenario config
    :type config: AlphabetConfig
    :param space: Fock space for bosonic families, ignored by qubit families
    :type space: FockSpace | QubitRegister | None
    :return: family instance
    :rtype: IAlphabetFamily
    """
    kind = AlphabetKind[FamilyKind(config.family).name]
    return kind.value.from_config(config, space)


def _resolve_domain(
    family: IAlphabetFamily, domain: dict[str, DomainAxis] | None
) -> list[DomainAxis]:
    domain = dict(domain or {})
    unknown = set(domain) - set(family.param_names)
    if unknown:
        raise DomainViolation(
            f"Unknown parameters {sorted(unknown)} for family [{family.name}]"
        )
    defaults = family.default_domain()
    return [domain.get(name, defaults[name]) for name in family.param_names]


def _grid(axes: list[DomainAxis], count: int, explicit: bool) -> np.ndarray:
    points = []
    for axis in axes:
        if axis.values:
            points.append(list(axis.values))
        elif explicit:
            raise DomainEmpty("Explicit sampling needs a value list on every axis")
        elif axis.low == axis.high:
            points.append([axis.low])
        else:
            points.append(list(np.linspace(axis.low, axis.high, count)))
    return np.array(list(itertools.product(*points)), dtype=float)


def _uniform(axes: list[DomainAxis], count: int, seed: int | None) -> np.ndarray:
    rng = np.random.default_rng(seed)
    columns = []
    for axis in axes:
        if axis.values:
            columns.append(rng.choice(np.asarray(axis.values, dtype=float), count))
        else:
            columns.append(rng.uniform(axis.low, axis.high, count))
    return np.stack(columns, axis=1)


def _cap(params: np.ndarray, max_total: int) -> np.ndarray:
    if len(params) <= max_total:
        return params
    index = np.unique(np.round(np.linspace(0, len(params) - 1, max_total)).astype(int))
    return params[index]


def duplicate_pairs(states: np.ndarray, rank_tol: float) -> list[int]:
    """
    Indices of columns that duplicate an earlier kept column.

    Two normalised states are duplicates when their 2x2 Gram matrix has
    condition number ``(1 + |g|) / (1 - |g|)`` above ``1 / rank_tol``.
    """
    kept: list[int] = []
    dropped: list[int] = []
    for k in range(states.shape[1]):
        overlaps = np.abs(dagger(states[:, kept]) @ states[:, k]) if kept else []
        near = [g for g in overlaps if g >= 1.0 or (1 + g) / (1 - g) > 1 / rank_tol]
        (dropped if near else kept).append(k)
    return dropped


def sample_parameters(
    family: IAlphabetFamily,
    strategy: SampleStrategy | str = SampleStrategy.GRID,
    count: int = 8,
    seed: int | None = None,
    domain: dict[str, DomainAxis] | None = None,
    explicit: list[list[float]] | None = None,
    rank_tol: float = 1e-8,
    max_total: int = 64,
) -> SampleSet:
    """
    Finite sample set of alphabet states

    Grid sampling takes ``count`` points per ranged axis and the listed values
    of the other axes, then the Cartesian product capped at ``max_total``.
    Random sampling draws ``count`` parameter vectors from ``seed``. Explicit
    sampling uses ``explicit`` rows, or the product of per-axis value lists.
    Near-duplicate states are pruned.

    :param family: alphabet family
    :type family: IAlphabetFamily
    :param strategy: sampling strategy, defaults to grid
    :type strategy: SampleStrategy | str, optional
    :param count: points per axis (grid) or draws (random), defaults to 8
    :type count: int, optional
    :param seed: RNG seed of the random strategy, defaults to None
    :type seed: int | None, optional
    :param domain: per-parameter axes overriding the family default, defaults to None
    :type domain: dict[str, DomainAxis] | None, optional
    :param explicit: explicit parameter rows, defaults to None
    :type explicit: list[list[float]] | None, optional
    :param rank_tol: duplicate threshold, defaults to 1e-8
    :type rank_tol: float, optional
    :param max_total: cap on the number of samples, defaults to 64
    :type max_total: int, optional
    :raises DomainEmpty: when the domain yields no parameters
    :raises DegenerateSampleSet: when pruning leaves fewer than two states
    :return: sample set with states and Gram matrix
    :rtype: SampleSet
    """
    strategy = SampleStrategy(strategy)
    axes = _resolve_domain(family, domain)

    if strategy is SampleStrategy.EXPLICIT and explicit is not None:
        params = np.asarray(explicit, dtype=float).reshape(len(explicit), -1)
        if params.size and params.shape[1] != family.param_dims:
            raise DomainViolation(
                f"Explicit rows need [{family.param_dims}] entries, "
                f"got [{params.shape[1]}]"
            )
    elif strategy is SampleStrategy.UNIFORM_RANDOM:
        params = _uniform(axes, min(count, max_total), seed)
    else:
        params = _grid(axes, count, explicit=strategy is SampleStrategy.EXPLICIT)
    params = _cap(params, max_total)

    if len(params) == 0:
        raise DomainEmpty(f"Domain of family [{family.name}] yields no samples")

    params = np.stack([family.validate(row) for row in params])
    states = family.states(params)

    dropped = duplicate_pairs(states, rank_tol)
    if dropped:
        logger.info(
            f"Pruned near-duplicate samples [family = {family.name}] "
            f"[pruned = {len(dropped)}]"
        )
        keep = np.setdiff1d(np.arange(len(params)), dropped)
        params, states = params[keep], states[:, keep]
    if len(params) + len(dropped) >= 2 and len(params) < 2:
        raise DegenerateSampleSet(
            f"Only [{len(params)}] independent sample left for family [{family.name}]"
        )

    gram = dagger(states) @ states
    gram = 0.5 * (gram + dagger(gram))
    return SampleSet(
        family=family.name,
        params=params,
        states=states,
        gram=gram,
        seed=seed,
        pruned=len(dropped),
    )


def independent_subset(samples: SampleSet, rank_tol: float = 1e-8) -> np.ndarray:
    """
    Indices of a maximal linearly independent subset of the sampled states.

    Columns are chosen by QR with column pivoting; the result is sorted.
    """
    _, r, pivots = linalg.qr(samples.states, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    if diag.size == 0 or diag[0] == 0.0:
        return np.zeros(0, dtype=int)
    rank = int(np.count_nonzero(diag > rank_tol * diag[0]))
    return np.sort(pivots[:rank])
