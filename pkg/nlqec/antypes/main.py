from enum import Enum

import numpy as np
from pydantic import BaseModel as BaseInfo, ConfigDict, Field


class FamilyKind(Enum):
    """Built-in alphabet families, see :mod:`nlqec.alphabets`."""

    COHERENT = "coherent"
    SQUEEZED_COHERENT = "squeezed_coherent"
    EVEN_CAT = "even_cat"
    DEPHASING_PAIR = "dephasing_pair"
    FIXED_PHASE = "fixed_phase"
    KL_CODEWORD = "kl_codeword"


class ChannelKind(Enum):
    """Built-in error channels, see :mod:`nlqec.channels`."""

    SIMPLIFIED_LOSS = "simplified_loss"
    AMPLITUDE_DAMPING = "amplitude_damping"
    COLLECTIVE_DEPHASING = "collective_dephasing"
    PAULI = "pauli"
    CUSTOM = "custom"


class SampleStrategy(Enum):
    """How the alphabet domain is turned into a finite sample set."""

    GRID = "grid"
    UNIFORM_RANDOM = "uniform_random"
    EXPLICIT = "explicit"


class RecoveryStrategy(Enum):
    """Recovery construction used by :mod:`nlqec.recovery`."""

    SAMPLED = "sampled"
    IDENTITY = "identity"


class Verdict(Enum):
    """Outcome of a criterion check, valued by its exit code."""

    EXACT = 0
    FAIL = 1
    APPROXIMATE = 2


class FockSpace(BaseInfo):
    """Bosonic mode truncated to Fock levels ``0..n_max``"""

    model_config = ConfigDict(frozen=True)

    n_max: int = Field(ge=1)
    guard_band: int = Field(default=10, ge=0)
    trunc_tol: float = Field(default=1e-10, gt=0)

    @property
    def dim(self) -> int:
        return self.n_max + 1


class QubitRegister(BaseInfo):
    """Register of ``n_qubits`` qubits"""

    model_config = ConfigDict(frozen=True)

    n_qubits: int = Field(ge=1)

    @property
    def dim(self) -> int:
        return 2**self.n_qubits


class ArrayInfo(BaseInfo):
    """Immutable container holding numpy arrays"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)


class SampleSet(ArrayInfo):
    """Finite set of alphabet states and their Gram matrix"""

    family: str
    params: np.ndarray
    states: np.ndarray
    gram: np.ndarray
    seed: int | None = None
    pruned: int = 0

    @property
    def count(self) -> int:
        return self.states.shape[1]

    @property
    def dim(self) -> int:
        return self.states.shape[0]


class KrausChannel(ArrayInfo):
    """Ordered Kraus operators with their trace-preservation defect"""

    label: str
    ops: tuple[np.ndarray, ...]
    tp_defect: float
    k_max: int | None = None

    @property
    def dim(self) -> int:
        return self.ops[0].shape[0]

    @property
    def n_ops(self) -> int:
        return len(self.ops)

    def is_trace_preserving(self, tp_tol: float = 1e-10) -> bool:
        return self.tp_defect <= tp_tol


class VTensor(ArrayInfo):
    """Entries ``V[n, m, i, j] = <psi_i| E_n^dagger E_m |psi_j>``"""

    label: str
    entries: np.ndarray
    samples: SampleSet

    @property
    def n_ops(self) -> int:
        return self.entries.shape[0]

    @property
    def n_samples(self) -> int:
        return self.entries.shape[2]

    @property
    def gram(self) -> np.ndarray:
        return self.samples.gram


class GammaAlternative(ArrayInfo):
    """Residual of the factorization under a neighbouring block relation"""

    gamma: np.ndarray
    residual_rel: float


class CriterionSolution(ArrayInfo):
    """Unitary mixing, coefficients and block relation found by the solver"""

    u: np.ndarray
    c: np.ndarray
    gamma: np.ndarray
    residual_rel: float
    epsilon: np.ndarray
    zero_mask: np.ndarray
    blocks: tuple[tuple[int, ...], ...]
    reference_sample: int = 0
    iterations: int = 0
    converged: bool = True
    degenerate_spectrum: bool = False
    gamma_consistent: bool = True
    gamma_flips: int = 0
    dichotomy_ok: bool = True
    gamma_alternatives: tuple[GammaAlternative, ...] = ()
    warnings: tuple[str, ...] = ()


class JnOperator(ArrayInfo):
    """Diagonal action of ``c_n`` on the sampled span"""

    index: int
    matrix: np.ndarray
    defect: float


class RecoveryChannel(ArrayInfo):
    """Code projector, block isometries, error projectors and recovery operators"""

    strategy: RecoveryStrategy
    code_projector: np.ndarray
    blocks: tuple[tuple[int, ...], ...]
    isometries: tuple[np.ndarray, ...]
    projectors: tuple[np.ndarray, ...]
    operators: tuple[np.ndarray, ...]
    includes_r0: bool = False
    isometry_defect: float = 0.0
    block_equality_defect: float = 0.0
    completeness_defect: float = 0.0

    @property
    def dim(self) -> int:
        return self.code_projector.shape[0]


class KLReduction(ArrayInfo):
    """Knill-Laflamme matrix of a codeword set and the induced factorization"""

    holds: bool
    h: np.ndarray
    codeword_defect: float
    offdiag_defect: float
    residual_rel: float | None = None
    coefficient_spread: float | None = None
    solution: CriterionSolution | None = None


class ApproximateMetrics(ArrayInfo):
    """Per-entry residuals of an approximate factorization"""

    epsilon: np.ndarray
    ratio: np.ndarray
    epsilon_max: float
    ratio_max: float | None
    orthogonality_defect: float


class BlockIsometries(ArrayInfo):
    """Least-squares isometries ``U_q`` of each recovery block"""

    blocks: tuple[tuple[int, ...], ...]
    representatives: tuple[int, ...]
    isometries: tuple[np.ndarray, ...]
    sample_defects: np.ndarray
    block_equality_defect: float = 0.0

    @property
    def isometry_defect(self) -> float:
        return float(np.max(self.sample_defects)) if self.sample_defects.size else 0.0
