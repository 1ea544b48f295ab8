"""Scenario configuration schema.

Configs are JSON (or YAML) documents validated by :class:`ScenarioConfig`.
Unknown keys are rejected at every level. Complex numbers are ``[re, im]``
pairs; a bare number is read as a real value.
"""

from typing import Annotated, Any, Literal

from pydantic import (
    BaseModel as BaseInfo,
    BeforeValidator,
    ConfigDict,
    Field,
    model_validator,
)


def _as_pair(value: Any) -> Any:
    if isinstance(value, complex):
        return (value.real, value.imag)
    if isinstance(value, int | float) and not isinstance(value, bool):
        return (float(value), 0.0)
    return value


ComplexPair = Annotated[tuple[float, float], BeforeValidator(_as_pair)]


def to_complex(pair: tuple[float, float]) -> complex:
    return complex(pair[0], pair[1])


def to_pair(z: complex) -> tuple[float, float]:
    z = complex(z)
    return (z.real, z.imag)


class StrictInfo(BaseInfo):
    """Config node that rejects unknown keys"""

    model_config = ConfigDict(extra="forbid")


def _as_axis(value: Any) -> Any:
    if isinstance(value, int | float) and not isinstance(value, bool):
        return {"values": [value]}
    if isinstance(value, list | tuple):
        if len(value) != 2:
            raise ValueError("a domain range is a [low, high] pair")
        return {"low": value[0], "high": value[1]}
    return value


class DomainAxis(StrictInfo):
    """One alphabet parameter: a closed range or an explicit value list"""

    low: float | None = None
    high: float | None = None
    values: list[float] | None = None

    @model_validator(mode="after")
    def _check(self):
        ranged = self.low is not None and self.high is not None
        if not ranged and not self.values:
            raise ValueError("a domain axis needs [low, high] or values")
        if ranged and self.high < self.low:
            raise ValueError(f"empty range [{self.low}, {self.high}]")
        return self


class SamplerConfig(StrictInfo):
    """Turns the domain into samples"""

    strategy: Literal["grid", "uniform_random", "explicit"] = "grid"
    count: int = Field(default=8, ge=1)
    max_total: int = Field(default=64, ge=1)
    seed: int | None = None
    explicit: list[list[float]] | None = None
    rank_tol: float = Field(default=1e-8, gt=0)


class AlphabetConfig(StrictInfo):
    """Alphabet family, its domain and fixed parameters"""

    family: Literal[
        "coherent",
        "squeezed_coherent",
        "even_cat",
        "dephasing_pair",
        "fixed_phase",
        "kl_codeword",
    ]
    domain: dict[str, Annotated[DomainAxis, BeforeValidator(_as_axis)]] = {}
    fixed: dict[str, float] = {}
    codewords: list[str] | None = None
    sampler: SamplerConfig = SamplerConfig()


class SpaceConfig(StrictInfo):
    """Fock truncation or qubit count"""

    kind: Literal["fock", "qubits"]
    n_max: int | None = Field(default=None, ge=1)
    n_qubits: int | None = Field(default=None, ge=1)
    guard_band: int = Field(default=10, ge=0)
    trunc_tol: float = Field(default=1e-10, gt=0)

    @model_validator(mode="after")
    def _check(self):
        if self.kind == "qubits" and self.n_qubits is None:
            raise ValueError("a qubit space needs n_qubits")
        return self


class PauliTerm(StrictInfo):
    """Kraus operator ``sqrt(weight) * P`` for a Pauli label such as ``XII``"""

    label: str
    weight: float = Field(ge=0)


class ChannelConfig(StrictInfo):
    """Error channel settings"""

    type: Literal[
        "simplified_loss",
        "amplitude_damping",
        "collective_dephasing",
        "pauli",
        "custom",
    ]
    p: float | None = Field(default=None, ge=0, le=1)
    gamma: float | None = Field(default=None, gt=0, le=1)
    k_max: int | None = Field(default=None, ge=0)
    terms: list[PauliTerm] | None = None
    ops: list[list[list[ComplexPair]]] | None = None
    label: str | None = None

    @model_validator(mode="after")
    def _check(self):
        required = {
            "amplitude_damping": "gamma",
            "collective_dephasing": "p",
            "pauli": "terms",
            "custom": "ops",
        }.get(self.type)
        if required and getattr(self, required) is None:
            raise ValueError(f"channel [{self.type}] needs '{required}'")
        return self


class SolverConfig(StrictInfo):
    """Tolerances and limits of the criterion solver"""

    herm_tol: float = 1e-10
    eig_tol: float = 1e-10
    polar_tol: float = 1e-9
    svd_tol: float = 1e-10
    tp_tol: float = 1e-10
    spec_gap_tol: float = 1e-6
    refine_tol: float = 1e-12
    max_iters: int = Field(default=200, ge=0)
    jd_sweeps: int = Field(default=100, ge=1)
    jd_slices: int = Field(default=32, ge=1)
    gamma_threshold: float = Field(default=0.5, gt=0, lt=1)
    floor_eps: float = 1e-14
    overlap_floor: float = 1e-10
    c_zero_tol: float = 1e-8
    flip_budget: int = Field(default=0, ge=0)
    accept_residual: float = 1e-8
    approx_ceiling: float = 0.5
    cond_max: float = 1e8
    block_tol: float = 1e-8
    mixed_tol: float = 1e-10


class RecoveryConfig(StrictInfo):
    """Recovery construction and simulation"""

    strategy: Literal["sampled", "identity"] = "sampled"
    mixture_weights: list[float] | None = None


class SweepAxis(StrictInfo):
    """Dotted config path and the values it takes"""

    path: str
    values: list[Any] = Field(min_length=1)


class SweepConfig(StrictInfo):
    """One or two sweep axes"""

    axes: list[SweepAxis]

    @model_validator(mode="after")
    def _check(self):
        if not 1 <= len(self.axes) <= 2:
            raise ValueError("a sweep needs one or two axes")
        return self


class ScenarioConfig(StrictInfo):
    """Complete description of one run"""

    name: str = "custom"
    space: SpaceConfig
    alphabet: AlphabetConfig
    channel: ChannelConfig
    solver: SolverConfig = SolverConfig()
    recovery: RecoveryConfig = RecoveryConfig()
    sweep: SweepConfig | None = None
    seed: int = 0
