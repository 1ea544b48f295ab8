from .config import (
    AlphabetConfig,
    ChannelConfig,
    ComplexPair,
    DomainAxis,
    PauliTerm,
    RecoveryConfig,
    SamplerConfig,
    ScenarioConfig,
    SolverConfig,
    SpaceConfig,
    SweepAxis,
    SweepConfig,
    to_complex,
    to_pair,
)
from .main import (
    ApproximateMetrics,
    BlockIsometries,
    ChannelKind,
    CriterionSolution,
    FamilyKind,
    FockSpace,
    GammaAlternative,
    JnOperator,
    KLReduction,
    KrausChannel,
    QubitRegister,
    RecoveryChannel,
    RecoveryStrategy,
    SampleSet,
    SampleStrategy,
    Verdict,
    VTensor,
)
from .report import (
    CriterionReport,
    DiagnosticsInfo,
    GammaAlternativeInfo,
    KLReductionInfo,
    MixedRecoveryInfo,
    NecessaryConditionInfo,
    RecoveryReport,
    Report,
    SqueezedDiagnosticsInfo,
)

__all__ = [
    "ApproximateMetrics",
    "BlockIsometries",
    "AlphabetConfig",
    "ChannelConfig",
    "ChannelKind",
    "ComplexPair",
    "CriterionReport",
    "CriterionSolution",
    "DiagnosticsInfo",
    "DomainAxis",
    "FamilyKind",
    "FockSpace",
    "GammaAlternative",
    "GammaAlternativeInfo",
    "KLReductionInfo",
    "JnOperator",
    "KLReduction",
    "KrausChannel",
    "MixedRecoveryInfo",
    "NecessaryConditionInfo",
    "PauliTerm",
    "QubitRegister",
    "RecoveryChannel",
    "RecoveryConfig",
    "RecoveryReport",
    "RecoveryStrategy",
    "Report",
    "SampleSet",
    "SampleStrategy",
    "SamplerConfig",
    "ScenarioConfig",
    "SolverConfig",
    "SpaceConfig",
    "SqueezedDiagnosticsInfo",
    "SweepAxis",
    "SweepConfig",
    "Verdict",
    "VTensor",
    "to_complex",
    "to_pair",
]
