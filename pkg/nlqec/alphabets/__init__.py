from .main import (
    AlphabetKind,
    CoherentFamily,
    DephasingPairFamily,
    EvenCatFamily,
    FixedPhaseFamily,
    KLCodewordFamily,
    SqueezedCoherentFamily,
    build_family,
    coherent_family,
    dephasing_pair_family,
    duplicate_pairs,
    even_cat_family,
    fixed_phase_family,
    independent_subset,
    kl_codeword_family,
    sample_parameters,
    squeezed_coherent_family,
)

__all__ = [
    "AlphabetKind",
    "CoherentFamily",
    "DephasingPairFamily",
    "EvenCatFamily",
    "FixedPhaseFamily",
    "KLCodewordFamily",
    "SqueezedCoherentFamily",
    "build_family",
    "coherent_family",
    "dephasing_pair_family",
    "duplicate_pairs",
    "even_cat_family",
    "fixed_phase_family",
    "independent_subset",
    "kl_codeword_family",
    "sample_parameters",
    "squeezed_coherent_family",
]
