import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from nlqec.alphabets import (
    build_family,
    coherent_family,
    dephasing_pair_family,
    duplicate_pairs,
    even_cat_family,
    fixed_phase_family,
    independent_subset,
    kl_codeword_family,
    sample_parameters,
)
from nlqec.antypes import AlphabetConfig, DomainAxis, FockSpace
from nlqec.core.errors import (
    DegenerateSampleSet,
    DomainEmpty,
    DomainViolation,
)
from nlqec.hilbert import coherent_state

SPACE = FockSpace(n_max=60)


def test_coherent_grid():
    samples = sample_parameters(
        coherent_family(SPACE),
        "grid",
        count=5,
        domain={"re": DomainAxis(low=1, high=3), "im": DomainAxis(values=[0])},
    )
    assert_allclose(samples.params[:, 0], [1, 1.5, 2, 2.5, 3])
    assert_allclose(samples.params[:, 1], 0)
    assert samples.count == 5 and samples.dim == 61
    assert_allclose(samples.states[:, 2], coherent_state(2.0, SPACE))
    assert_allclose(np.diag(samples.gram).real, 1, atol=1e-14)


def test_dephasing_pair_default_domain():
    samples = sample_parameters(dephasing_pair_family())
    assert samples.count == 8
    assert samples.params[0].tolist() == [0.0, math.pi / 8, 0.0]
    assert samples.params[-1].tolist() == [1.0, math.pi / 3, math.pi / 2]


def test_dephasing_pair_rejects_bad_index():
    with pytest.raises(DomainViolation, match="must be 0 or 1"):
        sample_parameters(dephasing_pair_family(), "explicit", explicit=[[2, 0.3, 0]])


def test_fixed_phase_state():
    psi = fixed_phase_family(0.0).state(np.array([math.pi / 4]))
    assert_allclose(psi, [0.5, 0.5, 0.5, 0.5], atol=1e-15)


def test_duplicate_cat_parameters_are_pruned():
    samples = sample_parameters(
        even_cat_family(FockSpace(n_max=80)),
        "explicit",
        explicit=[[2, 0], [2, 0], [3, 0]],
    )
    assert samples.count == 2
    assert samples.pruned == 1
    assert samples.params[:, 0].tolist() == [2.0, 3.0]


def test_cat_pair_collapsing_to_one_state():
    with pytest.raises(DegenerateSampleSet, match="independent sample"):
        sample_parameters(
            even_cat_family(FockSpace(n_max=80)), "explicit", explicit=[[2, 0], [2, 0]]
        )


@pytest.mark.parametrize("re", [1.0, -2.0, -4.0])
def test_cat_outside_right_half_plane(re):
    with pytest.raises(DomainViolation, match="half-plane"):
        sample_parameters(
            even_cat_family(FockSpace(n_max=80)), "explicit", explicit=[[re, 0]]
        )


def test_cat_domain_reaching_left_half_plane():
    with pytest.raises(DomainViolation):
        sample_parameters(
            even_cat_family(FockSpace(n_max=80)),
            domain={
                "re": DomainAxis(low=-4.0, high=4.0),
                "im": DomainAxis(values=[0.0]),
            },
            count=3,
        )


def test_kl_codeword_superposition():
    family = kl_codeword_family(["000", "111"])
    psi = family.state(np.array([1.0, 0.0, 0.0, 0.0]))
    expected = np.zeros(8)
    expected[0] = 1.0
    assert_allclose(psi, expected)
    assert family.param_names == ("c0_re", "c0_im", "c1_re", "c1_im")


def test_kl_codewords_must_be_orthonormal():
    with pytest.raises(DomainViolation, match="orthonormal"):
        kl_codeword_family([np.array([1, 0]), np.array([1, 1]) / math.sqrt(2)])


def test_uniform_random_is_reproducible():
    family = kl_codeword_family(["000", "111"])
    first = sample_parameters(family, "uniform_random", count=6, seed=3)
    second = sample_parameters(family, "uniform_random", count=6, seed=3)
    assert_allclose(first.params, second.params)
    assert first.seed == 3


def test_explicit_without_values():
    with pytest.raises(DomainEmpty, match="value list"):
        sample_parameters(coherent_family(SPACE), "explicit")


def test_unknown_domain_parameter():
    with pytest.raises(DomainViolation, match="Unknown parameters"):
        sample_parameters(
            coherent_family(SPACE), domain={"r": DomainAxis(values=[1.0])}
        )


def test_sample_cap():
    samples = sample_parameters(
        coherent_family(SPACE),
        count=10,
        max_total=4,
        domain={"re": DomainAxis(low=1, high=3)},
    )
    assert samples.count == 4
    assert samples.params[0, 0] == 1 and samples.params[-1, 0] == 3


def test_build_family_from_config():
    config = AlphabetConfig(
        family="squeezed_coherent", fixed={"r": 0.5, "theta": 0.0}
    )
    family = build_family(config, SPACE)
    assert family.xi == pytest.approx(0.5)
    assert family.fixed_params == {"r": 0.5, "theta": 0.0}


def test_bosonic_family_needs_fock_space():
    with pytest.raises(DomainViolation, match="Fock space"):
        build_family(AlphabetConfig(family="coherent"), None)


def test_duplicate_pairs():
    states = np.stack(
        [coherent_state(2.0, SPACE), coherent_state(2.0, SPACE), np.eye(61)[:, 5]],
        axis=1,
    )
    assert duplicate_pairs(states, 1e-8) == [1]


def test_independent_subset_of_overcomplete_set():
    family = fixed_phase_family(0.3)
    samples = sample_parameters(
        family, domain={"theta": DomainAxis(low=0.1, high=1.4)}, count=6
    )
    # span{cos|a> + sin|b>} is two dimensional
    assert len(independent_subset(samples)) == 2
