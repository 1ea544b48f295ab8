"""Built-in scenarios, one per worked example.

:Usage example:

.. code-block:: python

    from nlqec.scenarios import Scenario, get_scenario

    config = get_scenario("example1_coherent")
    config = Scenario.EXAMPLE4_CAT.value()
"""

from enum import Enum
from functools import partial

from nlqec.antypes import ScenarioConfig
from nlqec.core.errors import ConfigError

try:
    from enum import member
except ImportError:  # Python < 3.11: partial objects already become members
    def member(value):
        return value


def _example1_coherent() -> ScenarioConfig:
    return ScenarioConfig.model_validate(
        {
            "name": "example1_coherent",
            "space": {"kind": "fock", "n_max": 60},
            "alphabet": {
                "family": "coherent",
                "domain": {"re": {"values": [1.0, 1.5, 2.0, 2.5]}, "im": 0.0},
            },
            "channel": {"type": "simplified_loss"},
        }
    )


def _example2_dephasing_dfs() -> ScenarioConfig:
    return ScenarioConfig.model_validate(
        {
            "name": "example2_dephasing_dfs",
            "space": {"kind": "qubits", "n_qubits": 2},
            "alphabet": {"family": "dephasing_pair"},
            "channel": {"type": "collective_dephasing", "p": 0.5},
        }
    )


def _example2_dephasing_fixedphase() -> ScenarioConfig:
    return ScenarioConfig.model_validate(
        {
            "name": "example2_dephasing_fixedphase",
            "space": {"kind": "qubits", "n_qubits": 2},
            "alphabet": {
                "family": "fixed_phase",
                "fixed": {"phi0": 0.7},
                "domain": {"theta": {"values": [0.2, 0.5, 0.9, 1.3]}},
            },
            "channel": {"type": "collective_dephasing", "p": 0.3},
        }
    )


def _example3_squeezed(name: str, values: list[float], r: float) -> ScenarioConfig:
    return ScenarioConfig.model_validate(
        {
            "name": name,
            "space": {"kind": "fock"},
            "alphabet": {
                "family": "squeezed_coherent",
                "fixed": {"r": r, "theta": 0.0},
                "domain": {"re": {"values": values}, "im": 0.0},
            },
            "channel": {"type": "simplified_loss"},
        }
    )


def _example3_small_alpha() -> ScenarioConfig:
    return _example3_squeezed("example3_squeezed_small_alpha", [0.8, 1.0, 1.2], 1.0)


def _example3_large_alpha() -> ScenarioConfig:
    return _example3_squeezed("example3_squeezed_large_alpha", [8.0, 10.0, 12.0], 0.5)


def _example4_cat() -> ScenarioConfig:
    return ScenarioConfig.model_validate(
        {
            "name": "example4_cat",
            "space": {"kind": "fock", "n_max": 80},
            "alphabet": {
                "family": "even_cat",
                "domain": {"re": {"values": [3.0, 4.0, 5.0]}, "im": 0.0},
            },
            "channel": {"type": "simplified_loss"},
        }
    )


def _appendix_f_damping() -> ScenarioConfig:
    return ScenarioConfig.model_validate(
        {
            "name": "appendixF_damping",
            "space": {"kind": "fock"},
            "alphabet": {
                "family": "coherent",
                "domain": {"re": {"values": [0.5, 0.75, 1.0]}, "im": 0.0},
            },
            "channel": {"type": "amplitude_damping", "gamma": 0.99},
            "recovery": {"strategy": "identity"},
        }
    )


def _kl_repetition3() -> ScenarioConfig:
    flips = ["III", "XII", "IXI", "IIX"]
    return ScenarioConfig.model_validate(
        {
            "name": "kl_repetition3",
            "space": {"kind": "qubits", "n_qubits": 3},
            "alphabet": {
                "family": "kl_codeword",
                "codewords": ["000", "111"],
                "sampler": {"strategy": "uniform_random", "count": 12},
            },
            "channel": {
                "type": "pauli",
                "terms": [{"label": label, "weight": 0.25} for label in flips],
            },
        }
    )


class Scenario(Enum):
    """Built-in scenarios; each value builds a fresh :class:`ScenarioConfig`"""

    EXAMPLE1_COHERENT = member(partial(_example1_coherent))
    EXAMPLE2_DEPHASING_DFS = member(partial(_example2_dephasing_dfs))
    EXAMPLE2_DEPHASING_FIXEDPHASE = member(partial(_example2_dephasing_fixedphase))
    EXAMPLE3_SQUEEZED_SMALL_ALPHA = member(partial(_example3_small_alpha))
    EXAMPLE3_SQUEEZED_LARGE_ALPHA = member(partial(_example3_large_alpha))
    EXAMPLE4_CAT = member(partial(_example4_cat))
    APPENDIXF_DAMPING = member(partial(_appendix_f_damping))
    KL_REPETITION3 = member(partial(_kl_repetition3))


def scenario_names() -> list[str]:
    return [member.value().name for member in Scenario]


def get_scenario(name: str) -> ScenarioConfig:
    """
    Config of a built-in scenario, matched case-insensitively

    :raises ConfigError: for an unknown name
    """
    try:
        return Scenario[name.upper()].value()
    except KeyError:
        raise ConfigError(
            f"Unknown scenario [{name}], expected one of {scenario_names()}"
        ) from None

