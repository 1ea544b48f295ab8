__version__ = "0.1.0"

from .antypes import ScenarioConfig, Verdict  # noqa: E402
from .scenarios import Scenario, ScenarioRunner, get_scenario  # noqa: E402

__all__ = [
    "Scenario",
    "ScenarioConfig",
    "ScenarioRunner",
    "Verdict",
    "__version__",
    "get_scenario",
]
