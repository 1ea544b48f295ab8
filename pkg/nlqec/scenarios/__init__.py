from .loader import dump_config, load_config, parse_config, with_override
from .registry import Scenario, get_scenario, scenario_names
from .runner import ScenarioRunner, alpha_reach, build_space
from .sweep import SWEEP_COLUMNS, run_point, run_sweep, sweep_points, write_sweep

__all__ = [
    "SWEEP_COLUMNS",
    "Scenario",
    "ScenarioRunner",
    "alpha_reach",
    "build_space",
    "dump_config",
    "get_scenario",
    "load_config",
    "parse_config",
    "run_point",
    "run_sweep",
    "scenario_names",
    "sweep_points",
    "with_override",
    "write_sweep",
]
