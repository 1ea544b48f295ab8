"""Parameter sweeps over one or two dotted config paths."""

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Any, TextIO

import numpy as np
import pandas as pd
from tqdm import tqdm

from nlqec.antypes import Report, ScenarioConfig
from nlqec.core import settings
from nlqec.core.errors import ConfigError, NLQECError
from nlqec.core.logs import get_logger

from .loader import with_override
from .runner import ScenarioRunner

SWEEP_COLUMNS = [
    "residual_rel",
    "min_fidelity",
    "mean_fidelity",
    "min_branch_fidelity",
    "mean_branch_fidelity",
    "probability_defect",
    "exit_code",
]

logger = get_logger("nlqec.scenarios")


def sweep_points(config: ScenarioConfig) -> list[tuple[Any, ...]]:
    """
    Axis values of every sweep point in lexicographic order

    :raises ConfigError: when the config has no sweep axes
    """
    if config.sweep is None or not config.sweep.axes:
        raise ConfigError("Sweep needs one or two axes")
    return list(itertools.product(*(axis.values for axis in config.sweep.axes)))


def _row(report: Report) -> dict[str, float]:
    row = dict.fromkeys(SWEEP_COLUMNS, math.nan)
    row["exit_code"] = report.exit_code
    if report.criterion is not None:
        row["residual_rel"] = report.criterion.residual_rel
    if report.recovery is not None:
        fidelity = np.asarray(report.recovery.fidelity, dtype=float)
        branch = np.asarray(report.recovery.branch_fidelity, dtype=float)
        probability = np.asarray(report.recovery.probability, dtype=float)
        row["min_fidelity"] = float(np.min(fidelity))
        row["mean_fidelity"] = float(np.mean(fidelity))
        row["min_branch_fidelity"] = float(np.nanmin(branch))
        row["mean_branch_fidelity"] = float(np.nanmean(branch))
        row["probability_defect"] = float(np.max(np.abs(1.0 - probability)))
    return row


def _label(value: Any) -> Any:
    if isinstance(value, dict | list):
        return str(value)
    return value


def run_point(
    config: ScenarioConfig, point: tuple[Any, ...], seed: int | None = None
) -> dict[str, Any]:
    """One sweep row; numerical and config failures become the row's exit code."""
    row = {axis.path: _label(value) for axis, value in zip(config.sweep.axes, point)}
    try:
        for axis, value in zip(config.sweep.axes, point):
            config = with_override(config, axis.path, value)
        config = config.model_copy(update={"sweep": None})
        row.update(_row(ScenarioRunner(config, seed).recover()))
    except NLQECError as exc:
        logger.warning(f"Sweep point failed {point}: {exc}")
        row.update(dict.fromkeys(SWEEP_COLUMNS, math.nan))
        row["exit_code"] = exc.exit_code
    return row


def run_sweep(
    config: ScenarioConfig, jobs: int | None = None, seed: int | None = None
) -> pd.DataFrame:
    """
    Run every sweep point and collect one row per point

    :param config: scenario config with a ``sweep`` section
    :type config: ScenarioConfig
    :param jobs: worker threads, defaults to ``NLQEC_JOBS``
    :type jobs: int | None, optional
    :param seed: seed override of every point, defaults to None
    :type seed: int | None, optional
    :raises ConfigError: when the config has no sweep axes
    :return: table with one column per axis and the sweep metrics
    :rtype: pd.DataFrame
    """
    points = sweep_points(config)
    jobs = max(1, jobs or settings.NLQEC_JOBS)
    logger.info(
        f"Running sweep [{config.name}] [points = {len(points)}] [jobs = {jobs}]"
    )
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        rows = list(
            tqdm(
                pool.map(lambda point: run_point(config, point, seed), points),
                total=len(points),
                desc=config.name,
            )
        )
    columns = [axis.path for axis in config.sweep.axes] + SWEEP_COLUMNS
    return pd.DataFrame(rows, columns=columns)


def write_sweep(table: pd.DataFrame, out: str | TextIO) -> None:
    """CSV with LF line endings and round-trippable floats."""
    table.to_csv(out, index=False, float_format="%.15g", lineterminator="\n")
