# results_loader.py
"""
File: results_loader.py
Function:
    CSV persistence of simulation results: ensemble summaries (one file per loss value) and
    raw per-trajectory fidelity traces. Files are written with full-precision floats and read
    back with pandas' round-trip float parser, so a re-read reproduces the in-memory arrays
    exactly.

Functions Contained:
    - write_ensemble_csv / read_ensemble_csv: "t,F_mean,F_se,Fstar_<tau>_mean,Fstar_<tau>_se,..."
    - write_trajectories_csv / read_trajectories_csv: "t,traj_0,traj_1,..."
"""

import logging
import re
from pathlib import Path
from typing import Mapping, Optional, Sequence, Union

import numpy as np
import pandas as pd

from metrics import EnsembleResult, TrajectoryRecord

logger = logging.getLogger(__name__)

_FSTAR_COLUMN = re.compile(r"^Fstar_(.+)_mean$")


def format_tau(tau: float) -> str:
    return f"{tau:g}"


def _padded(values: np.ndarray, length: int) -> np.ndarray:
    out = np.full(length, np.nan)
    out[: len(values)] = values
    return out


def write_ensemble_csv(
    path: Union[str, Path],
    fidelity: EnsembleResult,
    fstar: Optional[Mapping[float, EnsembleResult]] = None,
) -> Path:
    """
    Purpose: Writes one ensemble summary. F* columns are shorter than the grid (the trailing
             window is undefined); their missing tail is written as empty fields.
    Outputs: The written path.
    """
    path = Path(path)
    n = len(fidelity.time_grid)
    frame = pd.DataFrame({"t": fidelity.time_grid, "F_mean": fidelity.mean, "F_se": fidelity.std_error})
    for tau, result in (fstar or {}).items():
        label = format_tau(tau)
        frame[f"Fstar_{label}_mean"] = _padded(result.mean, n)
        frame[f"Fstar_{label}_se"] = _padded(result.std_error, n)

    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, na_rep="", lineterminator="\n")
    logger.info("Successfully wrote %d rows to %s.", len(frame), path)
    return path


def read_ensemble_csv(
    path: Union[str, Path],
    n_trajectories: Optional[int] = None,
    seed: Optional[int] = None,
) -> tuple:
    """
    Purpose: Re-reads an ensemble summary.
    Outputs: (EnsembleResult for F, {tau: EnsembleResult for F*_tau}).
    """
    frame = pd.read_csv(path, float_precision="round_trip")
    missing = [c for c in ("t", "F_mean", "F_se") if c not in frame.columns]
    if missing:
        raise ValueError(f"{path} is missing columns {missing}.")
    grid = frame["t"].to_numpy(dtype=float)
    fidelity = EnsembleResult(
        "F", grid, frame["F_mean"].to_numpy(dtype=float), frame["F_se"].to_numpy(dtype=float),
        n_trajectories, seed,
    )
    fstar = {}
    for column in frame.columns:
        match = _FSTAR_COLUMN.match(column)
        if match is None:
            continue
        label = match.group(1)
        mean = frame[column].dropna().to_numpy(dtype=float)
        std_error = frame[f"Fstar_{label}_se"].dropna().to_numpy(dtype=float)
        fstar[float(label)] = EnsembleResult(
            f"Fstar_{label}", grid[: len(mean)], mean, std_error, n_trajectories, seed,
        )
    return fidelity, fstar


def write_trajectories_csv(path: Union[str, Path], records: Sequence[TrajectoryRecord], metric: str) -> Path:
    """One column per trajectory, in trajectory-index order."""
    path = Path(path)
    if not records:
        raise ValueError("No trajectory records to write.")
    columns = {"t": records[0].time_grid}
    for record in records:
        columns[f"traj_{record.index}"] = record.fidelity_samples[metric]
    frame = pd.DataFrame(columns)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, lineterminator="\n")
    logger.info("Successfully wrote %d trajectories (%d samples) to %s.", len(records), len(frame), path)
    return path


def read_trajectories_csv(path: Union[str, Path]) -> tuple:
    """Outputs: (time grid, traces as an (n_trajectories, n_samples) array)."""
    frame = pd.read_csv(path, float_precision="round_trip")
    if "t" not in frame.columns:
        raise ValueError(f"{path} has no 't' column.")
    traces = [c for c in frame.columns if c.startswith("traj_")]
    if not traces:
        raise ValueError(f"{path} has no trajectory columns.")
    return frame["t"].to_numpy(dtype=float), frame[traces].to_numpy(dtype=float).T
