# modules/fstar_recompute.py
import logging
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from metrics import EnsembleResult, MetricSpec, f_star
from results_loader import read_trajectories_csv, write_ensemble_csv

logger = logging.getLogger(__name__)


def _summary(label: str, grid: np.ndarray, traces: np.ndarray) -> EnsembleResult:
    n = traces.shape[0]
    mean = traces.mean(axis=0)
    std_error = traces.std(axis=0, ddof=1) / np.sqrt(n) if n > 1 else np.zeros_like(mean)
    return EnsembleResult(label, grid[: traces.shape[1]], mean, std_error, n)


def recompute(trajectory_csv: Path, taus: Sequence[float], out: Optional[Path] = None) -> Path:
    """
    Purpose: Rebuilds an ensemble summary (F and F*_tau for each tau) from saved per-trajectory
             traces, windowing every trajectory before averaging.
    Outputs: Path of the written summary CSV.
    """
    trajectory_csv = Path(trajectory_csv)
    grid, traces = read_trajectories_csv(trajectory_csv)
    dt = float(grid[1] - grid[0]) if len(grid) > 1 else 1.0
    spec = MetricSpec(tau_list=tuple(float(tau) for tau in taus))
    spec.check_horizon(float(grid[-1] - grid[0]))

    fidelity = _summary("F", grid, traces)
    fstar = {tau: _summary(f"Fstar_{tau:g}", grid, np.atleast_2d(f_star(traces, tau, dt))) for tau in spec.tau_list}

    if out is None:
        out = trajectory_csv.with_name(trajectory_csv.stem.replace("_trajectories", "") + "_fstar.csv")
    logger.info("Recomputed F* for %d trajectories and %d windows.", traces.shape[0], len(fstar))
    return write_ensemble_csv(out, fidelity, fstar)
