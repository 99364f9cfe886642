# metrics.py
"""
File: metrics.py
Function:
    Fidelity observables evaluated on joint register (x) relay states, the windowed
    finite-horizon fidelity F*_tau, and ensemble statistics over trajectory records.

Functions Contained:
    - MetricSpec: Metric kind, logical state and window widths of one experiment.
    - fidelity_strict: Overlap with the initial register codeword, relays traced out.
    - fidelity_subsystem: Weight in the logical-state projector (identity on gauge).
    - build_probes: Callable fidelity probes for the trajectory engine.
    - f_star: Forward sliding-window maximum.
    - ensemble_average: Pointwise mean and standard error; F* is taken per trajectory first.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from codes import LOGICAL_STATES, PauliProjector, StabilizerCode, logical_projector
from kernels import StateVector

logger = logging.getLogger(__name__)

METRIC_KINDS = ("strict", "subsystem")


@dataclass(frozen=True)
class MetricSpec:
    kind: str = "strict"
    logical_state: str = "zero"
    tau_list: tuple = ()

    def __post_init__(self):
        if self.kind not in METRIC_KINDS:
            raise ValueError(f"Unknown metric '{self.kind}'. Use one of {METRIC_KINDS}.")
        if self.logical_state not in LOGICAL_STATES:
            raise ValueError(f"Unknown logical state '{self.logical_state}'.")
        if any(tau < 0 for tau in self.tau_list):
            raise ValueError(f"Window widths must be non-negative, got {self.tau_list}.")

    def check_horizon(self, T: float) -> None:
        too_long = [tau for tau in self.tau_list if tau > T]
        if too_long:
            raise ValueError(f"Window widths {too_long} exceed the horizon T={T}.")

    @classmethod
    def resolve(cls, kind: str, code: StabilizerCode, logical_state: str = "zero", tau_list=()) -> "MetricSpec":
        """Spec with "auto" resolved against `code`."""
        return cls(resolve_metric_kind(kind, code), logical_state, tuple(tau_list))


def resolve_metric_kind(kind: str, code: StabilizerCode) -> str:
    """"auto" reports subsystem fidelity for gauge codes and strict fidelity otherwise."""
    if kind == "auto":
        return "subsystem" if code.is_subsystem else "strict"
    if kind not in METRIC_KINDS:
        raise ValueError(f"Unknown metric '{kind}'. Use 'strict', 'subsystem' or 'auto'.")
    return kind


@dataclass(frozen=True)
class TrajectoryRecord:
    """One stochastic realization: samples per metric on the uniform grid plus its jump log."""

    time_grid: np.ndarray
    fidelity_samples: dict
    jumps: tuple = ()  # ((time, lindblad number), ...)
    seed: int = 0
    index: int = 0


@dataclass(frozen=True)
class EnsembleResult:
    label: str
    time_grid: np.ndarray
    mean: np.ndarray
    std_error: np.ndarray
    n_trajectories: Optional[int] = None
    seed: Optional[int] = None


# --- Fidelities ---


def _register_matrix(psi, n_register: int) -> np.ndarray:
    amplitudes = psi.amplitudes if isinstance(psi, StateVector) else np.asarray(psi)
    rows = 2 ** n_register
    if amplitudes.ndim != 1 or amplitudes.shape[0] % rows:
        raise ValueError(f"State of shape {amplitudes.shape} does not hold {n_register} register qubits.")
    return amplitudes.reshape(rows, -1)


def register_factor(psi0: StateVector) -> np.ndarray:
    """Normalized register factor of a product state register (x) relays."""
    matrix = psi0.register_matrix()
    column = matrix[:, int(np.argmax(np.linalg.norm(matrix, axis=0)))]
    return column / np.linalg.norm(column)


@dataclass(frozen=True)
class FidelityProbe:
    """Fidelity evaluated directly on raw amplitude vectors of a normalized state."""

    name: str
    n_register: int
    reference: Optional[np.ndarray] = None
    projector: Optional[PauliProjector] = field(default=None)

    def __call__(self, amplitudes: np.ndarray) -> float:
        matrix = _register_matrix(amplitudes, self.n_register)
        if self.projector is not None:
            projected = self.projector.apply(matrix)
            return float(np.vdot(projected, projected).real)
        overlaps = self.reference.conj() @ matrix
        return float(np.vdot(overlaps, overlaps).real)


def strict_probe(psi0: StateVector) -> FidelityProbe:
    return FidelityProbe("strict", psi0.n_register, reference=register_factor(psi0))


def subsystem_probe(code: StabilizerCode, logical_state: str) -> FidelityProbe:
    return FidelityProbe("subsystem", code.n_qubits, projector=logical_projector(code, logical_state))


def build_probes(kinds: Sequence[str], code: StabilizerCode, logical_state: str, psi0: StateVector) -> list:
    probes = []
    for kind in kinds:
        if kind == "strict":
            probes.append(strict_probe(psi0))
        elif kind == "subsystem":
            probes.append(subsystem_probe(code, logical_state))
        else:
            raise ValueError(f"Unknown metric '{kind}'.")
    return probes


def fidelity_strict(psi: StateVector, psi0: StateVector) -> float:
    """<psi| (|r><r| (x) I_relays) |psi> with r the register factor of psi0."""
    if psi.dimension != psi0.dimension or psi.n_register != psi0.n_register:
        raise ValueError(f"Dimension mismatch: {psi.dimension} vs {psi0.dimension}.")
    return strict_probe(psi0)(psi.amplitudes)


def fidelity_subsystem(psi: StateVector, code: StabilizerCode, logical_state: str) -> float:
    """<psi| (P_logical (x) I_relays) |psi>."""
    if psi.n_register != code.n_qubits:
        raise ValueError(f"State holds {psi.n_register} register qubits; {code.name} has {code.n_qubits}.")
    return subsystem_probe(code, logical_state)(psi.amplitudes)


# --- Windowed fidelity ---


def window_samples(tau: float, dt: float) -> int:
    """Number of grid steps inside a window of width tau."""
    if tau < 0:
        raise ValueError(f"Window width must be non-negative, got {tau}.")
    return int(np.floor(tau / dt + 1e-9))


def f_star(trace: np.ndarray, tau: float, dt: float) -> np.ndarray:
    """
    Purpose: F*[i] = max(trace[i : i + w + 1]) with w = floor(tau / dt), i.e. the maximum over
             [t_i, t_i + tau]. Only windows that fit inside the horizon are returned.
    Inputs:
        - trace (np.ndarray): Samples on a uniform grid; 2-D input is treated as one trace per row.
        - tau (float): Window width in time units.
        - dt (float): Grid step.
    Outputs: Array with n - w samples along the time axis.
    """
    values = np.asarray(trace, dtype=float)
    n = values.shape[-1]
    horizon = (n - 1) * dt
    if tau > horizon + 1e-12:
        raise ValueError(f"Window width {tau} exceeds the horizon {horizon:g}.")
    w = window_samples(tau, dt)

    frame = pd.DataFrame(np.atleast_2d(values).T)
    windowed = frame.rolling(window=w + 1).max().shift(-w).iloc[: n - w].to_numpy().T
    return windowed if values.ndim > 1 else windowed[0]


# --- Ensembles ---


def fstar_label(metric: str, tau: float) -> str:
    return f"{metric}_Fstar_{tau:g}"


def ensemble_average(records: Sequence[TrajectoryRecord], metric: str, tau: Optional[float] = None) -> EnsembleResult:
    """
    Purpose: Pointwise mean and standard error (sample stdev / sqrt(n)) of one metric. With
             `tau`, F*_tau is computed per trajectory before averaging.
    """
    if not records:
        raise ValueError("No trajectory records to average.")
    grid = records[0].time_grid
    for record in records[1:]:
        if record.time_grid.shape != grid.shape or not np.array_equal(record.time_grid, grid):
            raise ValueError(f"Trajectory {record.index} uses a different time grid.")
    stack = np.vstack([record.fidelity_samples[metric] for record in records])

    label = metric
    if tau is not None:
        dt = float(grid[1] - grid[0]) if len(grid) > 1 else 1.0
        stack = np.atleast_2d(f_star(stack, tau, dt))
        grid = grid[: stack.shape[1]]
        label = fstar_label(metric, tau)

    n = stack.shape[0]
    mean = stack.mean(axis=0)
    std_error = stack.std(axis=0, ddof=1) / np.sqrt(n) if n > 1 else np.zeros_like(mean)
    return EnsembleResult(label, grid.copy(), mean, std_error, n, records[0].seed)
