# dynamics.py
"""
File: dynamics.py
Function:
    Time evolution of assembled memory models.
    1. Quantum-jump trajectories: matrix-free RK4 drift under the effective Hamiltonian
       H_eff = H - (i/2) sum L^dagger L, with jumps triggered when the squared norm of the
       unnormalized state falls below a pre-drawn uniform threshold.
    2. Ensembles of trajectories fanned out over a joblib worker pool with one counter-based
       random stream per trajectory index.
    3. A dense RK4 integrator of the master equation, used as an exactness oracle for small models.

Functions Contained:
    - compile_model / default_dt: Compiled operators and the automatic step.
    - encode_initial_state: Logical codeword (x) all relays in h.
    - drift_step: One RK4 step of the no-jump evolution.
    - run_trajectory / run_trajectories / run_ensemble
    - integrate_master_equation
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
from joblib import Parallel, delayed
from tqdm import tqdm

from builder import MemoryModel
from codes import StabilizerCode, logical_projector
from kernels import CompiledOperator, StateVector
from metrics import EnsembleResult, TrajectoryRecord, ensemble_average

logger = logging.getLogger(__name__)

MAX_DENSE_QUBITS = 10
RATE_STEP_FACTOR = 0.05
DRIFT_STEP_FACTOR = 0.1
TRACE_TOLERANCE = 1e-8
DEFAULT_CHUNK_SIZE = 16


class IntegrationError(RuntimeError):
    """Non-finite amplitudes or trace drift; the step is too large for the model."""


class JumpError(RuntimeError):
    """A jump was triggered but every channel has zero weight."""


@dataclass(frozen=True)
class CompiledModel:
    """Model operators in flip/weight form, shared read-only by every trajectory."""

    n_register: int
    n_relays: int
    hamiltonian: CompiledOperator
    jumps: tuple  # ((lindblad number, CompiledOperator), ...), zero operators left out
    decay: CompiledOperator  # sum L^dagger L
    drift: CompiledOperator  # -i (H_eff - shift)
    shift: complex
    rate_bound: float
    drift_bound: float

    @property
    def dimension(self) -> int:
        return 2 ** (self.n_register + self.n_relays)


def compile_model(model: MemoryModel) -> CompiledModel:
    """
    Purpose: Compiles H, every L_i and H_eff. The scalar part c of H_eff (centre of the range of
             its diagonal) is split off: exp(-i H_eff t) = exp(-i c t) exp(-i (H_eff - c) t), and
             only the remainder goes through RK4.
    """
    q, n = model.n_register, model.n_relays
    hamiltonian = CompiledOperator.from_model_operator(model.hamiltonian, q, n)

    jumps = []
    decay = CompiledOperator(model.dimension)
    for number, operator in enumerate(model.lindblads, start=1):
        compiled = CompiledOperator.from_model_operator(operator, q, n)
        if compiled.is_zero:
            continue
        jumps.append((number, compiled))
        decay = decay + compiled.adjoint().compose(compiled)

    effective = hamiltonian + decay.scaled(-0.5j)
    diagonal = effective.diagonal()
    shift = complex(
        0.5 * (diagonal.real.min() + diagonal.real.max()),
        0.5 * (diagonal.imag.min() + diagonal.imag.max()),
    )
    remainder = effective.shifted(shift)

    compiled_model = CompiledModel(
        n_register=q,
        n_relays=n,
        hamiltonian=hamiltonian,
        jumps=tuple(jumps),
        decay=decay,
        drift=remainder.scaled(-1j),
        shift=shift,
        rate_bound=decay.inf_norm(),
        drift_bound=remainder.inf_norm(),
    )
    logger.debug(
        "Compiled %s: %d jump channels, rate bound %.4g, drift bound %.4g.",
        model.code.name, len(jumps), compiled_model.rate_bound, compiled_model.drift_bound,
    )
    return compiled_model


def default_dt(compiled: CompiledModel, sample_dt: Optional[float] = None) -> float:
    """min(0.05 / jump-rate bound, 0.1 / drift bound), capped at sample_dt."""
    candidates = []
    if compiled.rate_bound > 0:
        candidates.append(RATE_STEP_FACTOR / compiled.rate_bound)
    if compiled.drift_bound > 0:
        candidates.append(DRIFT_STEP_FACTOR / compiled.drift_bound)
    if sample_dt is not None:
        candidates.append(sample_dt)
    if not candidates:
        raise ValueError("The model has no dynamics and no sample_dt was given.")
    return min(candidates)


def time_grid(T: float, sample_dt: float, dt: float) -> tuple:
    """
    Purpose: Uniform sample grid 0..T and the RK4 subdivision of each sample interval.
    Outputs: (grid, substeps per sample, step length).
    """
    if T <= 0 or sample_dt <= 0 or dt <= 0:
        raise ValueError(f"T, sample_dt and dt must be positive (got {T}, {sample_dt}, {dt}).")
    if dt > sample_dt * (1 + 1e-12):
        raise ValueError(f"dt={dt} must not exceed sample_dt={sample_dt}.")
    n_samples = int(round(T / sample_dt))
    if n_samples < 1 or abs(n_samples * sample_dt - T) > 1e-9 * max(T, 1.0):
        raise ValueError(f"T={T} must be a whole multiple of sample_dt={sample_dt}.")
    substeps = max(1, math.ceil(sample_dt / dt - 1e-9))
    grid = np.round(np.arange(n_samples + 1) * sample_dt, 12)
    return grid, substeps, sample_dt / substeps


def trajectory_rng(seed: int, index: int) -> np.random.Generator:
    """Counter-based stream for trajectory `index` of master seed `seed`."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(index,))))


# --- Initial state ---


def encode_initial_state(code: StabilizerCode, logical: str = "zero") -> StateVector:
    """
    Purpose: Projects the fiducial basis state |0...0> (or the next basis state the projector
             does not annihilate) onto the requested logical state, and pairs it with every
             relay in h.
    """
    projector = logical_projector(code, logical)
    dim = 2 ** code.n_qubits
    register = None
    for k in range(dim):
        seed_state = np.zeros(dim, dtype=complex)
        seed_state[k] = 1.0
        image = projector.apply(seed_state)
        norm = np.linalg.norm(image)
        if norm > 1e-9:
            register = image / norm
            if k:
                logger.debug("Basis state %d annihilated; seeded %s/%s from state %d.", k - 1, code.name, logical, k)
            break
    if register is None:
        raise ValueError(f"The {logical} projector of {code.name} is zero.")

    relays = np.zeros(2 ** code.n_stabilizers, dtype=complex)
    relays[-1] = 1.0  # all relays h
    return StateVector(np.kron(register, relays), code.n_qubits, code.n_stabilizers)


# --- Trajectories ---


def _rk4_step(drift: CompiledOperator, psi: np.ndarray, h: float) -> np.ndarray:
    k1 = drift.apply(psi)
    k2 = drift.apply(psi + 0.5 * h * k1)
    k3 = drift.apply(psi + 0.5 * h * k2)
    k4 = drift.apply(psi + h * k3)
    return psi + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def drift_step(compiled: CompiledModel, psi: np.ndarray, h: float) -> np.ndarray:
    """One no-jump step of length h with the scalar decay restored."""
    return np.exp(-1j * compiled.shift * h) * _rk4_step(compiled.drift, psi, h)


def _jump(compiled: CompiledModel, psi: np.ndarray, rng: np.random.Generator) -> tuple:
    candidates = [op.apply(psi) for _, op in compiled.jumps]
    weights = np.array([np.vdot(c, c).real for c in candidates])
    total = weights.sum()
    if not np.isfinite(total) or total <= 0:
        raise JumpError("Jump triggered but every channel has zero weight.")
    choice = int(np.searchsorted(np.cumsum(weights), rng.random() * total, side="right"))
    choice = min(choice, len(weights) - 1)
    new_state = candidates[choice] / math.sqrt(weights[choice])
    return new_state, compiled.jumps[choice][0]


def _sample(metrics, psi: np.ndarray, samples: dict, i: int) -> None:
    normalized = psi / np.linalg.norm(psi)
    for probe in metrics:
        samples[probe.name][i] = probe(normalized)


def run_trajectory(
    model: Union[MemoryModel, CompiledModel],
    psi0: StateVector,
    T: float,
    dt: Optional[float],
    sample_dt: float,
    seed: int,
    metrics: Sequence = (),
    index: int = 0,
) -> TrajectoryRecord:
    """
    Purpose: One waiting-time quantum-jump trajectory.
    Inputs:
        - model: MemoryModel, or a CompiledModel shared across calls.
        - dt: RK4 step upper bound; None selects default_dt.
        - seed / index: The random stream is trajectory_rng(seed, index).
        - metrics: FidelityProbe callables sampled on the normalized state.
    Outputs: TrajectoryRecord with one sample vector per probe and the jump log.
    """
    compiled = model if isinstance(model, CompiledModel) else compile_model(model)
    if psi0.dimension != compiled.dimension:
        raise ValueError(f"Initial state dimension {psi0.dimension} != model dimension {compiled.dimension}.")
    step_bound = dt if dt is not None else default_dt(compiled, sample_dt)
    grid, substeps, h = time_grid(T, sample_dt, step_bound)

    rng = trajectory_rng(seed, index)
    psi = np.array(psi0.amplitudes, dtype=complex)
    threshold = rng.random()
    samples = {probe.name: np.empty(len(grid)) for probe in metrics}
    jumps = []

    _sample(metrics, psi, samples, 0)
    for i in range(1, len(grid)):
        start = grid[i - 1]
        for k in range(substeps):
            psi = drift_step(compiled, psi, h)
            if not np.all(np.isfinite(psi)):
                raise IntegrationError(
                    f"Non-finite amplitudes at t={start + (k + 1) * h:.6g} (trajectory {index}); reduce dt."
                )
            if np.vdot(psi, psi).real <= threshold:
                psi, channel = _jump(compiled, psi, rng)
                jumps.append((start + (k + 1) * h, channel))
                threshold = rng.random()
        _sample(metrics, psi, samples, i)

    return TrajectoryRecord(grid, samples, tuple(jumps), seed, index)


def _run_chunk(compiled, psi0, T, dt, sample_dt, seed, metrics, indices) -> list:
    return [run_trajectory(compiled, psi0, T, dt, sample_dt, seed, metrics, index) for index in indices]


def run_trajectories(
    model: Union[MemoryModel, CompiledModel],
    psi0: StateVector,
    T: float,
    dt: Optional[float],
    sample_dt: float,
    n: int,
    seed: int,
    metrics: Sequence = (),
    workers: int = 1,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    progress: bool = False,
) -> list:
    """
    Purpose: n independent trajectories. Chunks of consecutive indices are handed to the worker
             pool; chunk boundaries do not depend on the worker count, and results come back in
             trajectory-index order.
    """
    if n < 1:
        raise ValueError(f"Need at least one trajectory, got {n}.")
    compiled = model if isinstance(model, CompiledModel) else compile_model(model)
    chunks = [range(start, min(start + chunk_size, n)) for start in range(0, n, chunk_size)]
    parallel = Parallel(n_jobs=workers)
    outputs = parallel(
        delayed(_run_chunk)(compiled, psi0, T, dt, sample_dt, seed, metrics, chunk)
        for chunk in tqdm(chunks, desc="trajectory chunks", disable=not progress)
    )
    return [record for chunk_records in outputs for record in chunk_records]


def run_ensemble(
    model: Union[MemoryModel, CompiledModel],
    psi0: StateVector,
    T: float,
    dt: Optional[float],
    sample_dt: float,
    n: int,
    seed: int,
    metrics: Sequence = (),
    workers: int = 1,
    progress: bool = False,
) -> dict:
    """Mean and standard error of every probe in `metrics`, keyed by probe name."""
    records = run_trajectories(model, psi0, T, dt, sample_dt, n, seed, metrics, workers, progress=progress)
    return {probe.name: ensemble_average(records, probe.name) for probe in metrics}


# --- Dense oracle ---


@dataclass(frozen=True)
class DensityEvolution:
    time_grid: np.ndarray
    states: np.ndarray  # (len(time_grid), dim, dim)

    def expectation(self, observable: np.ndarray) -> np.ndarray:
        return np.real(np.einsum("ij,tji->t", observable, self.states))


def _lindblad_rhs(H: np.ndarray, rho: np.ndarray, jumps: Sequence[np.ndarray]) -> np.ndarray:
    drho = -1j * (H @ rho - rho @ H)
    for c in jumps:
        cd = c.conj().T
        cdc = cd @ c
        drho += c @ rho @ cd - 0.5 * (cdc @ rho + rho @ cdc)
    return drho


def integrate_master_equation(
    model: MemoryModel,
    rho0: np.ndarray,
    T: float,
    dt: float,
    sample_dt: Optional[float] = None,
) -> DensityEvolution:
    """
    Purpose: Fixed-step RK4 integration of the Lindblad master equation with dense matrices,
             symmetrizing rho after each step.
    Inputs:
        - rho0 (np.ndarray): Initial density matrix of dimension 2^(Q+N) <= 2^10.
        - sample_dt (float): Spacing of the returned states; defaults to dt.
    Outputs: DensityEvolution sampled on the same grid a trajectory with this sample_dt uses.
    """
    total = model.n_register + model.n_relays
    if total > MAX_DENSE_QUBITS:
        raise ValueError(f"Dense integration is limited to 2^{MAX_DENSE_QUBITS}; this model has 2^{total}.")
    if rho0.shape != (model.dimension, model.dimension):
        raise ValueError(f"rho0 has shape {rho0.shape}; expected {(model.dimension, model.dimension)}.")

    compiled = compile_model(model)
    H = compiled.hamiltonian.to_dense()
    jumps = [op.to_dense() for _, op in compiled.jumps]
    grid, substeps, h = time_grid(T, sample_dt if sample_dt is not None else dt, dt)

    rho = np.array(rho0, dtype=complex)
    initial_trace = np.real(np.trace(rho))
    states = np.empty((len(grid),) + rho.shape, dtype=complex)
    states[0] = rho
    for i in range(1, len(grid)):
        for _ in range(substeps):
            k1 = _lindblad_rhs(H, rho, jumps)
            k2 = _lindblad_rhs(H, rho + 0.5 * h * k1, jumps)
            k3 = _lindblad_rhs(H, rho + 0.5 * h * k2, jumps)
            k4 = _lindblad_rhs(H, rho + h * k3, jumps)
            rho = rho + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            rho = 0.5 * (rho + rho.conj().T)
        if not np.all(np.isfinite(rho)):
            raise IntegrationError(f"Non-finite density matrix at t={grid[i]:.6g}; reduce dt.")
        drift = abs(np.real(np.trace(rho)) - initial_trace)
        if drift > TRACE_TOLERANCE:
            raise IntegrationError(f"Trace drifted by {drift:.3g} at t={grid[i]:.6g}; reduce dt.")
        states[i] = rho
    return DensityEvolution(grid, states)
