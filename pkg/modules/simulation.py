# modules/simulation.py
"""
Experiment runner behind `simulate`: for every configured loss value it builds the model,
runs the trajectory ensemble, writes the summary CSV (and optionally the raw traces), and
finally renders the figures.
"""

import logging
from pathlib import Path
from typing import Optional

from builder import resolve_routes
from codes import catalog_get
from config import ExperimentConfig, render_config
from dynamics import IntegrationError, JumpError, encode_initial_state, run_trajectories
from metrics import MetricSpec, build_probes, ensemble_average
from modules import figures
from modules.model_dump import model_for_config
from results_loader import format_tau, write_ensemble_csv, write_trajectories_csv

logger = logging.getLogger(__name__)


class SimulationError(RuntimeError):
    """A numerical failure, tagged with the loss value that caused it."""


def run_experiment(
    config: ExperimentConfig,
    workers: int = 1,
    output_dir: Optional[Path] = None,
    progress: bool = False,
) -> list:
    """
    Purpose: Runs the full experiment described by `config`.
    Inputs:
        - workers (int): joblib worker count; results do not depend on it.
        - output_dir (Path): Overrides OUTPUT_DIR.
    Outputs: List of written file paths (CSVs, config copy, figures).
    """
    out = Path(output_dir if output_dir is not None else config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    code = catalog_get(config.code)
    spec = MetricSpec.resolve(config.metric, code, config.logical_state, config.tau_list)
    spec.check_horizon(config.t_final)
    metric = spec.kind
    routes = resolve_routes(code, config.route_spec)
    psi0 = encode_initial_state(code, config.logical_state)
    probes = build_probes([metric], code, spec.logical_state, psi0)

    written = []
    config_copy = out / f"{code.name}_config.env"
    config_copy.write_text(render_config(config))
    written.append(config_copy)

    decay_curves, fstar_panels, trajectory_panels = {}, [], []
    for k, (theta_label, theta) in enumerate(zip(config.theta_list, config.thetas_rad)):

        # --- 1. Build the model ---
        model = model_for_config(config, theta, routes)
        logger.info(
            "Starting ensemble for theta=%g %s (n=%d, metric=%s).",
            theta_label, config.theta_unit, config.n_trajectories, metric,
        )

        # --- 2. Run the trajectories ---
        try:
            records = run_trajectories(
                model, psi0, config.t_final, config.dt, config.sample_dt,
                config.n_trajectories, config.seed, probes, workers=workers, progress=progress,
            )
        except (IntegrationError, JumpError) as exc:
            raise SimulationError(f"theta={theta_label:g} {config.theta_unit}: {exc}") from exc

        # --- 3. Summaries and persistence ---
        fidelity = ensemble_average(records, metric)
        fstar = {tau: ensemble_average(records, metric, tau) for tau in spec.tau_list}
        written.append(write_ensemble_csv(out / f"{code.name}_theta_{k}.csv", fidelity, fstar))
        if config.save_trajectories:
            path = out / f"{code.name}_theta_{k}_trajectories.csv"
            written.append(write_trajectories_csv(path, records, metric))
            trajectory_panels.append((k, theta_label, records))

        decay_curves[f"{theta_label:g} {config.theta_unit}"] = fidelity
        if fstar:
            fstar_panels.append((k, theta_label, fidelity, fstar))

    # --- 4. Figures ---
    if config.plot:
        stem = out / code.name
        plots = [(figures.fidelity_decay_figure(decay_curves, f"{code.name}: {metric} fidelity"), Path(f"{stem}_decay"))]
        for k, theta_label, fidelity, fstar in fstar_panels:
            taus = ", ".join(format_tau(tau) for tau in fstar)
            title = f"{code.name}, theta={theta_label:g} {config.theta_unit}: F* for tau in {{{taus}}}"
            plots.append((figures.fstar_figure(fidelity, fstar, title), Path(f"{stem}_theta_{k}_fstar")))
        for k, theta_label, records in trajectory_panels:
            traces = [record.fidelity_samples[metric] for record in records]
            title = f"{code.name}, theta={theta_label:g} {config.theta_unit}: single trajectories"
            plots.append((figures.trajectory_figure(records[0].time_grid, traces, title), Path(f"{stem}_theta_{k}_traces")))
        written.extend(figures.save_all(plots))

    logger.info("Experiment for %s complete: %d files in %s.", code.name, len(written), out)
    return written
