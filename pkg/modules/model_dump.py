# modules/model_dump.py
from typing import Optional

from builder import MemoryModel, assemble_model, render_model, resolve_routes
from codes import catalog_get
from config import ExperimentConfig


def model_for_config(config: ExperimentConfig, theta: float, routes=None) -> MemoryModel:
    """Assembles the model of one loss value (radians); `routes` reuses already resolved orders."""
    code = catalog_get(config.code)
    return assemble_model(
        code,
        Omega=config.omega,
        alpha=config.alpha,
        theta=theta,
        Gamma=config.gamma,
        noise_kind=config.noise_kind,
        routes=routes if routes is not None else resolve_routes(code, config.route_spec),
        relay_dephasing=config.relay_dephasing,
    )


def show_page(config: ExperimentConfig, theta: Optional[float] = None) -> str:
    """Dump of the model at `theta` (radians); defaults to the first configured loss value."""
    value = config.thetas_rad[0] if theta is None else theta
    return render_model(model_for_config(config, value))
