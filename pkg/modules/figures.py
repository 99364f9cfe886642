# modules/figures.py
"""
Static figures: fidelity decay per loss value, F*_tau per window width, and single
trajectory traces. Rendered with plotly express; SVG export needs kaleido and falls back to
a standalone HTML file when it is unavailable.
"""

import logging
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np
import pandas as pd
import plotly.express as px

from metrics import EnsembleResult

logger = logging.getLogger(__name__)


def _style(fig, title: str):
    fig.update_layout(
        title={"text": title, "x": 0.5, "xanchor": "center"},
        xaxis_title="t",
        hovermode="x unified",
        template="simple_white",
    )
    return fig


def fidelity_decay_figure(results: Mapping[str, EnsembleResult], title: str):
    """One mean-fidelity curve per loss value with standard-error bars."""
    frames = []
    for label, result in results.items():
        frames.append(pd.DataFrame({
            "t": result.time_grid,
            "F": result.mean,
            "se": result.std_error,
            "theta": label,
        }))
    df = pd.concat(frames, ignore_index=True)
    fig = px.line(df, x="t", y="F", color="theta", error_y="se")
    fig.update_traces(hovertemplate="<b>t:</b> %{x}<br><b>F:</b> %{y:.4f}")
    fig.update_yaxes(title="mean fidelity")
    return _style(fig, title)


def fstar_figure(fidelity: EnsembleResult, fstar: Mapping[float, EnsembleResult], title: str):
    frames = [pd.DataFrame({"t": fidelity.time_grid, "value": fidelity.mean, "curve": "F"})]
    for tau, result in sorted(fstar.items()):
        frames.append(pd.DataFrame({"t": result.time_grid, "value": result.mean, "curve": f"F*, tau={tau:g}"}))
    df = pd.concat(frames, ignore_index=True)
    fig = px.line(df, x="t", y="value", color="curve")
    fig.update_yaxes(title="mean fidelity")
    return _style(fig, title)


def trajectory_figure(time_grid: np.ndarray, traces: np.ndarray, title: str, limit: int = 4):
    """Single-shot fidelity traces for the first `limit` trajectories."""
    frames = [
        pd.DataFrame({"t": time_grid, "F": trace, "trajectory": f"traj_{i}"})
        for i, trace in enumerate(np.atleast_2d(traces)[:limit])
    ]
    fig = px.line(pd.concat(frames, ignore_index=True), x="t", y="F", color="trajectory")
    fig.update_yaxes(title="fidelity", range=[0, 1.02])
    return _style(fig, title)


def save_figure(fig, path_stem: Path) -> Path:
    """Writes <stem>.svg, or <stem>.html when static export is not available."""
    path_stem = Path(path_stem)
    path_stem.parent.mkdir(parents=True, exist_ok=True)
    svg = path_stem.with_suffix(".svg")
    try:
        fig.write_image(str(svg))
        logger.info("Saved figure %s.", svg)
        return svg
    except (ValueError, ImportError, RuntimeError) as exc:
        html = path_stem.with_suffix(".html")
        logger.warning("Static export failed (%s); writing %s instead.", exc, html)
        fig.write_html(str(html), include_plotlyjs="cdn")
        return html


def save_all(figures: Sequence[tuple]) -> list:
    return [save_figure(fig, stem) for fig, stem in figures]
