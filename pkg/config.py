# config.py
"""
File: config.py
Function:
    Experiment configuration. Configs are flat KEY=value files read with python-dotenv,
    overridable per key from the process environment (AQM_<KEY>), and validated into a
    typed pydantic model.

Functions Contained:
    - get_setting: Environment first, then the config file.
    - parse_config / load_config: Text or file to ExperimentConfig.
    - render_config: Canonical file text; parse_config(render_config(c)) == c.
    - parse_routes: ROUTES value to "naive", "optimal" or {stabilizer index: order}.

Function Descriptions:
    - get_setting:
        - Purpose: Resolves one key with the same priority everywhere in the project.
        - Related Elements: os, dotenv.
    - load_config:
        - Purpose: Main entry point used by the CLI and the figure script.
        - Related Elements: dotenv_values, ExperimentConfig.
"""

import io
import math
import os
import re
from pathlib import Path
from typing import Literal, Optional, Union

from dotenv import dotenv_values, load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from codes import catalog_names

# Populates os.environ from a local .env, if any (AQM_* overrides, AQM_LOG_LEVEL).
load_dotenv()

ENV_PREFIX = "AQM_"
THETA_UNITS = {"rad": 1.0, "pi/1000": math.pi / 1000}
_ROUTE_ITEM = re.compile(r"^M(\d+):(\d+(?:-\d+)*)$")

# file key -> field name, where they differ
_KEY_TO_FIELD = {"T": "t_final"}
_FIELD_TO_KEY = {v: k for k, v in _KEY_TO_FIELD.items()}


class ConfigError(ValueError):
    """Invalid experiment configuration."""


def parse_routes(value: str) -> Union[str, dict]:
    """"naive" | "optimal" | "M3:8-7-4-5-2-1;M4:9-8-5-6-3-2" -> {3: (8, 7, 4, 5, 2, 1), 4: (...)}."""
    text = value.strip()
    if text in ("naive", "optimal"):
        return text
    routes = {}
    for item in filter(None, (part.strip() for part in text.split(";"))):
        match = _ROUTE_ITEM.match(item)
        if match is None:
            raise ConfigError(f"Malformed route '{item}'; expected e.g. M3:8-7-4-5-2-1.")
        index = int(match.group(1))
        if index in routes:
            raise ConfigError(f"Route for M{index} given twice.")
        routes[index] = tuple(int(q) for q in match.group(2).split("-"))
    if not routes:
        raise ConfigError("ROUTES must be 'naive', 'optimal' or explicit orders.")
    return routes


def _split_list(value):
    if isinstance(value, str):
        return [item.strip() for item in value.split(",") if item.strip()]
    return value


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    code: str
    logical_state: Literal["zero", "one", "plus", "minus"] = "zero"
    omega: float = Field(200.0, ge=0)
    alpha: float = Field(..., ge=0)
    gamma: float = Field(1.0, ge=0)
    theta_list: tuple[float, ...] = (0.0,)
    theta_unit: Literal["rad", "pi/1000"] = "rad"
    noise_kind: Literal["bit_flip", "spontaneous", "none"] = "bit_flip"
    relay_dephasing: float = Field(0.0, ge=0)
    routes: str = "naive"
    t_final: float = Field(1.0, gt=0)
    dt: Optional[float] = Field(None, gt=0)
    sample_dt: float = Field(0.01, gt=0)
    n_trajectories: int = Field(100, ge=1)
    seed: int = Field(0, ge=0)
    metric: Literal["strict", "subsystem", "auto"] = "auto"
    tau_list: tuple[float, ...] = ()
    output_dir: str = "output"
    save_trajectories: bool = False
    plot: bool = True

    @field_validator("code")
    @classmethod
    def _known_code(cls, value: str) -> str:
        if value not in catalog_names():
            raise ValueError(f"unknown code '{value}'; known codes: {', '.join(catalog_names())}")
        return value

    @field_validator("theta_list", "tau_list", mode="before")
    @classmethod
    def _comma_list(cls, value):
        return _split_list(value)

    @field_validator("theta_list", "tau_list")
    @classmethod
    def _non_negative(cls, value):
        if any(v < 0 or not math.isfinite(v) for v in value):
            raise ValueError("values must be finite and non-negative")
        return value

    @field_validator("dt", mode="before")
    @classmethod
    def _auto_dt(cls, value):
        if isinstance(value, str) and value.strip().lower() in ("auto", ""):
            return None
        return value

    @field_validator("routes")
    @classmethod
    def _route_syntax(cls, value: str) -> str:
        parse_routes(value)
        return value.strip()

    @model_validator(mode="after")
    def _times(self):
        if self.dt is not None and self.dt > self.sample_dt:
            raise ValueError(f"DT={self.dt} must not exceed SAMPLE_DT={self.sample_dt}")
        if self.sample_dt > self.t_final:
            raise ValueError(f"SAMPLE_DT={self.sample_dt} must not exceed T={self.t_final}")
        too_long = [tau for tau in self.tau_list if tau > self.t_final]
        if too_long:
            raise ValueError(f"TAU_LIST entries {too_long} exceed T={self.t_final}")
        return self

    @property
    def thetas_rad(self) -> tuple:
        """Loss values converted to radians."""
        return tuple(theta * THETA_UNITS[self.theta_unit] for theta in self.theta_list)

    @property
    def route_spec(self):
        return parse_routes(self.routes)


def _field_name(key: str) -> str:
    return _KEY_TO_FIELD.get(key.upper(), key.lower())


def _file_key(field_name: str) -> str:
    return _FIELD_TO_KEY.get(field_name, field_name.upper())


def get_setting(key: str, file_values: Optional[dict] = None) -> Optional[str]:
    """
    Purpose: Retrieves one setting. The process environment (AQM_<KEY>) wins over the file.
    Inputs:
        - key (str): File key, e.g. "SEED".
        - file_values (dict): Raw values read from the config file.
    Outputs: The raw string value, or None if not set anywhere.
    """
    env_value = os.environ.get(f"{ENV_PREFIX}{key.upper()}")
    if env_value:
        return env_value
    if file_values:
        for raw_key, value in file_values.items():
            if raw_key.upper() == key.upper() and value not in (None, ""):
                return value
    return None


def _build(file_values: dict, overrides: Optional[dict] = None) -> ExperimentConfig:
    unknown = sorted(k for k in file_values if _field_name(k) not in ExperimentConfig.model_fields)
    if unknown:
        raise ConfigError(f"Unknown config keys: {', '.join(unknown)}.")

    raw = {}
    for name in ExperimentConfig.model_fields:
        value = get_setting(_file_key(name), file_values)
        if value is not None:
            raw[name] = value
    raw.update(overrides or {})
    try:
        return ExperimentConfig(**raw)
    except ValidationError as exc:
        messages = "; ".join(
            f"{_file_key(str(err['loc'][0])) if err['loc'] else 'config'}: {err['msg']}"
            for err in exc.errors()
        )
        raise ConfigError(f"Invalid configuration: {messages}") from exc


def parse_config(text: str, overrides: Optional[dict] = None) -> ExperimentConfig:
    """Parses KEY=value text; `overrides` (field name -> value) win over everything."""
    values = dotenv_values(stream=io.StringIO(text))
    return _build(dict(values), overrides)


def load_config(path: Union[str, Path], overrides: Optional[dict] = None) -> ExperimentConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"Config file not found: {path}")
    return _build(dict(dotenv_values(path)), overrides)


def _render_value(value) -> str:
    if value is None:
        return "auto"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, tuple):
        return ",".join(_render_value(v) for v in value)
    return str(value)


def render_config(config: ExperimentConfig) -> str:
    """Canonical KEY=value text, one key per line in field order."""
    lines = [f"{_file_key(name)}={_render_value(getattr(config, name))}" for name in ExperimentConfig.model_fields]
    return "\n".join(lines) + "\n"
