"""JSON run configuration holding the apparatus geometry and the counting
model, e.g.

    {
        "geometry": {"slit_width_a": 30.0, "slit_separation_d": 100.0},
        "simulation": {"total_coincidences": 1000000, "seed": 7}
    }

Missing keys keep their defaults.
"""

import json
from pathlib import Path
from typing import Optional, Union
import attr
from attrs import define, field

from py_qutrit_correlations.errors import ConfigError, ValidationError
from py_qutrit_correlations.optics import OpticsGeometry
from py_qutrit_correlations.photon_sim import SimConfig
from py_qutrit_correlations.utils.data_utils import sha256_of_json

import logging

logger = logging.getLogger(__name__)

SECTIONS = {"geometry": OpticsGeometry, "simulation": SimConfig}


@define(frozen=True)
class RunConfig:
    geometry: OpticsGeometry = field(factory=OpticsGeometry)
    simulation: SimConfig = field(factory=SimConfig)

    def as_dict(self) -> dict:
        return {
            "geometry": attr.asdict(self.geometry),
            "simulation": attr.asdict(self.simulation),
        }

    @property
    def config_hash(self) -> str:
        """SHA-256 of the canonical JSON of the effective configuration"""
        return sha256_of_json(self.as_dict())


def _build_section(name: str, values) -> object:
    cls = SECTIONS[name]
    if not isinstance(values, dict):
        raise ConfigError(f"Section '{name}' must be an object, got {values!r}")
    known = {a.name for a in attr.fields(cls)}
    unknown = sorted(set(values) - known)
    if unknown:
        raise ConfigError(f"Unknown keys in '{name}': {unknown}; known: {sorted(known)}")
    try:
        return cls(**values)
    except ValidationError as e:
        raise ConfigError(f"Invalid '{name}' section: {e}")


def config_from_dict(data: dict) -> RunConfig:
    """
    Builds a RunConfig from parsed JSON.

    Args:
        data (dict): mapping with optional "geometry" and "simulation" sections

    Raises:
        ConfigError: for unknown sections or keys and invalid values

    Returns:
        RunConfig: the configuration
    """
    if not isinstance(data, dict):
        raise ConfigError(f"Config must be a JSON object, got {type(data).__name__}")
    unknown = sorted(set(data) - set(SECTIONS))
    if unknown:
        raise ConfigError(f"Unknown config sections {unknown}")
    sections = {name: _build_section(name, data[name]) for name in data}
    return RunConfig(**sections)


def parse_config_file(filepath: Optional[Union[str, Path]]) -> RunConfig:
    """
    Reads a JSON config file; None gives the default configuration.

    Args:
        filepath (Optional[Union[str, Path]]): the JSON file

    Raises:
        ConfigError: if the file cannot be read or is invalid

    Returns:
        RunConfig: the configuration
    """
    if filepath is None:
        return RunConfig()
    filepath = Path(filepath)
    try:
        data = json.loads(filepath.read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as e:
        raise ConfigError(f"Cannot load config {filepath}: {e}")
    config = config_from_dict(data)
    logger.info(f"Loaded config from {filepath} (hash {config.config_hash[:12]})")
    return config
