"""Simulation constants, all overridable from a YAML config file.

The defaults below are the reference values that the test suite pins.
Temperatures are degrees Celsius, distances metres, durations seconds,
wetness/dust/stain levels dimensionless in [0, 1].
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path

import yaml

from bddlkit.errors import BddlError


@dataclass(frozen=True)
class SimConfig:
    # thermal model
    ambient_temp_c: float = 22.0
    cook_temp_c: float = 70.0
    burn_temp_c: float = 200.0
    freeze_temp_c: float = 0.0
    heat_transfer_rate: float = 0.05  # fraction of the gap closed per second
    heat_source_temp_c: float = 200.0
    cold_source_temp_c: float = -18.0

    # soiling and wetting
    wetting_rate: float = 0.25  # wetness gained per second inside a running water source
    soaked_cutoff: float = 0.5
    dusty_cutoff: float = 0.5
    stained_cutoff: float = 0.5

    # geometry
    reach_radius_m: float = 1.5
    nextto_radius_factor: float = 2.0  # nextto radius = factor * bounding radius
    default_bounding_radius_m: float = 0.15
    hand_offset_m: float = 0.4  # lateral offset of each hand from the body
    hand_height_m: float = 1.0
    standoff_m: float = 1.0  # body-to-target distance after navigate_to

    # primitive durations
    navigate_duration_s: float = 5.0
    wipe_duration_s: float = 3.0
    primitive_duration_s: float = 2.0  # every other primitive

    # instantiation targets for unary init literals
    cooked_margin_c: float = 10.0  # history max set to cook threshold + margin
    frozen_margin_c: float = 5.0  # temperature set to freeze threshold - margin

    # logic engine and scoring
    flatten_cap: int = 1000
    normalize_ratio_cap: float = 10.0  # ratio when the agent's cost is zero but humans' is not
    normalize_best: str = "min"  # 'min' or 'mean' over human baselines

    def __post_init__(self):
        if self.normalize_best not in ("min", "mean"):
            raise BddlError(f"normalize_best must be 'min' or 'mean': {self.normalize_best!r}")
        if self.flatten_cap < 1:
            raise BddlError(f"flatten_cap must be positive: {self.flatten_cap}")


_FIELD_NAMES = frozenset(f.name for f in dataclasses.fields(SimConfig))


def load_config(path: str | Path | None) -> SimConfig:
    """Build a :class:`SimConfig`, applying overrides from a YAML file.

    The file holds a flat mapping of field names to values; unknown keys
    are rejected rather than silently ignored.
    """
    if path is None:
        return SimConfig()
    raw = yaml.safe_load(Path(path).read_text())
    if raw is None:
        return SimConfig()
    if not isinstance(raw, dict):
        raise BddlError(f"config file must hold a mapping: {path}")
    unknown = sorted(set(raw) - _FIELD_NAMES)
    if unknown:
        raise BddlError(f"unknown config keys: {', '.join(unknown)}")
    return dataclasses.replace(SimConfig(), **raw)
