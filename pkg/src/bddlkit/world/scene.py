"""Scene manifests: fixed furniture, rooms, and the initial state.

A manifest is the symbolic stand-in for a scanned scene: named rooms
with floor rectangles, plus the fixed objects (furniture, appliances)
that activity constants with ``inroom`` constraints bind to.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import yaml

from bddlkit.config import SimConfig
from bddlkit.errors import WorldError
from bddlkit.syntax.ast import CategoryName, ConstantName
from bddlkit.taxonomy import Taxonomy
from bddlkit.world.state import (
    AgentState,
    ExtendedState,
    ObjectInstance,
    Pose,
    Region,
    SceneState,
    Thresholds,
    Vec3,
    hand_poses,
)


@dataclass(frozen=True)
class RoomSpec:
    bounds: Region
    free_space: Region  # where spawned objects may be dropped


@dataclass(frozen=True)
class FixedObjectSpec:
    name: ConstantName
    category: CategoryName
    position: Vec3
    yaw: float
    bounding_radius: float | None
    open: bool
    toggled_on: bool
    source_temp_c: float | None  # explicit override of the config default


@dataclass(frozen=True)
class SceneManifest:
    version: int
    name: str
    rooms: dict[str, RoomSpec]
    agent_position: Vec3
    agent_yaw: float
    objects: tuple[FixedObjectSpec, ...]


def _as_vec3(raw, what: str) -> Vec3:
    if not isinstance(raw, list) or len(raw) != 3:
        raise WorldError(f"{what} must be a 3-element list: {raw!r}")
    return (float(raw[0]), float(raw[1]), float(raw[2]))


def _as_region(raw, what: str) -> Region:
    if not isinstance(raw, list) or len(raw) != 4:
        raise WorldError(f"{what} must be [x_min, y_min, x_max, y_max]: {raw!r}")
    return Region(float(raw[0]), float(raw[1]), float(raw[2]), float(raw[3]))


def load_manifest(path: str | Path) -> SceneManifest:
    raw = yaml.safe_load(Path(path).read_text())
    if not isinstance(raw, dict):
        raise WorldError(f"scene manifest must hold a mapping: {path}")
    version = raw.get("manifest_version")
    if not isinstance(version, int):
        raise WorldError("scene manifest must carry an integer manifest_version")
    name = str(raw.get("name", Path(path).stem))

    rooms: dict[str, RoomSpec] = {}
    for room_name, body in (raw.get("rooms") or {}).items():
        if not isinstance(body, dict) or "bounds" not in body:
            raise WorldError(f"room {room_name!r} must declare bounds")
        bounds = _as_region(body["bounds"], f"bounds of room {room_name!r}")
        free = body.get("free_space")
        free_space = bounds if free is None else _as_region(free, f"free_space of {room_name!r}")
        rooms[str(room_name)] = RoomSpec(bounds, free_space)
    if not rooms:
        raise WorldError("scene manifest declares no rooms")

    agent = raw.get("agent") or {}
    agent_position = _as_vec3(agent.get("position", [0.0, 0.0, 0.0]), "agent position")
    agent_yaw = float(agent.get("yaw", 0.0))

    objects: list[FixedObjectSpec] = []
    seen: set[ConstantName] = set()
    for entry in raw.get("objects") or []:
        if not isinstance(entry, dict) or "id" not in entry or "category" not in entry:
            raise WorldError(f"scene object entry needs id and category: {entry!r}")
        try:
            obj_name = ConstantName.parse(str(entry["id"]))
            category = CategoryName.parse(str(entry["category"]))
        except ValueError as exc:
            raise WorldError(str(exc)) from None
        if obj_name in seen:
            raise WorldError(f"duplicate scene object id: {obj_name}")
        seen.add(obj_name)
        radius = entry.get("bounding_radius")
        source = entry.get("source_temp_c")
        objects.append(
            FixedObjectSpec(
                name=obj_name,
                category=category,
                position=_as_vec3(entry.get("position", [0.0, 0.0, 0.0]), f"position of {obj_name}"),
                yaw=float(entry.get("yaw", 0.0)),
                bounding_radius=None if radius is None else float(radius),
                open=bool(entry.get("open", False)),
                toggled_on=bool(entry.get("toggled_on", False)),
                source_temp_c=None if source is None else float(source),
            )
        )
    return SceneManifest(version, name, rooms, agent_position, agent_yaw, tuple(objects))


def make_object(
    name: ConstantName,
    category: CategoryName,
    position: Vec3,
    taxonomy: Taxonomy,
    config: SimConfig,
    *,
    yaw: float = 0.0,
    bounding_radius: float | None = None,
    fixed: bool = False,
    open: bool = False,
    toggled_on: bool = False,
    source_temp_c: float | None = None,
) -> ObjectInstance:
    """Build an object at ambient temperature, deriving source behaviour
    and validating state flags against the category's properties."""
    properties = taxonomy.properties_of(category)
    if open and "openable" not in properties:
        raise WorldError(f"{category} objects cannot start open")
    if toggled_on and "toggleable" not in properties:
        raise WorldError(f"{category} objects cannot start toggled on")
    if source_temp_c is None:
        if "heat_source" in properties:
            source_temp_c = config.heat_source_temp_c
        elif "cold_source" in properties:
            source_temp_c = config.cold_source_temp_c
    return ObjectInstance(
        name=name,
        category=category,
        position=position,
        yaw=yaw,
        bounding_radius=config.default_bounding_radius_m if bounding_radius is None else bounding_radius,
        thresholds=Thresholds.from_config(config),
        ext=ExtendedState.at_temperature(config.ambient_temp_c, open=open, toggled_on=toggled_on),
        fixed=fixed,
        source_temp_c=source_temp_c,
        water_source="water_source" in properties,
    )


def initial_state(manifest: SceneManifest, taxonomy: Taxonomy, config: SimConfig) -> SceneState:
    """The scene before any activity is instantiated: fixed objects on
    the floor, agent at its start pose, clock at zero."""
    objects: dict[ConstantName, ObjectInstance] = {}
    for spec in manifest.objects:
        objects[spec.name] = make_object(
            spec.name,
            spec.category,
            spec.position,
            taxonomy,
            config,
            yaw=spec.yaw,
            bounding_radius=spec.bounding_radius,
            fixed=True,
            open=spec.open,
            toggled_on=spec.toggled_on,
            source_temp_c=spec.source_temp_c,
        )
    left, right = hand_poses(manifest.agent_position, manifest.agent_yaw, config)
    agent = AgentState(
        body=Pose(manifest.agent_position, manifest.agent_yaw),
        left_hand=left,
        right_hand=right,
    )
    return SceneState(
        objects=objects,
        rooms={name: spec.bounds for name, spec in manifest.rooms.items()},
        support={},
        containment={},
        on_floor=frozenset(objects),
        agent=agent,
        config=config,
    )
