"""Shared fixtures and a small world builder for the tests."""

from __future__ import annotations

import pytest

import bddlkit
from bddlkit.config import SimConfig
from bddlkit.syntax.ast import CategoryName, ConstantName
from bddlkit.world.scene import make_object
from bddlkit.world.state import AgentState, Pose, Region, SceneState, hand_poses


@pytest.fixture(scope="session")
def domain():
    return bddlkit.standard_domain()


@pytest.fixture(scope="session")
def taxonomy():
    return bddlkit.standard_taxonomy()


@pytest.fixture(scope="session")
def scene():
    return bddlkit.standard_scene()


@pytest.fixture(scope="session")
def config():
    return SimConfig()


def activity_text(name: str) -> str:
    return bddlkit.data_path("activities", f"{name}.bddl").read_text()


@pytest.fixture(scope="session")
def packing(domain):
    return bddlkit.parse_problem(activity_text("packing_lunches"), domain)


@pytest.fixture(scope="session")
def serving(domain):
    return bddlkit.parse_problem(activity_text("serving_hors_d_oeuvres"), domain)


def const(text: str) -> ConstantName:
    return ConstantName.parse(text)


def cat(text: str) -> CategoryName:
    return CategoryName.parse(text)


def build_world(
    taxonomy,
    config,
    objects: dict[str, tuple],
    support: dict[str, str] | None = None,
    containment: dict[str, str] | None = None,
    rooms: dict[str, tuple[float, float, float, float]] | None = None,
    agent_at: tuple[float, float, float] = (0.0, 0.0, 0.0),
    agent_yaw: float = 0.0,
    clock_s: float = 0.0,
    **held,
) -> SceneState:
    """Assemble a state from shorthand.

    ``objects`` maps an instance name to its position, optionally
    followed by a dict of ``make_object`` keyword arguments, e.g.
    ``{"stove.n.01_1": ((1, 0, 0.9), {"fixed": True, "toggled_on": True})}``.
    Everything without a support/containment parent and not held sits on
    the floor.  ``held`` accepts ``left_held``/``right_held`` names.
    """
    support = {const(c): const(p) for c, p in (support or {}).items()}
    containment = {const(c): const(p) for c, p in (containment or {}).items()}
    built: dict[ConstantName, object] = {}
    for name_text, entry in objects.items():
        if len(entry) == 2 and isinstance(entry[1], dict):
            position, kwargs = entry
        else:
            position, kwargs = entry, {}
        name = const(name_text)
        built[name] = make_object(
            name, name.category, tuple(map(float, position)), taxonomy, config, **kwargs
        )
    left_held = const(held["left_held"]) if held.get("left_held") else None
    right_held = const(held["right_held"]) if held.get("right_held") else None
    placed = set(support) | set(containment) | {h for h in (left_held, right_held) if h}
    left, right = hand_poses(agent_at, agent_yaw, config)
    agent = AgentState(
        body=Pose(agent_at, agent_yaw),
        left_hand=left,
        right_hand=right,
        left_held=left_held,
        right_held=right_held,
        left_contact=left_held,
        right_contact=right_held,
    )
    region_map = {
        name: Region(*bounds) for name, bounds in (rooms or {"room": (-50, -50, 50, 50)}).items()
    }
    return SceneState(
        objects=built,
        rooms=region_map,
        support=support,
        containment=containment,
        on_floor=frozenset(n for n in built if n not in placed),
        agent=agent,
        config=config,
        clock_s=clock_s,
    )
