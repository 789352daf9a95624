"""Value types for the symbolic scene state.

A :class:`SceneState` is treated as an immutable value: every mutation
helper returns a fresh state and never touches its input.  That makes
primitive atomicity trivial (a failed primitive simply raises before
any copy is returned) and lets tests compare states with ``==``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from bddlkit.config import SimConfig
from bddlkit.errors import WorldError
from bddlkit.syntax.ast import CategoryName, ConstantName

Vec3 = tuple[float, float, float]


def distance(a: Vec3, b: Vec3) -> float:
    return math.dist(a, b)


def horizontal_distance(a: Vec3, b: Vec3) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def hand_poses(body: Vec3, yaw: float, config: SimConfig) -> tuple[Pose, Pose]:
    """Left and right hand poses for a body position and facing."""
    px, py = -math.sin(yaw), math.cos(yaw)  # unit vector to the agent's left
    height = config.hand_height_m
    left = (body[0] + px * config.hand_offset_m, body[1] + py * config.hand_offset_m, height)
    right = (body[0] - px * config.hand_offset_m, body[1] - py * config.hand_offset_m, height)
    return Pose(left, yaw), Pose(right, yaw)


@dataclass(frozen=True)
class Pose:
    position: Vec3
    yaw: float = 0.0


@dataclass(frozen=True)
class Region:
    """Axis-aligned floor rectangle; bounds are inclusive."""

    x_min: float
    y_min: float
    x_max: float
    y_max: float

    def __post_init__(self):
        if self.x_min > self.x_max or self.y_min > self.y_max:
            raise WorldError(f"degenerate region: {self}")

    def contains(self, x: float, y: float) -> bool:
        return self.x_min <= x <= self.x_max and self.y_min <= y <= self.y_max

    def bounds(self) -> tuple[float, float, float, float]:
        return (self.x_min, self.y_min, self.x_max, self.y_max)


@dataclass(frozen=True)
class Thresholds:
    """Per-object temperature thresholds in degrees Celsius."""

    cook_c: float
    burn_c: float
    freeze_c: float

    @classmethod
    def from_config(cls, config: SimConfig) -> Thresholds:
        return cls(config.cook_temp_c, config.burn_temp_c, config.freeze_temp_c)


@dataclass(frozen=True)
class ExtendedState:
    """Non-kinematic object state.

    ``temp_max_c`` / ``temp_min_c`` track the running extremes of the
    temperature history; cooked and burnt judgements read the maximum,
    so they survive later cooling.
    """

    temp_c: float
    temp_max_c: float
    temp_min_c: float
    wetness: float = 0.0
    dust: float = 0.0
    stain: float = 0.0
    toggled_on: bool = False
    open: bool = False
    sliced: bool = False

    def __post_init__(self):
        if not self.temp_min_c <= self.temp_c <= self.temp_max_c:
            raise WorldError(
                f"temperature history out of order: "
                f"{self.temp_min_c} <= {self.temp_c} <= {self.temp_max_c} fails"
            )
        for label, level in (("wetness", self.wetness), ("dust", self.dust), ("stain", self.stain)):
            if not 0.0 <= level <= 1.0:
                raise WorldError(f"{label} must be within [0, 1]: {level}")

    @classmethod
    def at_temperature(cls, temp_c: float, **flags) -> ExtendedState:
        return cls(temp_c=temp_c, temp_max_c=temp_c, temp_min_c=temp_c, **flags)

    def with_temperature(self, temp_c: float) -> ExtendedState:
        return replace(
            self,
            temp_c=temp_c,
            temp_max_c=max(self.temp_max_c, temp_c),
            temp_min_c=min(self.temp_min_c, temp_c),
        )


@dataclass(frozen=True)
class ObjectInstance:
    name: ConstantName
    category: CategoryName
    position: Vec3
    yaw: float
    bounding_radius: float
    thresholds: Thresholds
    ext: ExtendedState
    fixed: bool = False
    source_temp_c: float | None = None  # set on heat/cold sources
    water_source: bool = False

    def moved_to(self, position: Vec3) -> ObjectInstance:
        return replace(self, position=position)


@dataclass(frozen=True)
class AgentState:
    """A bimanual agent: one body pose, two hands, at most one held
    object per hand.  A held object is always the hand's contact."""

    body: Pose
    left_hand: Pose
    right_hand: Pose
    left_held: ConstantName | None = None
    right_held: ConstantName | None = None
    left_contact: ConstantName | None = None
    right_contact: ConstantName | None = None

    def __post_init__(self):
        if self.left_held is not None and self.left_contact != self.left_held:
            raise WorldError("left hand holds an object it is not in contact with")
        if self.right_held is not None and self.right_contact != self.right_held:
            raise WorldError("right hand holds an object it is not in contact with")

    def hand(self, side: str) -> Pose:
        return self.left_hand if side == "left" else self.right_hand

    def held(self, side: str) -> ConstantName | None:
        return self.left_held if side == "left" else self.right_held

    def held_objects(self) -> tuple[ConstantName, ...]:
        held = []
        if self.left_held is not None:
            held.append(self.left_held)
        if self.right_held is not None:
            held.append(self.right_held)
        return tuple(held)


@dataclass(frozen=True)
class SceneState:
    """Full symbolic snapshot of a scene.

    ``support`` and ``containment`` are child-to-parent maps and must
    stay forests; ``on_floor`` marks objects resting directly on the
    floor.  An object has at most one of: a supporter, a container, the
    floor, or a holding hand.
    """

    objects: dict[ConstantName, ObjectInstance]
    rooms: dict[str, Region]
    support: dict[ConstantName, ConstantName]
    containment: dict[ConstantName, ConstantName]
    on_floor: frozenset[ConstantName]
    agent: AgentState
    config: SimConfig = field(default_factory=SimConfig)
    clock_s: float = 0.0

    def require(self, name: ConstantName) -> ObjectInstance:
        obj = self.objects.get(name)
        if obj is None:
            raise WorldError(f"unknown object: {name}")
        return obj

    def placement_parent(self, name: ConstantName) -> ConstantName | None:
        return self.support.get(name) or self.containment.get(name)

    def containment_chain(self, name: ConstantName) -> list[ConstantName]:
        """Transitive containers of ``name``, innermost first."""
        chain: list[ConstantName] = []
        cursor = self.containment.get(name)
        while cursor is not None:
            if cursor in chain or cursor == name:
                raise WorldError(f"containment cycle at {cursor}")
            chain.append(cursor)
            cursor = self.containment.get(cursor)
        return chain

    def support_chain(self, name: ConstantName) -> list[ConstantName]:
        chain: list[ConstantName] = []
        cursor = self.support.get(name)
        while cursor is not None:
            if cursor in chain or cursor == name:
                raise WorldError(f"support cycle at {cursor}")
            chain.append(cursor)
            cursor = self.support.get(cursor)
        return chain

    def placement_chain(self, name: ConstantName) -> list[ConstantName]:
        """Transitive supporters and containers, nearest first."""
        chain: list[ConstantName] = []
        cursor = self.placement_parent(name)
        while cursor is not None:
            if cursor in chain or cursor == name:
                raise WorldError(f"placement cycle at {cursor}")
            chain.append(cursor)
            cursor = self.placement_parent(cursor)
        return chain

    def attached_subtree(self, root: ConstantName) -> list[ConstantName]:
        """``root`` plus everything transitively supported by or
        contained in it, in a deterministic order."""
        children: dict[ConstantName, list[ConstantName]] = {}
        for child, parent in list(self.support.items()) + list(self.containment.items()):
            children.setdefault(parent, []).append(child)
        out: list[ConstantName] = []
        queue = [root]
        while queue:
            name = queue.pop(0)
            out.append(name)
            queue.extend(sorted(children.get(name, [])))
        return out


def detached(state: SceneState, name: ConstantName) -> SceneState:
    """A copy of ``state`` where ``name`` has no placement mode."""
    support = {c: p for c, p in state.support.items() if c != name}
    containment = {c: p for c, p in state.containment.items() if c != name}
    return replace(
        state,
        support=support,
        containment=containment,
        on_floor=state.on_floor - {name},
    )


def validate_state(state: SceneState) -> None:
    """Check the structural invariants; raise :class:`WorldError` on the
    first violation.  Used by tests and after instantiation."""
    held = set(state.agent.held_objects())
    for name, obj in state.objects.items():
        if obj.name != name:
            raise WorldError(f"object keyed as {name} is named {obj.name}")
        modes = [
            name in state.support,
            name in state.containment,
            name in state.on_floor,
            name in held,
        ]
        if sum(modes) > 1:
            raise WorldError(f"{name} has more than one placement mode")
    for edges in (state.support, state.containment):
        for child, parent in edges.items():
            state.require(child)
            state.require(parent)
    for name in state.objects:
        state.placement_chain(name)  # raises on cycles
    for name in held:
        state.require(name)
        if state.objects[name].fixed:
            raise WorldError(f"fixed object {name} cannot be held")
