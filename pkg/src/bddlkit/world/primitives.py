"""Motor primitives over the symbolic state.

Primitives are atomic: a precondition failure raises
:class:`PrimitiveFailure` before any copy of the state is built, so the
input state is returned to the caller untouched.  Every successful
primitive advances the clock by its fixed duration.

Reach is judged in the floor plane: the agent can work at any height
within ``reach_radius_m`` of its body.  Moving an object carries its
whole attached subtree (contents and stacked items) along with it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from bddlkit.config import SimConfig
from bddlkit.errors import BddlParseError, PrimitiveFailure, WorldError
from bddlkit.syntax.ast import ConstantName
from bddlkit.taxonomy import Taxonomy
from bddlkit.world.state import (
    AgentState,
    ObjectInstance,
    Pose,
    SceneState,
    Vec3,
    detached,
    hand_poses,
    horizontal_distance,
)

_HANDS = ("left", "right")


def _check_hand(hand: str) -> str:
    if hand not in _HANDS:
        raise WorldError(f"hand must be 'left' or 'right': {hand!r}")
    return hand


@dataclass(frozen=True)
class NavigateTo:
    target: ConstantName


@dataclass(frozen=True)
class Grasp:
    hand: str
    target: ConstantName

    def __post_init__(self):
        _check_hand(self.hand)


@dataclass(frozen=True)
class PlaceOnTop:
    hand: str
    destination: ConstantName

    def __post_init__(self):
        _check_hand(self.hand)


@dataclass(frozen=True)
class PlaceInside:
    hand: str
    destination: ConstantName

    def __post_init__(self):
        _check_hand(self.hand)


@dataclass(frozen=True)
class Open:
    target: ConstantName


@dataclass(frozen=True)
class Close:
    target: ConstantName


@dataclass(frozen=True)
class Toggle:
    target: ConstantName


@dataclass(frozen=True)
class Slice:
    target: ConstantName
    tool: ConstantName


@dataclass(frozen=True)
class Wipe:
    target: ConstantName
    tool: ConstantName


@dataclass(frozen=True)
class Wait:
    """Not a motor primitive: lets scripted demos idle while processes run."""

    seconds: float


Action = NavigateTo | Grasp | PlaceOnTop | PlaceInside | Open | Close | Toggle | Slice | Wipe


def action_duration(action: Action, config: SimConfig) -> float:
    if isinstance(action, NavigateTo):
        return config.navigate_duration_s
    if isinstance(action, Wipe):
        return config.wipe_duration_s
    if isinstance(action, Wait):
        return action.seconds
    return config.primitive_duration_s


# ---------------------------------------------------------------------------
# state surgery helpers
# ---------------------------------------------------------------------------


def _moved_subtree(state: SceneState, root: ConstantName, position: Vec3) -> SceneState:
    origin = state.objects[root].position
    delta = (
        position[0] - origin[0],
        position[1] - origin[1],
        position[2] - origin[2],
    )
    objects = dict(state.objects)
    for member in state.attached_subtree(root):
        obj = objects[member]
        objects[member] = obj.moved_to(
            (
                obj.position[0] + delta[0],
                obj.position[1] + delta[1],
                obj.position[2] + delta[2],
            )
        )
    return replace(state, objects=objects)


def _with_ext(state: SceneState, name: ConstantName, **changes) -> SceneState:
    objects = dict(state.objects)
    obj = objects[name]
    objects[name] = replace(obj, ext=replace(obj.ext, **changes))
    return replace(state, objects=objects)


def _tick(state: SceneState, action: Action) -> SceneState:
    return replace(state, clock_s=state.clock_s + action_duration(action, state.config))


def _require_reach(state: SceneState, obj: ObjectInstance) -> None:
    gap = horizontal_distance(state.agent.body.position, obj.position)
    if gap > state.config.reach_radius_m:
        raise PrimitiveFailure(
            "out-of-reach", f"{obj.name} is {gap:.2f} m away, reach is {state.config.reach_radius_m} m"
        )


def _require_held(state: SceneState, tool: ConstantName) -> None:
    if tool not in state.agent.held_objects():
        raise PrimitiveFailure("tool-not-held", f"{tool} is not held in either hand")


def _reposition_agent(state: SceneState, body: Vec3, yaw: float) -> SceneState:
    """Move body and hands, carrying held subtrees with their hands."""
    agent = state.agent
    left, right = hand_poses(body, yaw, state.config)
    out = replace(
        state,
        agent=replace(agent, body=Pose(body, yaw), left_hand=left, right_hand=right),
    )
    if agent.left_held is not None:
        out = _moved_subtree(out, agent.left_held, left.position)
    if agent.right_held is not None:
        out = _moved_subtree(out, agent.right_held, right.position)
    return out


# ---------------------------------------------------------------------------
# the primitives
# ---------------------------------------------------------------------------


def _do_navigate(state: SceneState, action: NavigateTo) -> SceneState:
    target = state.require(action.target)
    bx, by, _ = state.agent.body.position
    tx, ty, _ = target.position
    gap = math.hypot(bx - tx, by - ty)
    if gap < 1e-9:
        direction = (-1.0, 0.0)
    else:
        direction = ((bx - tx) / gap, (by - ty) / gap)
    standoff = state.config.standoff_m
    body = (tx + direction[0] * standoff, ty + direction[1] * standoff, 0.0)
    yaw = math.atan2(ty - body[1], tx - body[0])
    return _reposition_agent(state, body, yaw)


def _do_grasp(state: SceneState, action: Grasp) -> SceneState:
    target = state.require(action.target)
    if target.fixed:
        raise PrimitiveFailure("fixed-object", f"{target.name} is part of the scene")
    if state.agent.held(action.hand) is not None:
        raise PrimitiveFailure("hand-occupied", f"{action.hand} hand already holds an object")
    if target.name in state.agent.held_objects():
        raise PrimitiveFailure("already-held", f"{target.name} is held in the other hand")
    _require_reach(state, target)
    out = detached(state, target.name)
    hand_pose = out.agent.hand(action.hand)
    out = _moved_subtree(out, target.name, hand_pose.position)
    agent = out.agent
    if action.hand == "left":
        agent = replace(agent, left_held=target.name, left_contact=target.name)
    else:
        agent = replace(agent, right_held=target.name, right_contact=target.name)
    return replace(out, agent=agent)


def _release(agent: AgentState, hand: str) -> AgentState:
    if hand == "left":
        return replace(agent, left_held=None, left_contact=None)
    return replace(agent, right_held=None, right_contact=None)


def _check_placement_target(
    state: SceneState, held: ConstantName, destination: ObjectInstance
) -> None:
    if destination.name == held:
        raise PrimitiveFailure("self-placement", f"cannot place {held} onto itself")
    if destination.name in state.attached_subtree(held):
        raise PrimitiveFailure(
            "cyclic-placement", f"{destination.name} is attached to {held}"
        )
    _require_reach(state, destination)


def _do_place_on_top(state: SceneState, action: PlaceOnTop) -> SceneState:
    held = state.agent.held(action.hand)
    if held is None:
        raise PrimitiveFailure("hand-empty", f"{action.hand} hand holds nothing")
    destination = state.require(action.destination)
    _check_placement_target(state, held, destination)
    resting = (
        destination.position[0],
        destination.position[1],
        destination.position[2] + destination.bounding_radius + state.objects[held].bounding_radius,
    )
    out = _moved_subtree(state, held, resting)
    support = dict(out.support)
    support[held] = destination.name
    return replace(out, support=support, agent=_release(out.agent, action.hand))


def _do_place_inside(state: SceneState, action: PlaceInside, taxonomy: Taxonomy) -> SceneState:
    held = state.agent.held(action.hand)
    if held is None:
        raise PrimitiveFailure("hand-empty", f"{action.hand} hand holds nothing")
    destination = state.require(action.destination)
    _check_placement_target(state, held, destination)
    if taxonomy.has_property(destination.category, "openable") and not destination.ext.open:
        raise PrimitiveFailure("container-closed", f"{destination.name} is closed")
    out = _moved_subtree(state, held, destination.position)
    containment = dict(out.containment)
    containment[held] = destination.name
    return replace(out, containment=containment, agent=_release(out.agent, action.hand))


def _do_open_close(state: SceneState, target_name: ConstantName, opened: bool, taxonomy: Taxonomy) -> SceneState:
    target = state.require(target_name)
    _require_reach(state, target)
    if not taxonomy.has_property(target.category, "openable"):
        raise PrimitiveFailure("not-openable", f"{target.category} objects cannot be opened")
    return _with_ext(state, target.name, open=opened)


def _do_toggle(state: SceneState, action: Toggle, taxonomy: Taxonomy) -> SceneState:
    target = state.require(action.target)
    _require_reach(state, target)
    if not taxonomy.has_property(target.category, "toggleable"):
        raise PrimitiveFailure("not-toggleable", f"{target.category} objects cannot be toggled")
    return _with_ext(state, target.name, toggled_on=not target.ext.toggled_on)


def _do_slice(state: SceneState, action: Slice, taxonomy: Taxonomy) -> SceneState:
    target = state.require(action.target)
    tool = state.require(action.tool)
    _require_held(state, tool.name)
    if not taxonomy.has_property(tool.category, "slicer"):
        raise PrimitiveFailure("not-a-slicer", f"{tool.category} objects cannot slice")
    if not taxonomy.has_property(target.category, "sliceable"):
        raise PrimitiveFailure("not-sliceable", f"{target.category} objects cannot be sliced")
    _require_reach(state, target)
    return _with_ext(state, target.name, sliced=True)


def _do_wipe(state: SceneState, action: Wipe, taxonomy: Taxonomy) -> SceneState:
    target = state.require(action.target)
    tool = state.require(action.tool)
    _require_held(state, tool.name)
    if not taxonomy.has_property(tool.category, "soakable"):
        raise PrimitiveFailure("not-a-wiper", f"{tool.category} objects cannot wipe")
    _require_reach(state, target)
    # a soaked tool lifts stains, a dry one lifts dust
    if tool.ext.wetness >= state.config.soaked_cutoff:
        return _with_ext(state, target.name, stain=0.0)
    return _with_ext(state, target.name, dust=0.0)


def apply_primitive(state: SceneState, action: Action, taxonomy: Taxonomy) -> SceneState:
    """Run one motor primitive; raise :class:`PrimitiveFailure` when a
    precondition does not hold (the input state is never modified)."""
    if isinstance(action, NavigateTo):
        out = _do_navigate(state, action)
    elif isinstance(action, Grasp):
        out = _do_grasp(state, action)
    elif isinstance(action, PlaceOnTop):
        out = _do_place_on_top(state, action)
    elif isinstance(action, PlaceInside):
        out = _do_place_inside(state, action, taxonomy)
    elif isinstance(action, Open):
        out = _do_open_close(state, action.target, True, taxonomy)
    elif isinstance(action, Close):
        out = _do_open_close(state, action.target, False, taxonomy)
    elif isinstance(action, Toggle):
        out = _do_toggle(state, action, taxonomy)
    elif isinstance(action, Slice):
        out = _do_slice(state, action, taxonomy)
    elif isinstance(action, Wipe):
        out = _do_wipe(state, action, taxonomy)
    else:
        raise WorldError(f"not a motor primitive: {action!r}")
    return _tick(out, action)


# ---------------------------------------------------------------------------
# demo scripts
# ---------------------------------------------------------------------------


def _parse_constant(token: str, line_no: int) -> ConstantName:
    try:
        return ConstantName.parse(token)
    except ValueError as exc:
        raise BddlParseError(str(exc), line_no) from None


def parse_script(text: str) -> list[Action | Wait]:
    """Parse a demo script: one action per line, ';' comments.

    Forms::

        navigate_to <object>
        grasp <left|right> <object>
        place_on_top <left|right> <destination>
        place_inside <left|right> <destination>
        open | close | toggle <object>
        slice | wipe <object> <tool>
        wait <seconds>
    """
    actions: list[Action | Wait] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split(";", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        verb, args = parts[0].lower(), parts[1:]

        def need(count: int) -> None:
            if len(args) != count:
                raise BddlParseError(
                    f"'{verb}' takes {count} argument(s), got {len(args)}", line_no
                )

        if verb == "navigate_to":
            need(1)
            actions.append(NavigateTo(_parse_constant(args[0], line_no)))
        elif verb in ("grasp", "place_on_top", "place_inside"):
            need(2)
            if args[0] not in _HANDS:
                raise BddlParseError(f"expected 'left' or 'right', found {args[0]!r}", line_no)
            cls = {"grasp": Grasp, "place_on_top": PlaceOnTop, "place_inside": PlaceInside}[verb]
            actions.append(cls(args[0], _parse_constant(args[1], line_no)))
        elif verb in ("open", "close", "toggle"):
            need(1)
            cls = {"open": Open, "close": Close, "toggle": Toggle}[verb]
            actions.append(cls(_parse_constant(args[0], line_no)))
        elif verb in ("slice", "wipe"):
            need(2)
            cls = {"slice": Slice, "wipe": Wipe}[verb]
            actions.append(
                cls(_parse_constant(args[0], line_no), _parse_constant(args[1], line_no))
            )
        elif verb == "wait":
            need(1)
            try:
                seconds = float(args[0])
            except ValueError:
                raise BddlParseError(f"bad duration {args[0]!r}", line_no) from None
            if seconds < 0:
                raise BddlParseError("wait duration must be non-negative", line_no)
            actions.append(Wait(seconds))
        else:
            raise BddlParseError(f"unknown action {verb!r}", line_no)
    return actions
