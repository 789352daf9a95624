"""Symbolic household world: state, predicates, primitives, processes."""

from bddlkit.world.predicates import Fact, eval_atomic, logical_snapshot
from bddlkit.world.primitives import (
    Action,
    Close,
    Grasp,
    NavigateTo,
    Open,
    PlaceInside,
    PlaceOnTop,
    Slice,
    Toggle,
    Wait,
    Wipe,
    action_duration,
    apply_primitive,
    parse_script,
)
from bddlkit.world.processes import advance_dynamics, step_processes
from bddlkit.world.scene import SceneManifest, initial_state, load_manifest, make_object
from bddlkit.world.state import (
    AgentState,
    ExtendedState,
    ObjectInstance,
    Pose,
    Region,
    SceneState,
    Thresholds,
    Vec3,
    detached,
    distance,
    hand_poses,
    horizontal_distance,
    validate_state,
)

__all__ = [
    "Action",
    "AgentState",
    "Close",
    "ExtendedState",
    "Fact",
    "Grasp",
    "NavigateTo",
    "ObjectInstance",
    "Open",
    "PlaceInside",
    "PlaceOnTop",
    "Pose",
    "Region",
    "SceneManifest",
    "SceneState",
    "Slice",
    "Thresholds",
    "Toggle",
    "Vec3",
    "Wait",
    "Wipe",
    "action_duration",
    "advance_dynamics",
    "apply_primitive",
    "detached",
    "distance",
    "eval_atomic",
    "hand_poses",
    "horizontal_distance",
    "initial_state",
    "load_manifest",
    "logical_snapshot",
    "make_object",
    "parse_script",
    "step_processes",
    "validate_state",
]
