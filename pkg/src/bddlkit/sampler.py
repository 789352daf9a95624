"""Realising activity definitions inside scenes.

``instantiate`` turns a definition plus a scene manifest into a
concrete initial state: constants constrained by ``inroom`` literals
bind (with backtracking) to distinct fixed scene objects of a matching
category in the right rooms; every other constant is spawned.  Init
literals are then realised: kinematic placements in dependency order,
extended-state values directly.  All randomness (candidate order,
spawn jitter, nextto directions) flows from the seed alone, and the
postcondition that every init literal actually evaluates true is
checked before returning.

``check_goal_feasibility`` vets a goal's flattened options for internal
consistency without touching any scene.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, replace

from bddlkit.config import SimConfig
from bddlkit.errors import InapplicablePredicateError, InstantiationError
from bddlkit.logic import DEFAULT_FLATTEN_CAP, GoalOptions, flatten, substitute
from bddlkit.syntax.ast import (
    ActivityDefinition,
    AtomicFormula,
    CategoryName,
    ConstantName,
    DomainDefinition,
    Expr,
    Literal,
    RoomName,
)
from bddlkit.taxonomy import Taxonomy
from bddlkit.world.predicates import eval_atomic
from bddlkit.world.scene import SceneManifest, initial_state, make_object
from bddlkit.world.state import SceneState, detached, validate_state

_PLACEMENT_PREDICATES = ("ontop", "inside", "onfloor")
_POSITIONAL_PREDICATES = ("nextto", "under")
_KINEMATIC = frozenset(("ontop", "inside", "onfloor", "nextto", "under", "inroom"))


@dataclass(frozen=True)
class InstantiationResult:
    state: SceneState
    binding: dict[ConstantName, ConstantName]  # activity constant -> scene object
    created: tuple[ConstantName, ...]  # scene objects spawned for this activity


def resolve_formula(formula: AtomicFormula, binding: dict[ConstantName, ConstantName]) -> AtomicFormula:
    args = tuple(binding.get(a, a) if isinstance(a, ConstantName) else a for a in formula.args)
    return AtomicFormula(formula.predicate, args)


def resolve_literal(literal: Literal, binding: dict[ConstantName, ConstantName]) -> Literal:
    return Literal(resolve_formula(literal.formula, binding), literal.negated)


def resolve_goal(goal: Expr | None, binding: dict[ConstantName, ConstantName]) -> Expr | None:
    if goal is None:
        return None
    return substitute(goal, dict(binding))


def bound_universe(
    definition: ActivityDefinition, binding: dict[ConstantName, ConstantName]
) -> list[tuple[ConstantName, CategoryName]]:
    """The activity's universe after binding: scene ids with the
    declared categories, in declaration order."""
    return [(binding.get(c, c), category) for c, category in definition.objects]


# ---------------------------------------------------------------------------
# instantiation
# ---------------------------------------------------------------------------


def _room_constraints(definition: ActivityDefinition) -> dict[ConstantName, set[str]]:
    constraints: dict[ConstantName, set[str]] = {}
    for literal in definition.init:
        if literal.formula.predicate != "inroom" or literal.negated:
            continue
        subject, room = literal.formula.args
        assert isinstance(subject, ConstantName) and isinstance(room, RoomName)
        constraints.setdefault(subject, set()).add(room.name)
    return constraints


def _bind_constrained(
    definition: ActivityDefinition,
    constraints: dict[ConstantName, set[str]],
    state: SceneState,
    scene: SceneManifest,
    taxonomy: Taxonomy,
    rng: random.Random,
) -> dict[ConstantName, ConstantName]:
    constrained = [(c, cat) for c, cat in definition.objects if c in constraints]
    candidates: dict[ConstantName, list[ConstantName]] = {}
    for constant, category in constrained:
        rooms = constraints[constant]
        for room in sorted(rooms):
            if room not in state.rooms:
                raise InstantiationError(f"init names unknown room {room!r}")
        pool: list[ConstantName] = []
        for spec in scene.objects:
            obj = state.objects[spec.name]
            if not taxonomy.is_a(obj.category, category):
                continue
            if all(
                state.rooms[room].contains(obj.position[0], obj.position[1])
                for room in rooms
            ):
                pool.append(spec.name)
        if not pool:
            raise InstantiationError(
                f"no eligible scene object for {constant} "
                f"(category {category} in room(s) {', '.join(sorted(rooms))})"
            )
        rng.shuffle(pool)
        candidates[constant] = pool

    assignment: dict[ConstantName, ConstantName] = {}
    used: set[ConstantName] = set()
    order = [c for c, _ in constrained]

    def backtrack(index: int) -> bool:
        if index == len(order):
            return True
        constant = order[index]
        for candidate in candidates[constant]:
            if candidate in used:
                continue
            assignment[constant] = candidate
            used.add(candidate)
            if backtrack(index + 1):
                return True
            used.discard(candidate)
            del assignment[constant]
        return False

    if not backtrack(0):
        raise InstantiationError(
            "cannot bind inroom-constrained constants to distinct scene objects"
        )
    return assignment


def _next_free_id(category: CategoryName, taken: set[ConstantName]) -> ConstantName:
    index = 1
    while ConstantName(category, index) in taken:
        index += 1
    return ConstantName(category, index)


def _spawn_position(scene: SceneManifest, radius: float, rng: random.Random) -> tuple[float, float, float]:
    room = next(iter(scene.rooms.values()))
    free = room.free_space
    x_lo, x_hi = free.x_min + radius, free.x_max - radius
    y_lo, y_hi = free.y_min + radius, free.y_max - radius
    x = rng.uniform(x_lo, x_hi) if x_lo < x_hi else (free.x_min + free.x_max) / 2
    y = rng.uniform(y_lo, y_hi) if y_lo < y_hi else (free.y_min + free.y_max) / 2
    return (x, y, radius)


def check_init_consistency(
    definition: ActivityDefinition, taxonomy: Taxonomy, domain: DomainDefinition
) -> None:
    signs: dict[AtomicFormula, bool] = {}
    categories = dict(definition.objects)
    for literal in definition.init:
        seen = signs.get(literal.formula)
        if seen is not None and seen != literal.negated:
            raise InstantiationError(f"contradictory init literals: {literal.formula}")
        signs[literal.formula] = literal.negated
        pred = domain.require(literal.formula.predicate)
        subject = literal.formula.args[0]
        if isinstance(subject, ConstantName) and not taxonomy.applicable(
            pred, categories[subject]
        ):
            raise InstantiationError(
                f"{pred.symbol} is not applicable to {categories[subject]} ({subject})"
            )


def _place_on(state: SceneState, subject: ConstantName, target: ConstantName) -> SceneState:
    top = state.objects[subject]
    base = state.objects[target]
    out = detached(state, subject)
    objects = dict(out.objects)
    objects[subject] = top.moved_to(
        (
            base.position[0],
            base.position[1],
            base.position[2] + base.bounding_radius + top.bounding_radius,
        )
    )
    support = dict(out.support)
    support[subject] = target
    return replace(out, objects=objects, support=support)


def _place_in(state: SceneState, subject: ConstantName, target: ConstantName) -> SceneState:
    inner = state.objects[subject]
    outer = state.objects[target]
    out = detached(state, subject)
    objects = dict(out.objects)
    objects[subject] = inner.moved_to(outer.position)
    containment = dict(out.containment)
    containment[subject] = target
    return replace(out, containment=containment, objects=objects)


def _place_floor(state: SceneState, subject: ConstantName) -> SceneState:
    obj = state.objects[subject]
    out = detached(state, subject)
    objects = dict(out.objects)
    objects[subject] = obj.moved_to((obj.position[0], obj.position[1], obj.bounding_radius))
    return replace(out, objects=objects, on_floor=out.on_floor | {subject})


def _realize_placements(
    state: SceneState, literals: list[Literal], rng: random.Random
) -> SceneState:
    placements: dict[ConstantName, tuple[str, ConstantName | None]] = {}
    order: list[ConstantName] = []
    for literal in literals:
        if literal.negated or literal.formula.predicate not in _PLACEMENT_PREDICATES:
            continue
        subject = literal.formula.args[0]
        target = literal.formula.args[1] if len(literal.formula.args) == 2 else None
        previous = placements.get(subject)
        mode = (literal.formula.predicate, target)
        if previous is not None and previous != mode:
            raise InstantiationError(f"conflicting placements for {subject}")
        if previous is None:
            placements[subject] = mode
            order.append(subject)

    # targets settle before the things placed on or in them
    remaining = dict(placements)
    settled: list[ConstantName] = []
    while remaining:
        progressed = False
        for subject in order:
            if subject not in remaining:
                continue
            _mode, target = remaining[subject]
            if target is None or target not in remaining:
                settled.append(subject)
                del remaining[subject]
                progressed = True
        if not progressed:
            cycle = ", ".join(str(s) for s in sorted(remaining))
            raise InstantiationError(f"cyclic placement dependency among: {cycle}")

    for subject in settled:
        mode, target = placements[subject]
        if mode == "ontop":
            state = _place_on(state, subject, target)
        elif mode == "inside":
            state = _place_in(state, subject, target)
        else:
            state = _place_floor(state, subject)

    # positional adjustments keep whatever placement mode exists
    for literal in literals:
        if literal.negated or literal.formula.predicate not in _POSITIONAL_PREDICATES:
            continue
        subject, target = literal.formula.args
        a = state.objects[subject]
        b = state.objects[target]
        objects = dict(state.objects)
        if literal.formula.predicate == "nextto":
            factor = state.config.nextto_radius_factor
            limit = factor * (a.bounding_radius + b.bounding_radius)
            angle = rng.uniform(0.0, 2.0 * math.pi)
            gap = 0.6 * limit
            position = (
                b.position[0] + gap * math.cos(angle),
                b.position[1] + gap * math.sin(angle),
                a.position[2] if subject in placements else a.bounding_radius,
            )
            objects[subject] = a.moved_to(position)
            state = replace(state, objects=objects)
            if subject not in placements and state.placement_parent(subject) is None:
                state = replace(state, on_floor=state.on_floor | {subject})
        else:  # under
            z = max(a.bounding_radius, b.position[2] - b.bounding_radius - a.bounding_radius)
            objects[subject] = a.moved_to((b.position[0], b.position[1], z))
            state = replace(state, objects=objects)
            if subject not in placements and state.placement_parent(subject) is None:
                state = replace(state, on_floor=state.on_floor | {subject})
    return state


def _apply_unary(state: SceneState, literal: Literal) -> SceneState:
    subject = literal.formula.args[0]
    obj = state.objects[subject]
    ext = obj.ext
    config = state.config
    pred = literal.formula.predicate
    if literal.negated:
        if pred == "cooked" or pred == "burnt":
            ext = replace(ext, temp_max_c=min(ext.temp_max_c, config.ambient_temp_c))
        elif pred == "frozen":
            if ext.temp_c <= obj.thresholds.freeze_c:
                ext = replace(ext, temp_c=config.ambient_temp_c)
        elif pred == "soaked":
            ext = replace(ext, wetness=0.0)
        elif pred == "dusty":
            ext = replace(ext, dust=0.0)
        elif pred == "stained":
            ext = replace(ext, stain=0.0)
        elif pred == "open":
            ext = replace(ext, open=False)
        elif pred == "toggled_on":
            ext = replace(ext, toggled_on=False)
        elif pred == "sliced":
            ext = replace(ext, sliced=False)
    else:
        if pred == "cooked":
            target = obj.thresholds.cook_c + config.cooked_margin_c
            ext = replace(ext, temp_max_c=max(ext.temp_max_c, target))
        elif pred == "burnt":
            target = obj.thresholds.burn_c + config.cooked_margin_c
            ext = replace(ext, temp_max_c=max(ext.temp_max_c, target))
        elif pred == "frozen":
            target = obj.thresholds.freeze_c - config.frozen_margin_c
            ext = replace(ext, temp_c=target, temp_min_c=min(ext.temp_min_c, target))
        elif pred == "soaked":
            ext = replace(ext, wetness=1.0)
        elif pred == "dusty":
            ext = replace(ext, dust=1.0)
        elif pred == "stained":
            ext = replace(ext, stain=1.0)
        elif pred == "open":
            ext = replace(ext, open=True)
        elif pred == "toggled_on":
            ext = replace(ext, toggled_on=True)
        elif pred == "sliced":
            ext = replace(ext, sliced=True)
    objects = dict(state.objects)
    objects[subject] = replace(obj, ext=ext)
    return replace(state, objects=objects)


def instantiate(
    definition: ActivityDefinition,
    scene: SceneManifest,
    taxonomy: Taxonomy,
    domain: DomainDefinition,
    seed: int,
    config: SimConfig | None = None,
) -> InstantiationResult:
    """Realise a definition in a scene; deterministic for a given seed."""
    config = config or SimConfig()
    rng = random.Random(seed)
    state = initial_state(scene, taxonomy, config)
    check_init_consistency(definition, taxonomy, domain)

    constraints = _room_constraints(definition)
    binding = _bind_constrained(definition, constraints, state, scene, taxonomy, rng)

    created: list[ConstantName] = []
    objects = dict(state.objects)
    on_floor = set(state.on_floor)
    for constant, category in definition.objects:
        if constant in binding:
            continue
        scene_id = constant if constant not in objects else _next_free_id(category, set(objects))
        radius = config.default_bounding_radius_m
        obj = make_object(
            scene_id,
            category,
            _spawn_position(scene, radius, rng),
            taxonomy,
            config,
            bounding_radius=radius,
        )
        objects[scene_id] = obj
        on_floor.add(scene_id)
        binding[constant] = scene_id
        created.append(scene_id)
    state = replace(state, objects=objects, on_floor=frozenset(on_floor))

    resolved = [resolve_literal(lit, binding) for lit in definition.init]
    kinematic = [l for l in resolved if l.formula.predicate in _KINEMATIC]
    unary = [l for l in resolved if l.formula.predicate not in _KINEMATIC]

    state = _realize_placements(state, kinematic, rng)
    for literal in sorted(unary, key=lambda l: not l.negated):  # negatives first
        state = _apply_unary(state, literal)

    for literal in resolved:
        try:
            value = eval_atomic(state, literal.formula, taxonomy, domain)
        except InapplicablePredicateError as exc:
            raise InstantiationError(str(exc)) from None
        if value == literal.negated:
            raise InstantiationError(f"init literal {literal} not satisfied after instantiation")
    validate_state(state)
    return InstantiationResult(state=state, binding=binding, created=tuple(created))


# ---------------------------------------------------------------------------
# goal feasibility
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OptionRejection:
    index: int
    reason: str


@dataclass(frozen=True)
class FeasibilityReport:
    feasible: bool
    option_count: int
    consistent: tuple[int, ...]
    rejections: tuple[OptionRejection, ...]
    truncated: bool


def _option_violation(
    option: tuple[Literal, ...],
    categories: dict[ConstantName, CategoryName],
    taxonomy: Taxonomy,
    domain: DomainDefinition,
) -> str | None:
    signs: dict[AtomicFormula, bool] = {}
    for literal in option:
        seen = signs.get(literal.formula)
        if seen is not None and seen != literal.negated:
            return f"contains both {literal.formula} and its negation"
        signs[literal.formula] = literal.negated

    for literal in option:
        pred = domain.lookup(literal.formula.predicate)
        if pred is None:
            return f"unknown predicate {literal.formula.predicate!r}"
        subject = literal.formula.args[0]
        if isinstance(subject, ConstantName):
            category = categories.get(subject)
            if category is not None and not taxonomy.applicable(pred, category):
                return f"{pred.symbol} is not applicable to {category}"

    placements: dict[ConstantName, tuple[str, ConstantName | None]] = {}
    edges: dict[ConstantName, ConstantName] = {}
    for literal in option:
        if literal.negated or literal.formula.predicate not in ("ontop", "inside", "onfloor"):
            continue
        subject = literal.formula.args[0]
        target = literal.formula.args[1] if len(literal.formula.args) == 2 else None
        mode = (literal.formula.predicate, target)
        previous = placements.get(subject)
        if previous is not None and previous != mode:
            return f"conflicting placement of {subject}"
        placements[subject] = mode
        if target is not None:
            edges[subject] = target

    for start in edges:
        cursor = start
        seen: set[ConstantName] = set()
        while cursor in edges:
            if cursor in seen:
                return f"cyclic placement through {cursor}"
            seen.add(cursor)
            cursor = edges[cursor]
    return None


def check_goal_feasibility(
    definition: ActivityDefinition,
    taxonomy: Taxonomy,
    domain: DomainDefinition,
    universe: list[tuple[ConstantName, CategoryName]] | None = None,
    cap: int = DEFAULT_FLATTEN_CAP,
) -> FeasibilityReport:
    """Flatten the goal and reject options no state of the world model
    could satisfy: internal contradictions, inapplicable predicates,
    one object placed directly onto or into two targets, or cyclic
    placements.  Feasible means at least one option survives."""
    if universe is None:
        universe = list(definition.objects)
    opts: GoalOptions = flatten(definition.goal, universe, taxonomy, domain, cap)
    categories = {name: category for name, category in universe}
    consistent: list[int] = []
    rejections: list[OptionRejection] = []
    for index, option in enumerate(opts.options):
        reason = _option_violation(option, categories, taxonomy, domain)
        if reason is None:
            consistent.append(index)
        else:
            rejections.append(OptionRejection(index, reason))
    return FeasibilityReport(
        feasible=bool(consistent),
        option_count=len(opts.options),
        consistent=tuple(consistent),
        rejections=tuple(rejections),
        truncated=opts.truncated,
    )
