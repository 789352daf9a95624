"""Grounded predicate evaluation and fast whole-scene fact snapshots.

``eval_atomic`` judges a single ground formula directly from the state.
``logical_snapshot`` produces the set of every true ground fact over a
universe of constants; it is the per-step workhorse for scoring, so the
pairwise geometric predicates are vectorised with numpy rather than
routed through ``eval_atomic`` one pair at a time.  Tests assert the
two routes agree.

Facts are compact string tuples ``(predicate, arg, ...)`` as produced
by :meth:`AtomicFormula.key`.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from bddlkit.errors import InapplicablePredicateError, WorldError
from bddlkit.syntax.ast import (
    AtomicFormula,
    CategoryName,
    ConstantName,
    DomainDefinition,
    RoomName,
)
from bddlkit.taxonomy import Taxonomy
from bddlkit.world.state import ObjectInstance, SceneState, horizontal_distance

Fact = tuple[str, ...]

_BOOL_FLAGS = {
    "open": "open",
    "toggled_on": "toggled_on",
    "sliced": "sliced",
}


def _level_cutoff(state: SceneState, predicate: str) -> float:
    if predicate == "soaked":
        return state.config.soaked_cutoff
    if predicate == "dusty":
        return state.config.dusty_cutoff
    return state.config.stained_cutoff


def _eval_unary(state: SceneState, predicate: str, obj: ObjectInstance) -> bool:
    if predicate == "cooked":
        return obj.ext.temp_max_c >= obj.thresholds.cook_c
    if predicate == "burnt":
        return obj.ext.temp_max_c >= obj.thresholds.burn_c
    if predicate == "frozen":
        return obj.ext.temp_c <= obj.thresholds.freeze_c
    if predicate in ("soaked", "dusty", "stained"):
        level = {"soaked": obj.ext.wetness, "dusty": obj.ext.dust, "stained": obj.ext.stain}
        return level[predicate] >= _level_cutoff(state, predicate)
    if predicate in _BOOL_FLAGS:
        return getattr(obj.ext, _BOOL_FLAGS[predicate])
    if predicate == "onfloor":
        return obj.name in state.on_floor
    raise WorldError(f"no evaluation rule for unary predicate {predicate!r}")


def _nextto_limit(state: SceneState, a: ObjectInstance, b: ObjectInstance) -> float:
    factor = state.config.nextto_radius_factor
    return factor * a.bounding_radius + factor * b.bounding_radius


def _eval_binary(state: SceneState, predicate: str, a: ObjectInstance, b: ObjectInstance) -> bool:
    if a.name == b.name:
        # no kinematic relation of an object with itself
        return False
    if predicate == "ontop":
        return state.support.get(a.name) == b.name
    if predicate == "inside":
        return b.name in state.containment_chain(a.name)
    if predicate == "nextto":
        return horizontal_distance(a.position, b.position) <= _nextto_limit(state, a, b)
    if predicate == "under":
        return (
            horizontal_distance(a.position, b.position) <= b.bounding_radius
            and a.position[2] < b.position[2]
            and b.name not in state.support_chain(a.name)
        )
    raise WorldError(f"no evaluation rule for binary predicate {predicate!r}")


def eval_atomic(
    state: SceneState,
    formula: AtomicFormula,
    taxonomy: Taxonomy,
    domain: DomainDefinition,
) -> bool:
    """Evaluate one ground atomic formula against the state.

    Raises :class:`InapplicablePredicateError` when the predicate's
    required property is missing from the argument's category; that is
    deliberately not the same as returning False.
    """
    pred = domain.lookup(formula.predicate)
    if pred is None:
        raise WorldError(f"unknown predicate symbol {formula.predicate!r}")
    if not formula.is_ground:
        raise WorldError(f"cannot evaluate a non-ground formula: {formula}")

    first = formula.args[0]
    if not isinstance(first, ConstantName):
        raise WorldError(f"first argument of {formula} must be a constant")
    obj = state.require(first)
    if not taxonomy.applicable(pred, obj.category):
        raise InapplicablePredicateError(
            f"{pred.symbol} is not applicable to {obj.category} "
            f"(requires property {pred.required_property!r})"
        )

    if pred.symbol == "inroom":
        room = formula.args[1]
        if not isinstance(room, RoomName):
            raise WorldError(f"second argument of inroom must be a room: {formula}")
        region = state.rooms.get(room.name)
        if region is None:
            raise WorldError(f"unknown room: {room.name}")
        return region.contains(obj.position[0], obj.position[1])

    if pred.arity == 1:
        return _eval_unary(state, pred.symbol, obj)

    second = formula.args[1]
    if not isinstance(second, ConstantName):
        raise WorldError(f"second argument of {formula} must be a constant")
    return _eval_binary(state, pred.symbol, obj, state.require(second))


# ---------------------------------------------------------------------------
# whole-scene snapshots
# ---------------------------------------------------------------------------


def _universe_objects(
    state: SceneState,
    universe: Iterable[tuple[ConstantName, CategoryName]] | None,
) -> list[ObjectInstance]:
    if universe is None:
        return list(state.objects.values())
    seen: set[ConstantName] = set()
    out: list[ObjectInstance] = []
    for name, _category in universe:
        if name in seen:
            continue
        seen.add(name)
        out.append(state.require(name))
    return out


def logical_snapshot(
    state: SceneState,
    universe: Sequence[tuple[ConstantName, CategoryName]] | None,
    taxonomy: Taxonomy,
    domain: DomainDefinition,
) -> frozenset[Fact]:
    """Every true ground fact over the universe's constants.

    ``universe`` is the activity's (constant, category) list; None means
    the whole scene.  Binary predicates range over ordered pairs of
    distinct constants, ``inroom`` over constants times rooms.
    Predicates that do not apply to a constant's category simply
    contribute no facts.
    """
    objs = _universe_objects(state, universe)
    names = [str(o.name) for o in objs]
    members = {o.name for o in objs}
    facts: set[Fact] = set()

    unary = [p for p in domain.predicates if p.arity == 1]
    binary = [p for p in domain.predicates if p.arity == 2]

    for pred in unary:
        for obj, name in zip(objs, names):
            if not taxonomy.applicable(pred, obj.category):
                continue
            if _eval_unary(state, pred.symbol, obj):
                facts.add((pred.symbol, name))

    has_inroom = any(p.symbol == "inroom" for p in binary)
    if has_inroom:
        for obj, name in zip(objs, names):
            for room_name, region in state.rooms.items():
                if region.contains(obj.position[0], obj.position[1]):
                    facts.add(("inroom", name, room_name))

    graph_preds = {p.symbol for p in binary if p.symbol in ("ontop", "inside")}
    if "ontop" in graph_preds:
        for child, parent in state.support.items():
            if child in members and parent in members:
                facts.add(("ontop", str(child), str(parent)))
    if "inside" in graph_preds:
        for obj in objs:
            for container in state.containment_chain(obj.name):
                if container in members:
                    facts.add(("inside", str(obj.name), str(container)))

    wants_nextto = any(p.symbol == "nextto" for p in binary)
    wants_under = any(p.symbol == "under" for p in binary)
    if (wants_nextto or wants_under) and len(objs) > 1:
        pos = np.array([o.position for o in objs], dtype=float)
        rad = np.array([o.bounding_radius for o in objs], dtype=float)
        dxy = np.hypot(
            pos[:, 0, None] - pos[None, :, 0],
            pos[:, 1, None] - pos[None, :, 1],
        )
        off_diagonal = ~np.eye(len(objs), dtype=bool)
        if wants_nextto:
            factor = state.config.nextto_radius_factor
            mask = (dxy <= factor * (rad[:, None] + rad[None, :])) & off_diagonal
            for i, j in np.argwhere(mask):
                facts.add(("nextto", names[i], names[j]))
        if wants_under:
            mask = (
                (dxy <= rad[None, :])
                & (pos[:, 2, None] < pos[None, :, 2])
                & off_diagonal
            )
            for i, j in np.argwhere(mask):
                # an object is not under anything it rests on
                if objs[j].name in state.support_chain(objs[i].name):
                    continue
                facts.add(("under", names[i], names[j]))

    return frozenset(facts)
