"""Trajectory logs: newline-delimited JSON, one snapshot per line.

The first line is a header object::

    {"log_version": 1, "activity": ..., "scene": ..., "seed": ...,
     "step_duration_s": <average seconds per step>,
     "rooms": {name: [x_min, y_min, x_max, y_max]},
     "binding": {activity constant: scene object id},
     "objects": {id: {"category", "radius", "fixed", "cook_c", "burn_c",
                      "freeze_c", "source_temp_c", "water_source"}}}

Every following line is one record::

    {"step": int, "clock_s": float,
     "agent": {"body": [x, y, z, yaw], "left_hand": [...], "right_hand": [...],
               "left_held", "right_held", "left_contact", "right_contact"},
     "objects": {id: {"pos": [x, y, z], "yaw", "temp_c", "temp_max_c",
                      "temp_min_c", "wetness", "dust", "stain",
                      "toggled_on", "open", "sliced"}},
     "support": {child: parent}, "containment": {child: parent},
     "on_floor": [ids], "facts": [[predicate, args...], ...]?}

Units are meters, seconds and degrees Celsius; yaw is radians.  ``facts``
is an optional cache of the record's true ground formulas.  Step indices
must be strictly increasing and clocks non-decreasing; every record must
describe exactly the objects declared in the header.  Violations raise
:class:`LogError` naming the offending record.

All dictionaries are emitted with sorted keys, so a log is a pure
function of its contents and safe to compare byte-for-byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from bddlkit.config import SimConfig
from bddlkit.errors import LogError
from bddlkit.syntax.ast import CategoryName, ConstantName
from bddlkit.world.predicates import Fact
from bddlkit.world.state import (
    AgentState,
    ExtendedState,
    ObjectInstance,
    Pose,
    Region,
    SceneState,
    Thresholds,
    Vec3,
)

LOG_VERSION = 1


@dataclass(frozen=True)
class StaticObject:
    """Per-object facts that never change over a trajectory."""

    category: str
    radius: float
    fixed: bool
    cook_c: float
    burn_c: float
    freeze_c: float
    source_temp_c: float | None
    water_source: bool


@dataclass(frozen=True)
class LogHeader:
    activity: str
    scene: str
    seed: int
    step_duration_s: float
    rooms: dict[str, tuple[float, float, float, float]]
    binding: dict[str, str]
    objects: dict[str, StaticObject]
    version: int = LOG_VERSION


@dataclass(frozen=True)
class ObjectRecord:
    pos: Vec3
    yaw: float
    temp_c: float
    temp_max_c: float
    temp_min_c: float
    wetness: float
    dust: float
    stain: float
    toggled_on: bool
    open: bool
    sliced: bool


@dataclass(frozen=True)
class LogRecord:
    step: int
    clock_s: float
    body: Vec3
    body_yaw: float
    left_hand: Vec3
    right_hand: Vec3
    left_held: str | None
    right_held: str | None
    left_contact: str | None
    right_contact: str | None
    objects: dict[str, ObjectRecord]
    support: dict[str, str]
    containment: dict[str, str]
    on_floor: frozenset[str]
    facts: frozenset[Fact] | None = None


@dataclass(frozen=True)
class TrajectoryLog:
    header: LogHeader
    records: tuple[LogRecord, ...]


# ---------------------------------------------------------------------------
# building logs from scene states
# ---------------------------------------------------------------------------


def static_table(state: SceneState) -> dict[str, StaticObject]:
    out = {}
    for name in sorted(state.objects, key=str):
        obj = state.objects[name]
        out[str(name)] = StaticObject(
            category=str(obj.category),
            radius=obj.bounding_radius,
            fixed=obj.fixed,
            cook_c=obj.thresholds.cook_c,
            burn_c=obj.thresholds.burn_c,
            freeze_c=obj.thresholds.freeze_c,
            source_temp_c=obj.source_temp_c,
            water_source=obj.water_source,
        )
    return out


def snapshot_record(state: SceneState, step: int, facts: frozenset[Fact] | None = None) -> LogRecord:
    agent = state.agent
    objects = {}
    for name in sorted(state.objects, key=str):
        obj = state.objects[name]
        objects[str(name)] = ObjectRecord(
            pos=obj.position,
            yaw=obj.yaw,
            temp_c=obj.ext.temp_c,
            temp_max_c=obj.ext.temp_max_c,
            temp_min_c=obj.ext.temp_min_c,
            wetness=obj.ext.wetness,
            dust=obj.ext.dust,
            stain=obj.ext.stain,
            toggled_on=obj.ext.toggled_on,
            open=obj.ext.open,
            sliced=obj.ext.sliced,
        )
    return LogRecord(
        step=step,
        clock_s=state.clock_s,
        body=agent.body.position,
        body_yaw=agent.body.yaw,
        left_hand=agent.left_hand.position,
        right_hand=agent.right_hand.position,
        left_held=None if agent.left_held is None else str(agent.left_held),
        right_held=None if agent.right_held is None else str(agent.right_held),
        left_contact=None if agent.left_contact is None else str(agent.left_contact),
        right_contact=None if agent.right_contact is None else str(agent.right_contact),
        objects=objects,
        support={str(c): str(p) for c, p in state.support.items()},
        containment={str(c): str(p) for c, p in state.containment.items()},
        on_floor=frozenset(str(n) for n in state.on_floor),
        facts=facts,
    )


class LogWriter:
    """Collects snapshots, then writes the whole log at once.

    The header's ``step_duration_s`` is the average over the recorded
    steps, which is only known at the end, so records are buffered.
    """

    def __init__(self, activity: str, scene: str, seed: int, state: SceneState,
                 binding: dict[str, str] | None = None):
        self._activity = activity
        self._scene = scene
        self._seed = seed
        self._rooms = {name: region.bounds() for name, region in sorted(state.rooms.items())}
        self._binding = dict(sorted((binding or {}).items()))
        self._static = static_table(state)
        self._records: list[LogRecord] = []

    def record(self, state: SceneState, facts: frozenset[Fact] | None = None) -> None:
        self._records.append(snapshot_record(state, len(self._records), facts))

    def build(self) -> TrajectoryLog:
        records = self._records
        if len(records) >= 2:
            span = records[-1].clock_s - records[0].clock_s
            step_duration = span / (len(records) - 1)
        else:
            step_duration = 0.0
        header = LogHeader(
            activity=self._activity,
            scene=self._scene,
            seed=self._seed,
            step_duration_s=step_duration,
            rooms=self._rooms,
            binding=self._binding,
            objects=self._static,
        )
        return TrajectoryLog(header=header, records=tuple(records))


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def _floats(values) -> list[float]:
    return [float(v) for v in values]


def _header_json(header: LogHeader) -> dict:
    # numbers are forced to float so a dump is byte-identical no matter
    # whether the in-memory state carried ints
    return {
        "log_version": header.version,
        "activity": header.activity,
        "scene": header.scene,
        "seed": header.seed,
        "step_duration_s": float(header.step_duration_s),
        "rooms": {name: _floats(bounds) for name, bounds in sorted(header.rooms.items())},
        "binding": dict(sorted(header.binding.items())),
        "objects": {
            name: {
                "category": static.category,
                "radius": float(static.radius),
                "fixed": static.fixed,
                "cook_c": float(static.cook_c),
                "burn_c": float(static.burn_c),
                "freeze_c": float(static.freeze_c),
                "source_temp_c": None if static.source_temp_c is None else float(static.source_temp_c),
                "water_source": static.water_source,
            }
            for name, static in sorted(header.objects.items())
        },
    }


def _record_json(record: LogRecord) -> dict:
    out = {
        "step": record.step,
        "clock_s": float(record.clock_s),
        "agent": {
            "body": _floats([*record.body, record.body_yaw]),
            "left_hand": _floats([*record.left_hand, record.body_yaw]),
            "right_hand": _floats([*record.right_hand, record.body_yaw]),
            "left_held": record.left_held,
            "right_held": record.right_held,
            "left_contact": record.left_contact,
            "right_contact": record.right_contact,
        },
        "objects": {
            name: {
                "pos": _floats(obj.pos),
                "yaw": float(obj.yaw),
                "temp_c": float(obj.temp_c),
                "temp_max_c": float(obj.temp_max_c),
                "temp_min_c": float(obj.temp_min_c),
                "wetness": float(obj.wetness),
                "dust": float(obj.dust),
                "stain": float(obj.stain),
                "toggled_on": obj.toggled_on,
                "open": obj.open,
                "sliced": obj.sliced,
            }
            for name, obj in sorted(record.objects.items())
        },
        "support": dict(sorted(record.support.items())),
        "containment": dict(sorted(record.containment.items())),
        "on_floor": sorted(record.on_floor),
    }
    if record.facts is not None:
        out["facts"] = sorted(list(fact) for fact in record.facts)
    return out


def dump_log(log: TrajectoryLog) -> str:
    lines = [json.dumps(_header_json(log.header), separators=(", ", ": "))]
    for record in log.records:
        lines.append(json.dumps(_record_json(record), separators=(", ", ": ")))
    return "\n".join(lines) + "\n"


def write_log(log: TrajectoryLog, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(dump_log(log))


# ---------------------------------------------------------------------------
# parsing and validation
# ---------------------------------------------------------------------------


def _need(mapping: dict, key: str, kinds, where: str):
    if key not in mapping:
        raise LogError(f"{where}: missing field {key!r}")
    value = mapping[key]
    if kinds is not None and not isinstance(value, kinds):
        raise LogError(f"{where}: field {key!r} has wrong type")
    if isinstance(value, bool) and kinds is not None and bool not in _as_tuple(kinds):
        raise LogError(f"{where}: field {key!r} has wrong type")
    return value


def _as_tuple(kinds):
    return kinds if isinstance(kinds, tuple) else (kinds,)


_NUM = (int, float)


def _vec(values, length: int, where: str) -> tuple[float, ...]:
    if not isinstance(values, list) or len(values) != length:
        raise LogError(f"{where}: expected a list of {length} numbers")
    for v in values:
        if isinstance(v, bool) or not isinstance(v, _NUM):
            raise LogError(f"{where}: expected a list of {length} numbers")
    return tuple(float(v) for v in values)


def _opt_str(mapping: dict, key: str, where: str) -> str | None:
    value = _need(mapping, key, (str, type(None)), where)
    return value


def _parse_header(data, where: str) -> LogHeader:
    if not isinstance(data, dict):
        raise LogError(f"{where}: header must be an object")
    version = _need(data, "log_version", int, where)
    if version != LOG_VERSION:
        raise LogError(f"{where}: unsupported log_version {version}")
    rooms_raw = _need(data, "rooms", dict, where)
    rooms = {name: _vec(bounds, 4, f"{where}: room {name!r}") for name, bounds in rooms_raw.items()}
    binding_raw = _need(data, "binding", dict, where)
    for key, value in binding_raw.items():
        if not isinstance(value, str):
            raise LogError(f"{where}: binding for {key!r} must be a string")
    objects_raw = _need(data, "objects", dict, where)
    objects = {}
    for name, entry in objects_raw.items():
        if not isinstance(entry, dict):
            raise LogError(f"{where}: object {name!r} must be an object")
        sub = f"{where}: object {name!r}"
        source = _need(entry, "source_temp_c", (int, float, type(None)), sub)
        objects[name] = StaticObject(
            category=_need(entry, "category", str, sub),
            radius=float(_need(entry, "radius", _NUM, sub)),
            fixed=_need(entry, "fixed", bool, sub),
            cook_c=float(_need(entry, "cook_c", _NUM, sub)),
            burn_c=float(_need(entry, "burn_c", _NUM, sub)),
            freeze_c=float(_need(entry, "freeze_c", _NUM, sub)),
            source_temp_c=None if source is None else float(source),
            water_source=_need(entry, "water_source", bool, sub),
        )
    return LogHeader(
        activity=_need(data, "activity", str, where),
        seed=_need(data, "seed", int, where),
        scene=_need(data, "scene", str, where),
        step_duration_s=float(_need(data, "step_duration_s", _NUM, where)),
        rooms=rooms,
        binding=dict(binding_raw),
        objects=objects,
    )


def _parse_record(data, known: set[str], where: str) -> LogRecord:
    if not isinstance(data, dict):
        raise LogError(f"{where}: record must be an object")
    agent = _need(data, "agent", dict, where)
    body = _vec(_need(agent, "body", list, where), 4, f"{where}: agent body")
    left = _vec(_need(agent, "left_hand", list, where), 4, f"{where}: left hand")
    right = _vec(_need(agent, "right_hand", list, where), 4, f"{where}: right hand")

    objects_raw = _need(data, "objects", dict, where)
    if set(objects_raw) != known:
        unknown = sorted(set(objects_raw) - known)
        missing = sorted(known - set(objects_raw))
        if unknown:
            raise LogError(f"{where}: unknown object id {unknown[0]!r}")
        raise LogError(f"{where}: missing object id {missing[0]!r}")
    objects = {}
    for name, entry in objects_raw.items():
        if not isinstance(entry, dict):
            raise LogError(f"{where}: object {name!r} must be an object")
        sub = f"{where}: object {name!r}"
        objects[name] = ObjectRecord(
            pos=_vec(_need(entry, "pos", list, sub), 3, sub),
            yaw=float(_need(entry, "yaw", _NUM, sub)),
            temp_c=float(_need(entry, "temp_c", _NUM, sub)),
            temp_max_c=float(_need(entry, "temp_max_c", _NUM, sub)),
            temp_min_c=float(_need(entry, "temp_min_c", _NUM, sub)),
            wetness=float(_need(entry, "wetness", _NUM, sub)),
            dust=float(_need(entry, "dust", _NUM, sub)),
            stain=float(_need(entry, "stain", _NUM, sub)),
            toggled_on=_need(entry, "toggled_on", bool, sub),
            open=_need(entry, "open", bool, sub),
            sliced=_need(entry, "sliced", bool, sub),
        )

    def edge_map(key: str) -> dict[str, str]:
        raw = _need(data, key, dict, where)
        for child, parent in raw.items():
            if child not in known:
                raise LogError(f"{where}: unknown object id {child!r} in {key}")
            if not isinstance(parent, str) or parent not in known:
                raise LogError(f"{where}: unknown object id {parent!r} in {key}")
        return dict(raw)

    floor_raw = _need(data, "on_floor", list, where)
    for name in floor_raw:
        if name not in known:
            raise LogError(f"{where}: unknown object id {name!r} in on_floor")

    for key in ("left_held", "right_held", "left_contact", "right_contact"):
        value = _opt_str(agent, key, where)
        if value is not None and value not in known:
            raise LogError(f"{where}: unknown object id {value!r} in agent.{key}")

    facts = None
    if "facts" in data:
        raw = data["facts"]
        if not isinstance(raw, list):
            raise LogError(f"{where}: facts must be a list")
        parsed = []
        for item in raw:
            if not isinstance(item, list) or not item or not all(isinstance(p, str) for p in item):
                raise LogError(f"{where}: each fact must be a list of strings")
            parsed.append(tuple(item))
        facts = frozenset(parsed)

    return LogRecord(
        step=_need(data, "step", int, where),
        clock_s=float(_need(data, "clock_s", _NUM, where)),
        body=body[:3],
        body_yaw=body[3],
        left_hand=left[:3],
        right_hand=right[:3],
        left_held=agent["left_held"],
        right_held=agent["right_held"],
        left_contact=agent["left_contact"],
        right_contact=agent["right_contact"],
        objects=objects,
        support=edge_map("support"),
        containment=edge_map("containment"),
        on_floor=frozenset(floor_raw),
        facts=facts,
    )


def parse_log(text: str) -> TrajectoryLog:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise LogError("empty log: header line missing")

    def load(line: str, where: str):
        try:
            return json.loads(line)
        except json.JSONDecodeError as exc:
            raise LogError(f"{where}: invalid JSON ({exc.msg})") from None

    header = _parse_header(load(lines[0], "header"), "header")
    known = set(header.objects)
    records = []
    previous: LogRecord | None = None
    for index, line in enumerate(lines[1:]):
        where = f"record {index}"
        record = _parse_record(load(line, where), known, where)
        if previous is not None:
            if record.step <= previous.step:
                raise LogError(
                    f"{where}: step {record.step} not greater than {previous.step}"
                )
            if record.clock_s < previous.clock_s:
                raise LogError(f"{where}: clock went backwards")
        records.append(record)
        previous = record
    return TrajectoryLog(header=header, records=tuple(records))


def read_log(path) -> TrajectoryLog:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_log(handle.read())


# ---------------------------------------------------------------------------
# reconstructing world states
# ---------------------------------------------------------------------------


def state_from_record(header: LogHeader, record: LogRecord, config: SimConfig) -> SceneState:
    """Materialise a full world state so facts can be recomputed."""
    objects = {}
    for name, static in header.objects.items():
        snap = record.objects[name]
        constant = ConstantName.parse(name)
        objects[constant] = ObjectInstance(
            name=constant,
            category=CategoryName.parse(static.category),
            position=snap.pos,
            yaw=snap.yaw,
            bounding_radius=static.radius,
            thresholds=Thresholds(static.cook_c, static.burn_c, static.freeze_c),
            ext=ExtendedState(
                temp_c=snap.temp_c,
                temp_max_c=snap.temp_max_c,
                temp_min_c=snap.temp_min_c,
                wetness=snap.wetness,
                dust=snap.dust,
                stain=snap.stain,
                toggled_on=snap.toggled_on,
                open=snap.open,
                sliced=snap.sliced,
            ),
            fixed=static.fixed,
            source_temp_c=static.source_temp_c,
            water_source=static.water_source,
        )
    rooms = {
        name: Region(bounds[0], bounds[1], bounds[2], bounds[3])
        for name, bounds in header.rooms.items()
    }
    opt = lambda value: None if value is None else ConstantName.parse(value)
    agent = AgentState(
        body=Pose(record.body, record.body_yaw),
        left_hand=Pose(record.left_hand, record.body_yaw),
        right_hand=Pose(record.right_hand, record.body_yaw),
        left_held=opt(record.left_held),
        right_held=opt(record.right_held),
        left_contact=opt(record.left_contact),
        right_contact=opt(record.right_contact),
    )
    return SceneState(
        objects=objects,
        rooms=rooms,
        support={ConstantName.parse(c): ConstantName.parse(p) for c, p in record.support.items()},
        containment={
            ConstantName.parse(c): ConstantName.parse(p) for c, p in record.containment.items()
        },
        on_floor=frozenset(ConstantName.parse(n) for n in record.on_floor),
        agent=agent,
        config=config,
        clock_s=record.clock_s,
    )
