"""Success score and efficiency metrics over trajectory logs.

The success score Q of a record is the best fraction of satisfied
literals over the goal's options.  The efficiency metrics are all
lower-is-better:

===================  ======================================================
T_sim_s              simulated steps times the average step duration
D_K_accumulated_m    object displacement summed over consecutive records
D_K_differential_m   per-object displacement between first and last record
D_L_accumulated      fact flips summed over consecutive records
D_L_differential     size of first-vs-last fact set symmetric difference
L_body_m             distance covered by the agent's body
L_left_m, L_right_m  hand travel while the hand is in contact with an object
===================  ======================================================

Kinematic disarrangement counts every non-agent object, held ones
included: nothing moves in this world unless the agent moves it.  Hand
travel over a step counts only when the hand has a contact object in
both of that step's endpoint records.  Fact sets are restricted to the
activity's bound objects, so logical disarrangement is computable.

Normalization against human baselines reports, per metric, the best
(lowest) human cost divided by the agent's cost: 1.0 is human parity
and larger is better than human.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, replace

from bddlkit.config import SimConfig
from bddlkit.errors import ScoringError
from bddlkit.logic import GoalOptions, Option, flatten
from bddlkit.sampler import bound_universe, resolve_goal
from bddlkit.scoring.trajectory import LogRecord, TrajectoryLog, state_from_record
from bddlkit.syntax.ast import ActivityDefinition, ConstantName, DomainDefinition
from bddlkit.taxonomy import Taxonomy
from bddlkit.world.predicates import Fact, logical_snapshot
from bddlkit.world.state import distance

NORMALIZED_METRICS = (
    "T_sim_s",
    "D_K_accumulated_m",
    "D_L_accumulated",
    "L_body_m",
    "L_left_m",
    "L_right_m",
)


@dataclass(frozen=True)
class MetricsReport:
    q_final: float
    q_series: tuple[float, ...]
    t_sim_s: float
    d_k_accumulated_m: float
    d_k_differential_m: float
    d_l_accumulated: int
    d_l_differential: int
    l_body_m: float
    l_left_m: float
    l_right_m: float
    normalized: dict[str, float] | None = None

    def __post_init__(self):
        if not 0.0 <= self.q_final <= 1.0:
            raise ScoringError(f"q_final outside [0, 1]: {self.q_final}")
        for q in self.q_series:
            if not 0.0 <= q <= 1.0:
                raise ScoringError(f"q_series value outside [0, 1]: {q}")
        if self.d_k_differential_m > self.d_k_accumulated_m + 1e-9:
            raise ScoringError("kinematic differential exceeds accumulated")
        if self.d_l_differential > self.d_l_accumulated:
            raise ScoringError("logical differential exceeds accumulated")


def success_score(opts: GoalOptions | Sequence[Option], facts: Iterable[Fact]) -> float:
    """Best fraction of satisfied literals over the goal options.

    A positive literal is satisfied when its formula is among ``facts``,
    a negated one when it is not.
    """
    options = opts.options if isinstance(opts, GoalOptions) else tuple(opts)
    if not options:
        raise ScoringError("cannot score a goal with no options")
    fact_set = facts if isinstance(facts, (set, frozenset)) else frozenset(facts)
    best = 0.0
    for option in options:
        if not option:
            raise ScoringError("cannot score an empty goal option")
        satisfied = sum(
            1 for literal in option if (literal.formula.key() in fact_set) != literal.negated
        )
        best = max(best, satisfied / len(option))
    return best


def _record_facts(
    log: TrajectoryLog,
    record: LogRecord,
    universe,
    taxonomy: Taxonomy,
    domain: DomainDefinition,
    config: SimConfig,
    force_recompute: bool,
) -> frozenset[Fact]:
    if record.facts is not None and not force_recompute:
        return record.facts
    state = state_from_record(log.header, record, config)
    return logical_snapshot(state, universe, taxonomy, domain)


def score_trajectory(
    log: TrajectoryLog,
    definition: ActivityDefinition,
    taxonomy: Taxonomy,
    domain: DomainDefinition,
    opts: GoalOptions | None = None,
    config: SimConfig | None = None,
    force_recompute: bool = False,
) -> MetricsReport:
    """Score one log in a single forward pass.

    The goal is resolved through the header's binding and flattened
    against the bound universe unless pre-flattened options are given.
    """
    config = config or SimConfig()
    if not log.records:
        raise ScoringError("log has no records")
    binding = {
        ConstantName.parse(k): ConstantName.parse(v) for k, v in log.header.binding.items()
    }
    universe = bound_universe(definition, binding)
    for name, _category in universe:
        if str(name) not in log.header.objects:
            raise ScoringError(f"activity object {name} does not appear in the log")
    if opts is None:
        goal = resolve_goal(definition.goal, binding)
        opts = flatten(goal, universe, taxonomy, domain, config.flatten_cap)

    object_ids = sorted(log.header.objects)
    q_series: list[float] = []
    d_k_accumulated = 0.0
    d_l_accumulated = 0
    l_body = 0.0
    l_left = 0.0
    l_right = 0.0
    first = log.records[0]
    first_facts: frozenset[Fact] | None = None
    previous: LogRecord | None = None
    previous_facts: frozenset[Fact] | None = None
    for record in log.records:
        facts = _record_facts(log, record, universe, taxonomy, domain, config, force_recompute)
        q_series.append(success_score(opts, facts))
        if first_facts is None:
            first_facts = facts
        if previous is not None:
            for name in object_ids:
                d_k_accumulated += distance(record.objects[name].pos, previous.objects[name].pos)
            d_l_accumulated += len(facts ^ previous_facts)
            l_body += distance(record.body, previous.body)
            if record.left_contact is not None and previous.left_contact is not None:
                l_left += distance(record.left_hand, previous.left_hand)
            if record.right_contact is not None and previous.right_contact is not None:
                l_right += distance(record.right_hand, previous.right_hand)
        previous = record
        previous_facts = facts

    last = log.records[-1]
    d_k_differential = sum(
        distance(last.objects[name].pos, first.objects[name].pos) for name in object_ids
    )
    d_l_differential = len(first_facts ^ previous_facts)
    t_sim = (len(log.records) - 1) * log.header.step_duration_s
    return MetricsReport(
        q_final=q_series[-1],
        q_series=tuple(q_series),
        t_sim_s=t_sim,
        d_k_accumulated_m=d_k_accumulated,
        d_k_differential_m=d_k_differential,
        d_l_accumulated=d_l_accumulated,
        d_l_differential=d_l_differential,
        l_body_m=l_body,
        l_left_m=l_left,
        l_right_m=l_right,
    )


def _metric_value(report: MetricsReport, metric: str) -> float:
    attr = {
        "T_sim_s": "t_sim_s",
        "D_K_accumulated_m": "d_k_accumulated_m",
        "D_K_differential_m": "d_k_differential_m",
        "D_L_accumulated": "d_l_accumulated",
        "D_L_differential": "d_l_differential",
        "L_body_m": "l_body_m",
        "L_left_m": "l_left_m",
        "L_right_m": "l_right_m",
    }[metric]
    return float(getattr(report, attr))


def normalize_to_human(
    report: MetricsReport,
    baselines: Sequence[MetricsReport],
    config: SimConfig | None = None,
) -> dict[str, float]:
    """Per-metric ratio of the best human cost to the agent's cost.

    Only successful baselines (q_final = 1.0) count.  A zero agent cost
    against a nonzero human one is capped at ``normalize_ratio_cap``;
    zero against zero is parity.
    """
    config = config or SimConfig()
    successful = [b for b in baselines if b.q_final == 1.0]
    if not successful:
        raise ScoringError("normalization needs at least one successful baseline")
    out: dict[str, float] = {}
    for metric in NORMALIZED_METRICS:
        values = [_metric_value(b, metric) for b in successful]
        human = min(values) if config.normalize_best == "min" else sum(values) / len(values)
        agent = _metric_value(report, metric)
        if agent == 0.0:
            out[metric] = 1.0 if human == 0.0 else config.normalize_ratio_cap
        else:
            out[metric] = human / agent
    return out


def with_normalization(
    report: MetricsReport,
    baselines: Sequence[MetricsReport],
    config: SimConfig | None = None,
) -> MetricsReport:
    return replace(report, normalized=normalize_to_human(report, baselines, config))


# ---------------------------------------------------------------------------
# report rendering
# ---------------------------------------------------------------------------


def _fmt(value: float) -> str:
    return repr(float(value))


def machine_report(report: MetricsReport) -> str:
    """Flat key=value table, one metric per line, byte-stable."""
    lines = [
        f"q_final={_fmt(report.q_final)}",
        "q_series=" + ",".join(_fmt(q) for q in report.q_series),
        f"T_sim_s={_fmt(report.t_sim_s)}",
        f"D_K_accumulated_m={_fmt(report.d_k_accumulated_m)}",
        f"D_K_differential_m={_fmt(report.d_k_differential_m)}",
        f"D_L_accumulated={report.d_l_accumulated}",
        f"D_L_differential={report.d_l_differential}",
        f"L_body_m={_fmt(report.l_body_m)}",
        f"L_left_m={_fmt(report.l_left_m)}",
        f"L_right_m={_fmt(report.l_right_m)}",
    ]
    if report.normalized is not None:
        for metric in NORMALIZED_METRICS:
            lines.append(f"normalized.{metric}={_fmt(report.normalized[metric])}")
    return "\n".join(lines) + "\n"


def human_report(report: MetricsReport) -> str:
    lines = [
        f"success score:            {report.q_final:.4f}",
        "score over time:          " + " ".join(f"{q:.2f}" for q in report.q_series),
        f"time in simulation:       {report.t_sim_s:.2f} s",
        f"kinematic disarrangement: {report.d_k_accumulated_m:.3f} m accumulated, "
        f"{report.d_k_differential_m:.3f} m differential",
        f"logical disarrangement:   {report.d_l_accumulated} flips accumulated, "
        f"{report.d_l_differential} differential",
        f"body travel:              {report.l_body_m:.3f} m",
        f"hand travel in contact:   {report.l_left_m:.3f} m left, {report.l_right_m:.3f} m right",
    ]
    if report.normalized is not None:
        lines.append("relative to best human (1.0 = parity, higher is better):")
        for metric in NORMALIZED_METRICS:
            lines.append(f"  {metric}: {report.normalized[metric]:.3f}")
    return "\n".join(lines) + "\n"
