"""bddlkit: author, check, instantiate, and score household activities
written in the BEHAVIOR domain definition language.

The package ships a reference predicate domain, an object taxonomy, a
kitchen scene, and a handful of activity definitions under
``bddlkit/data``; the ``standard_*`` helpers load them.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from bddlkit.config import SimConfig, load_config
from bddlkit.errors import (
    BddlError,
    BddlParseError,
    FeasibilityError,
    InapplicablePredicateError,
    InstantiationError,
    LogError,
    PrimitiveFailure,
    ScoringError,
    TaxonomyError,
    WorldError,
)
from bddlkit.logic import (
    DEFAULT_FLATTEN_CAP,
    GoalOptions,
    activity_volume,
    evaluate,
    flatten,
    maximum_matching_size,
    substitute,
)
from bddlkit.sampler import (
    FeasibilityReport,
    InstantiationResult,
    OptionRejection,
    bound_universe,
    check_goal_feasibility,
    instantiate,
    resolve_goal,
    resolve_literal,
)
from bddlkit.scoring import (
    LogWriter,
    MetricsReport,
    TrajectoryLog,
    dump_log,
    human_report,
    machine_report,
    normalize_to_human,
    parse_log,
    read_log,
    score_trajectory,
    success_score,
    with_normalization,
    write_log,
)
from bddlkit.syntax import (
    ActivityDefinition,
    AtomicFormula,
    CategoryName,
    ConstantName,
    DomainDefinition,
    Expr,
    Literal,
    PredicateDef,
    RoomName,
    VariableName,
    format_expr,
    format_literal,
    parse_domain,
    parse_problem,
    print_canonical,
)
from bddlkit.taxonomy import Synset, Taxonomy, load_taxonomy
from bddlkit.world import (
    SceneManifest,
    SceneState,
    advance_dynamics,
    apply_primitive,
    eval_atomic,
    initial_state,
    load_manifest,
    logical_snapshot,
    make_object,
    parse_script,
    step_processes,
)

__version__ = "0.1.0"


def data_path(*parts: str) -> Path:
    """Filesystem path of a packaged data file, e.g.
    ``data_path("activities", "packing_lunches.bddl")``."""
    root = resources.files("bddlkit") / "data"
    for part in parts:
        root = root / part
    return Path(str(root))


def standard_domain() -> DomainDefinition:
    return parse_domain(data_path("domain_igibson.bddl").read_text())


def standard_taxonomy() -> Taxonomy:
    return load_taxonomy(data_path("taxonomy.yaml"))


def standard_scene() -> SceneManifest:
    return load_manifest(data_path("kitchen.yaml"))


def corpus_activities() -> list[Path]:
    """Paths of the shipped activity definitions, sorted by name."""
    return sorted(data_path("activities").glob("*.bddl"))
