"""Command-line front end.

Subcommands::

    bddlkit validate PROBLEM         check syntax, applicability, feasibility
    bddlkit flatten PROBLEM          print goal options and the activity volume
    bddlkit sample PROBLEM           realise the activity in a scene
    bddlkit demo PROBLEM             replay a primitive script into a log
    bddlkit score LOG PROBLEM        metrics report for a trajectory log
    bddlkit canon PROBLEM            re-print a problem in canonical form
    bddlkit eval PROBLEM             evaluate the goal against a log record

Exit codes: 0 success, 1 usage, 2 parse error, 3 validation or
feasibility error, 4 scoring/runtime error.  All output is a pure
function of argv plus the input files.  The taxonomy, domain, and
thresholds config default to the packaged ones; ``BDDLKIT_CONFIG`` can
point at a default thresholds file.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from bddlkit import standard_domain, standard_scene, standard_taxonomy
from bddlkit.config import SimConfig, load_config
from bddlkit.errors import (
    BddlError,
    BddlParseError,
    LogError,
    PrimitiveFailure,
    ScoringError,
)
from bddlkit.logic import activity_volume, evaluate, flatten
from bddlkit.sampler import (
    bound_universe,
    check_goal_feasibility,
    check_init_consistency,
    instantiate,
    resolve_goal,
)
from bddlkit.scoring import (
    LogWriter,
    dump_log,
    human_report,
    machine_report,
    read_log,
    score_trajectory,
    state_from_record,
    success_score,
    with_normalization,
)
from bddlkit.syntax import format_literal, parse_domain, parse_problem, print_canonical
from bddlkit.syntax.ast import ConstantName
from bddlkit.taxonomy import load_taxonomy
from bddlkit.world import (
    Wait,
    action_duration,
    advance_dynamics,
    apply_primitive,
    load_manifest,
    logical_snapshot,
    parse_script,
    step_processes,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_INVALID = 3
EXIT_RUNTIME = 4


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(EXIT_USAGE)


class _CliFailure(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        super().__init__(message)


def _exit_code(exc: BddlError) -> int:
    if isinstance(exc, BddlParseError):
        return EXIT_PARSE
    if isinstance(exc, (ScoringError, LogError, PrimitiveFailure)):
        return EXIT_RUNTIME
    return EXIT_INVALID


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _CliFailure(EXIT_USAGE, f"cannot read {path}: {exc.strerror}") from None


def _write_out(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise _CliFailure(EXIT_USAGE, f"cannot write {path}: {exc.strerror}") from None


def _load_context(args) -> tuple:
    taxonomy = load_taxonomy(args.taxonomy) if args.taxonomy else standard_taxonomy()
    if args.domain:
        domain = parse_domain(_read(args.domain))
    else:
        domain = standard_domain()
    config_path = args.config or os.environ.get("BDDLKIT_CONFIG")
    config = load_config(config_path)
    return taxonomy, domain, config


def _parse_problem_file(path: str, domain):
    return parse_problem(_read(path), domain)


def _diagnostic(path: str, exc: BddlParseError) -> str:
    line = exc.line if exc.line is not None else 0
    column = exc.column if exc.column is not None else 0
    return f"{path}:{line}:{column}: {exc.bare_message}"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_validate(args) -> int:
    taxonomy, domain, config = _load_context(args)
    try:
        definition = _parse_problem_file(args.problem, domain)
    except BddlParseError as exc:
        sys.stderr.write(_diagnostic(args.problem, exc) + "\n")
        return EXIT_PARSE

    problems: list[str] = []
    if definition.domain_name != domain.name:
        problems.append(
            f"problem targets domain {definition.domain_name!r}, "
            f"loaded domain is {domain.name!r}"
        )
    for _constant, category in definition.objects:
        try:
            taxonomy.is_a(category, category)
        except BddlError as exc:
            problems.append(str(exc))
    if not problems:
        try:
            check_init_consistency(definition, taxonomy, domain)
        except BddlError as exc:
            problems.append(str(exc))
        cap = args.cap or config.flatten_cap
        report = check_goal_feasibility(definition, taxonomy, domain, cap=cap)
        if not report.feasible:
            if report.option_count == 0:
                problems.append("goal has no options: it is unsatisfiable as written")
            for rejection in report.rejections:
                problems.append(f"goal option {rejection.index}: {rejection.reason}")

    if problems:
        for problem in problems:
            sys.stderr.write(f"{args.problem}: {problem}\n")
        return EXIT_INVALID
    sys.stdout.write(f"ok: {definition.problem_name}\n")
    return EXIT_OK


def cmd_flatten(args) -> int:
    taxonomy, domain, config = _load_context(args)
    definition = _parse_problem_file(args.problem, domain)
    cap = args.cap or config.flatten_cap
    opts = flatten(definition.goal, list(definition.objects), taxonomy, domain, cap)
    volume = activity_volume(opts)
    if args.format == "machine":
        lines = [
            f"options={len(opts.options)}",
            f"truncated={'true' if opts.truncated else 'false'}",
            f"volume={volume}",
        ]
        for index, option in enumerate(opts.options):
            lines.append(f"option.{index}=" + ";".join(format_literal(l) for l in option))
        _write_out("\n".join(lines) + "\n", args.output)
    else:
        lines = [
            f"{len(opts.options)} option(s), volume {volume}"
            + (" (truncated)" if opts.truncated else "")
        ]
        for index, option in enumerate(opts.options):
            lines.append(f"option {index + 1} ({len(option)} literals):")
            lines.extend(f"  {format_literal(literal)}" for literal in option)
        _write_out("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def _instantiated(args, taxonomy, domain, config):
    definition = _parse_problem_file(args.problem, domain)
    scene = load_manifest(args.scene) if args.scene else standard_scene()
    result = instantiate(definition, scene, taxonomy, domain, args.seed, config)
    return definition, scene, result


def cmd_sample(args) -> int:
    taxonomy, domain, config = _load_context(args)
    definition, scene, result = _instantiated(args, taxonomy, domain, config)
    universe = bound_universe(definition, result.binding)
    facts = logical_snapshot(result.state, universe, taxonomy, domain)
    writer = LogWriter(
        activity=definition.problem_name,
        scene=scene.name,
        seed=args.seed,
        state=result.state,
        binding={str(k): str(v) for k, v in result.binding.items()},
    )
    writer.record(result.state, facts=facts)
    _write_out(dump_log(writer.build()), args.output)
    return EXIT_OK


def cmd_demo(args) -> int:
    taxonomy, domain, config = _load_context(args)
    definition, scene, result = _instantiated(args, taxonomy, domain, config)
    actions = parse_script(_read(args.script))
    universe = bound_universe(definition, result.binding)
    writer = LogWriter(
        activity=definition.problem_name,
        scene=scene.name,
        seed=args.seed,
        state=result.state,
        binding={str(k): str(v) for k, v in result.binding.items()},
    )
    state = result.state
    writer.record(state, facts=logical_snapshot(state, universe, taxonomy, domain))
    for action in actions:
        if isinstance(action, Wait):
            state = step_processes(state, action.seconds)
        else:
            state = apply_primitive(state, action, taxonomy)
            state = advance_dynamics(state, action_duration(action, config))
        writer.record(state, facts=logical_snapshot(state, universe, taxonomy, domain))
    _write_out(dump_log(writer.build()), args.output)
    return EXIT_OK


def cmd_score(args) -> int:
    taxonomy, domain, config = _load_context(args)
    definition = _parse_problem_file(args.problem, domain)
    log = read_log(args.log)
    report = score_trajectory(
        log,
        definition,
        taxonomy,
        domain,
        config=config,
        force_recompute=args.recompute_facts,
    )
    if args.baselines:
        baseline_dir = Path(args.baselines)
        if not baseline_dir.is_dir():
            raise _CliFailure(EXIT_USAGE, f"not a directory: {args.baselines}")
        baselines = [
            score_trajectory(read_log(path), definition, taxonomy, domain, config=config)
            for path in sorted(baseline_dir.iterdir())
            if path.is_file()
        ]
        report = with_normalization(report, baselines, config)
    render = machine_report if args.format == "machine" else human_report
    _write_out(render(report), args.output)
    return EXIT_OK


def cmd_canon(args) -> int:
    _taxonomy, domain, _config = _load_context(args)
    definition = _parse_problem_file(args.problem, domain)
    _write_out(print_canonical(definition), args.output)
    return EXIT_OK


def cmd_eval(args) -> int:
    taxonomy, domain, config = _load_context(args)
    definition = _parse_problem_file(args.problem, domain)
    log = read_log(args.log)
    if not log.records:
        raise LogError("log has no records")
    try:
        record = log.records[args.record]
    except IndexError:
        raise _CliFailure(
            EXIT_USAGE, f"record {args.record} out of range (log has {len(log.records)})"
        ) from None
    state = state_from_record(log.header, record, config)
    binding = {
        ConstantName.parse(k): ConstantName.parse(v) for k, v in log.header.binding.items()
    }
    universe = bound_universe(definition, binding)
    goal = resolve_goal(definition.goal, binding)
    satisfied = evaluate(goal, state, {}, universe, taxonomy, domain)
    facts = record.facts
    if facts is None or args.recompute_facts:
        facts = logical_snapshot(state, universe, taxonomy, domain)
    opts = flatten(goal, universe, taxonomy, domain, config.flatten_cap)
    q = success_score(opts, facts)
    if args.format == "machine":
        _write_out(f"goal={'true' if satisfied else 'false'}\nq={q!r}\n", args.output)
    else:
        _write_out(
            f"goal satisfied: {'yes' if satisfied else 'no'}\nsuccess score: {q:.4f}\n",
            args.output,
        )
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument wiring
# ---------------------------------------------------------------------------


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--taxonomy", help="taxonomy YAML (default: packaged)")
    sub.add_argument("--domain", help="predicate domain BDDL (default: packaged)")
    sub.add_argument("--config", help="thresholds config YAML (default: $BDDLKIT_CONFIG)")
    sub.add_argument("-o", "--output", help="write to a file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="bddlkit", description=__doc__.splitlines()[0])
    commands = parser.add_subparsers(dest="command", required=True)

    validate = commands.add_parser("validate", help="check a problem file")
    validate.add_argument("problem")
    validate.add_argument("--cap", type=int, help="flatten cap for feasibility checking")
    _add_common(validate)
    validate.set_defaults(func=cmd_validate)

    flat = commands.add_parser("flatten", help="print goal options and volume")
    flat.add_argument("problem")
    flat.add_argument("--cap", type=int, help="maximum number of options")
    flat.add_argument("--format", choices=("human", "machine"), default="human")
    _add_common(flat)
    flat.set_defaults(func=cmd_flatten)

    sample = commands.add_parser("sample", help="instantiate into a scene state")
    sample.add_argument("problem")
    sample.add_argument("--scene", help="scene manifest YAML (default: packaged kitchen)")
    sample.add_argument("--seed", type=int, default=0)
    _add_common(sample)
    sample.set_defaults(func=cmd_sample)

    demo = commands.add_parser("demo", help="replay a primitive script into a log")
    demo.add_argument("problem")
    demo.add_argument("--script", required=True, help="primitive script file")
    demo.add_argument("--scene", help="scene manifest YAML (default: packaged kitchen)")
    demo.add_argument("--seed", type=int, default=0)
    _add_common(demo)
    demo.set_defaults(func=cmd_demo)

    score = commands.add_parser("score", help="score a trajectory log")
    score.add_argument("log")
    score.add_argument("problem")
    score.add_argument("--baselines", help="directory of human baseline logs")
    score.add_argument("--format", choices=("human", "machine"), default="human")
    score.add_argument(
        "--recompute-facts",
        action="store_true",
        help="ignore cached fact sets and recompute from object state",
    )
    _add_common(score)
    score.set_defaults(func=cmd_score)

    canon = commands.add_parser("canon", help="re-print a problem canonically")
    canon.add_argument("problem")
    _add_common(canon)
    canon.set_defaults(func=cmd_canon)

    ev = commands.add_parser("eval", help="evaluate the goal against a log record")
    ev.add_argument("problem")
    ev.add_argument("--log", required=True, help="trajectory or sample log")
    ev.add_argument("--record", type=int, default=-1, help="record index (default: last)")
    ev.add_argument("--format", choices=("human", "machine"), default="human")
    ev.add_argument("--recompute-facts", action="store_true")
    _add_common(ev)
    ev.set_defaults(func=cmd_eval)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except _CliFailure as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.code
    except BddlError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return _exit_code(exc)


if __name__ == "__main__":
    sys.exit(main())
