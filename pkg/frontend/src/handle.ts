import { spawnSync } from "node:child_process";
import { mkdtempSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { HandleClosedError, faultFromCli } from "./errors.js";
import {
  FlattenedGoal,
  GoalEvaluation,
  ScoreReport,
  parseFlattenedGoal,
  parseGoalEvaluation,
  parseScoreReport,
} from "./report.js";

export interface HandleOptions {
  /** Python executable used to spawn the CLI (default: $BDDLKIT_PYTHON or python3). */
  python?: string;
  /** Taxonomy YAML override, passed through as --taxonomy. */
  taxonomyPath?: string;
  /** Predicate domain override, passed through as --domain. */
  domainPath?: string;
  /** Thresholds config override, passed through as --config. */
  configPath?: string;
}

export interface ScoreOptions {
  /** Directory of human baseline logs; adds the normalized metric block. */
  baselinesDir?: string;
  /** Ignore cached fact sets in the log and recompute from object state. */
  recomputeFacts?: boolean;
}

export interface BoundScore {
  /** The CLI's machine-format report, byte for byte. */
  raw: string;
  report: ScoreReport;
}

const MAX_OUTPUT = 64 * 1024 * 1024;

/**
 * A loaded (taxonomy, domain, config) context.
 *
 * Each call shells out to `python -m bddlkit.cli`; inputs are marshalled
 * through temporary files in a per-handle scratch directory, results come
 * back as the CLI's documented byte-stable formats. Handles are cheap but
 * not thread-safe; use one per worker.
 */
export class BddlHandle {
  private readonly python: string;
  private readonly commonArgs: string[];
  private scratchDir: string | null;
  private calls = 0;

  constructor(options: HandleOptions = {}) {
    this.python = options.python ?? process.env.BDDLKIT_PYTHON ?? "python3";
    this.commonArgs = [];
    if (options.taxonomyPath) this.commonArgs.push("--taxonomy", options.taxonomyPath);
    if (options.domainPath) this.commonArgs.push("--domain", options.domainPath);
    if (options.configPath) this.commonArgs.push("--config", options.configPath);
    this.scratchDir = mkdtempSync(join(tmpdir(), "bddlkit-"));
  }

  get closed(): boolean {
    return this.scratchDir === null;
  }

  /** Remove the scratch directory; later calls throw HandleClosedError. */
  close(): void {
    if (this.scratchDir !== null) {
      rmSync(this.scratchDir, { recursive: true, force: true });
      this.scratchDir = null;
    }
  }

  /** Parse and canonically re-print a problem; throws ParseError with the
   * offending line and column if the text is not well formed. */
  parseProblem(problemText: string): string {
    return this.run(["canon", this.scratch("problem", ".bddl", problemText)]);
  }

  flatten(problemText: string, cap?: number): FlattenedGoal {
    const args = ["flatten", this.scratch("problem", ".bddl", problemText)];
    if (cap !== undefined) args.push("--cap", String(cap));
    args.push("--format", "machine");
    return parseFlattenedGoal(this.run(args));
  }

  /** Literal count of the shortest goal option. */
  activityVolume(problemText: string, cap?: number): number {
    return this.flatten(problemText, cap).volume;
  }

  /** Evaluate the goal against one record of a trajectory log
   * (default: the last record). */
  evaluateGoal(problemText: string, logText: string, record = -1): GoalEvaluation {
    const args = [
      "eval",
      this.scratch("problem", ".bddl", problemText),
      "--log",
      this.scratch("log", ".jsonl", logText),
      `--record=${record}`,
      "--format",
      "machine",
    ];
    return parseGoalEvaluation(this.run(args));
  }

  /** Best satisfied fraction over the goal options at one record. */
  successScore(problemText: string, logText: string, record = -1): number {
    return this.evaluateGoal(problemText, logText, record).score;
  }

  scoreTrajectory(problemText: string, logText: string, options: ScoreOptions = {}): ScoreReport {
    return this.boundScore(problemText, logText, options).report;
  }

  /** Full metrics for a log, returning both the parsed report and the
   * CLI's machine output verbatim. */
  boundScore(problemText: string, logText: string, options: ScoreOptions = {}): BoundScore {
    const args = [
      "score",
      this.scratch("log", ".jsonl", logText),
      this.scratch("problem", ".bddl", problemText),
      "--format",
      "machine",
    ];
    if (options.baselinesDir) args.push("--baselines", options.baselinesDir);
    if (options.recomputeFacts) args.push("--recompute-facts");
    const raw = this.run(args);
    return { raw, report: parseScoreReport(raw) };
  }

  private scratch(stem: string, suffix: string, contents: string): string {
    if (this.scratchDir === null) throw new HandleClosedError();
    const path = join(this.scratchDir, `${stem}-${this.calls++}${suffix}`);
    writeFileSync(path, contents, "utf8");
    return path;
  }

  private run(args: string[]): string {
    if (this.scratchDir === null) throw new HandleClosedError();
    const proc = spawnSync(this.python, ["-m", "bddlkit.cli", ...args, ...this.commonArgs], {
      encoding: "utf8",
      maxBuffer: MAX_OUTPUT,
    });
    if (proc.error) throw proc.error;
    if (proc.status !== 0) {
      throw faultFromCli(proc.status ?? -1, proc.stderr ?? "");
    }
    return proc.stdout;
  }
}
