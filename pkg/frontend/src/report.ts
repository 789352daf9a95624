/** Parsers for the CLI's machine-readable output formats.
 *
 * Every format is a flat `key=value` table, one entry per line, emitted
 * in a fixed order; unknown keys are treated as format drift and
 * rejected rather than skipped.
 */

export interface ScoreReport {
  qFinal: number;
  qSeries: number[];
  tSimS: number;
  dKAccumulatedM: number;
  dKDifferentialM: number;
  dLAccumulated: number;
  dLDifferential: number;
  lBodyM: number;
  lLeftM: number;
  lRightM: number;
  /** Present when the report was normalized against human baselines. */
  normalized?: Record<string, number>;
}

export interface FlattenedGoal {
  /** Each option is a list of ground literal strings, e.g. `(inside a b)`. */
  options: string[][];
  truncated: boolean;
  volume: number;
}

export interface GoalEvaluation {
  satisfied: boolean;
  score: number;
}

function entries(text: string): Array<[string, string]> {
  const out: Array<[string, string]> = [];
  for (const line of text.split("\n")) {
    if (line === "") continue;
    const split = line.indexOf("=");
    if (split < 0) throw new Error(`malformed report line: ${JSON.stringify(line)}`);
    out.push([line.slice(0, split), line.slice(split + 1)]);
  }
  return out;
}

function num(value: string, key: string): number {
  const parsed = Number(value);
  if (Number.isNaN(parsed)) throw new Error(`non-numeric value for ${key}: ${value}`);
  return parsed;
}

function int(value: string, key: string): number {
  const parsed = num(value, key);
  if (!Number.isInteger(parsed)) throw new Error(`expected an integer for ${key}: ${value}`);
  return parsed;
}

export function parseScoreReport(text: string): ScoreReport {
  const report: Partial<ScoreReport> = {};
  let normalized: Record<string, number> | undefined;
  for (const [key, value] of entries(text)) {
    if (key.startsWith("normalized.")) {
      (normalized ??= {})[key.slice("normalized.".length)] = num(value, key);
      continue;
    }
    switch (key) {
      case "q_final":
        report.qFinal = num(value, key);
        break;
      case "q_series":
        report.qSeries = value.split(",").map((v) => num(v, key));
        break;
      case "T_sim_s":
        report.tSimS = num(value, key);
        break;
      case "D_K_accumulated_m":
        report.dKAccumulatedM = num(value, key);
        break;
      case "D_K_differential_m":
        report.dKDifferentialM = num(value, key);
        break;
      case "D_L_accumulated":
        report.dLAccumulated = int(value, key);
        break;
      case "D_L_differential":
        report.dLDifferential = int(value, key);
        break;
      case "L_body_m":
        report.lBodyM = num(value, key);
        break;
      case "L_left_m":
        report.lLeftM = num(value, key);
        break;
      case "L_right_m":
        report.lRightM = num(value, key);
        break;
      default:
        throw new Error(`unexpected score report key: ${key}`);
    }
  }
  for (const required of [
    "qFinal", "qSeries", "tSimS", "dKAccumulatedM", "dKDifferentialM",
    "dLAccumulated", "dLDifferential", "lBodyM", "lLeftM", "lRightM",
  ] as const) {
    if (report[required] === undefined) {
      throw new Error(`score report is missing ${required}`);
    }
  }
  const complete = report as ScoreReport;
  if (normalized) complete.normalized = normalized;
  return complete;
}

export function parseFlattenedGoal(text: string): FlattenedGoal {
  let optionCount: number | undefined;
  let truncated: boolean | undefined;
  let volume: number | undefined;
  const options: string[][] = [];
  for (const [key, value] of entries(text)) {
    if (key === "options") {
      optionCount = int(value, key);
    } else if (key === "truncated") {
      if (value !== "true" && value !== "false") {
        throw new Error(`expected true/false for truncated: ${value}`);
      }
      truncated = value === "true";
    } else if (key === "volume") {
      volume = int(value, key);
    } else if (/^option\.\d+$/.test(key)) {
      if (Number(key.slice("option.".length)) !== options.length) {
        throw new Error(`options arrived out of order at ${key}`);
      }
      options.push(value.split(";"));
    } else {
      throw new Error(`unexpected flatten report key: ${key}`);
    }
  }
  if (optionCount === undefined || truncated === undefined || volume === undefined) {
    throw new Error("flatten report is missing a header line");
  }
  if (options.length !== optionCount) {
    throw new Error(`flatten report lists ${options.length} of ${optionCount} options`);
  }
  return { options, truncated, volume };
}

export function parseGoalEvaluation(text: string): GoalEvaluation {
  let satisfied: boolean | undefined;
  let score: number | undefined;
  for (const [key, value] of entries(text)) {
    if (key === "goal") {
      if (value !== "true" && value !== "false") {
        throw new Error(`expected true/false for goal: ${value}`);
      }
      satisfied = value === "true";
    } else if (key === "q") {
      score = num(value, key);
    } else {
      throw new Error(`unexpected eval report key: ${key}`);
    }
  }
  if (satisfied === undefined || score === undefined) {
    throw new Error("eval report is missing goal or q");
  }
  return { satisfied, score };
}
