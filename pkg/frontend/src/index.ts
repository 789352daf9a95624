export { BddlHandle } from "./handle.js";
export type { BoundScore, HandleOptions, ScoreOptions } from "./handle.js";
export {
  parseFlattenedGoal,
  parseGoalEvaluation,
  parseScoreReport,
} from "./report.js";
export type { FlattenedGoal, GoalEvaluation, ScoreReport } from "./report.js";
export {
  BddlCliError,
  HandleClosedError,
  ParseError,
  RuntimeFault,
  UsageError,
  ValidationError,
} from "./errors.js";
