/** Structured errors mirroring the CLI's exit code families. */

export class BddlCliError extends Error {
  constructor(
    message: string,
    readonly exitCode: number,
    readonly stderr: string,
  ) {
    super(message);
    this.name = new.target.name;
  }
}

/** Exit code 1: bad arguments, unreadable files, out-of-range indices. */
export class UsageError extends BddlCliError {}

/** Exit code 2: the problem or script text did not parse. */
export class ParseError extends BddlCliError {
  constructor(
    message: string,
    exitCode: number,
    stderr: string,
    readonly line?: number,
    readonly column?: number,
  ) {
    super(message, exitCode, stderr);
  }
}

/** Exit code 3: well-formed input that fails semantic checks. */
export class ValidationError extends BddlCliError {}

/** Exit code 4: scoring or log errors; carries the record index when the
 * CLI names one. */
export class RuntimeFault extends BddlCliError {
  constructor(
    message: string,
    exitCode: number,
    stderr: string,
    readonly recordIndex?: number,
  ) {
    super(message, exitCode, stderr);
  }
}

export class HandleClosedError extends Error {
  constructor() {
    super("operation on a closed BddlHandle");
    this.name = "HandleClosedError";
  }
}

export function faultFromCli(exitCode: number, stderr: string): BddlCliError {
  const message =
    stderr.trim().replace(/^error:\s*/, "") || `bddlkit exited with code ${exitCode}`;
  switch (exitCode) {
    case 1:
      return new UsageError(message, exitCode, stderr);
    case 2: {
      const position = /line (\d+), column (\d+)/.exec(message);
      return new ParseError(
        message,
        exitCode,
        stderr,
        position ? Number(position[1]) : undefined,
        position ? Number(position[2]) : undefined,
      );
    }
    case 3:
      return new ValidationError(message, exitCode, stderr);
    case 4: {
      const where = /record (\d+)/.exec(message);
      return new RuntimeFault(
        message,
        exitCode,
        stderr,
        where ? Number(where[1]) : undefined,
      );
    }
    default:
      return new BddlCliError(message, exitCode, stderr);
  }
}
