import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, describe, expect, it } from "vitest";

import {
  BddlHandle,
  HandleClosedError,
  ParseError,
  RuntimeFault,
  UsageError,
  ValidationError,
} from "../src/index";

const CASES = fileURLToPath(new URL("../fixtures/cases", import.meta.url));
const PACKING = readFileSync(join(CASES, "case-01", "problem.bddl"), "utf8");
const SERVING = readFileSync(join(CASES, "case-04", "problem.bddl"), "utf8");
const DEMO_LOG = readFileSync(join(CASES, "case-01", "log.jsonl"), "utf8");

const handle = new BddlHandle();
afterAll(() => handle.close());

describe("parseProblem", () => {
  it("canonicalises and is idempotent", () => {
    const once = handle.parseProblem(PACKING);
    expect(once.startsWith("(define (problem packing_lunches_1)")).toBe(true);
    expect(handle.parseProblem(once)).toBe(once);
  });

  it("reports parse positions", () => {
    let caught: unknown;
    try {
      handle.parseProblem("(define (problem x_1)\n  (:domain igibson)\n  @\n)");
    } catch (error) {
      caught = error;
    }
    expect(caught).toBeInstanceOf(ParseError);
    const parseError = caught as ParseError;
    expect(parseError.exitCode).toBe(2);
    expect(parseError.line).toBe(3);
    expect(parseError.column).toBe(3);
  });
});

describe("flatten and activityVolume", () => {
  it("flattens the packed-lunch goal to one four-literal option", () => {
    const flat = handle.flatten(PACKING);
    expect(flat.volume).toBe(4);
    expect(flat.truncated).toBe(false);
    expect(flat.options).toHaveLength(1);
    expect(flat.options[0]).toHaveLength(4);
    expect(flat.options[0]).toContain("(ontop basket.n.01_1 countertop.n.01_1)");
    expect(handle.activityVolume(PACKING)).toBe(4);
  });

  it("honours the option cap", () => {
    expect(handle.flatten(SERVING).options).toHaveLength(2);
    expect(handle.activityVolume(SERVING)).toBe(8);
    const capped = handle.flatten(SERVING, 1);
    expect(capped.truncated).toBe(true);
    expect(capped.options).toHaveLength(1);
  });

  it("rejects an unsatisfiable goal", () => {
    const contradiction = [
      "(define (problem impossible_1)",
      "  (:domain igibson)",
      "  (:objects sausage.n.01_1 - sausage.n.01)",
      "  (:init )",
      "  (:goal (and (cooked sausage.n.01_1) (not (cooked sausage.n.01_1))))",
      ")",
    ].join("\n");
    expect(() => handle.flatten(contradiction)).toThrow(ValidationError);
  });
});

describe("evaluateGoal and successScore", () => {
  it("sees the scripted run finish the activity", () => {
    const final = handle.evaluateGoal(PACKING, DEMO_LOG);
    expect(final).toEqual({ satisfied: true, score: 1.0 });
    expect(handle.successScore(PACKING, DEMO_LOG)).toBe(1.0);
  });

  it("scores the starting record at a quarter", () => {
    const first = handle.evaluateGoal(PACKING, DEMO_LOG, 0);
    expect(first.satisfied).toBe(false);
    expect(first.score).toBe(0.25);
  });

  it("flags an out-of-range record as a usage error", () => {
    expect(() => handle.evaluateGoal(PACKING, DEMO_LOG, 99)).toThrow(UsageError);
  });
});

describe("scoreTrajectory", () => {
  it("parses the machine report", () => {
    const report = handle.scoreTrajectory(PACKING, DEMO_LOG);
    expect(report.qFinal).toBe(1.0);
    expect(report.qSeries).toHaveLength(13);
    expect(report.tSimS).toBe(33.0);
    expect(report.dKDifferentialM).toBeLessThanOrEqual(report.dKAccumulatedM);
    expect(report.normalized).toBeUndefined();
  });

  it("attaches normalized ratios when baselines are given", () => {
    const baselines = join(CASES, "case-09", "baselines");
    const report = handle.scoreTrajectory(PACKING, DEMO_LOG, { baselinesDir: baselines });
    expect(Object.keys(report.normalized!)).toHaveLength(6);
    expect(report.normalized!["T_sim_s"]).toBe(1.0);
  });

  it("names the offending record of a corrupt log", () => {
    const lines = DEMO_LOG.split("\n");
    lines[2] = "{broken";
    let caught: unknown;
    try {
      handle.scoreTrajectory(PACKING, lines.join("\n"));
    } catch (error) {
      caught = error;
    }
    expect(caught).toBeInstanceOf(RuntimeFault);
    expect((caught as RuntimeFault).exitCode).toBe(4);
    expect((caught as RuntimeFault).recordIndex).toBe(1);
  });
});

describe("handle lifecycle", () => {
  it("supports config overrides", () => {
    const scratch = mkdtempSync(join(tmpdir(), "bddlkit-test-"));
    const configPath = join(scratch, "caps.yaml");
    writeFileSync(configPath, "flatten_cap: 1\n");
    const configured = new BddlHandle({ configPath });
    try {
      expect(configured.flatten(SERVING).truncated).toBe(true);
    } finally {
      configured.close();
      rmSync(scratch, { recursive: true, force: true });
    }
  });

  it("errors cleanly once closed", () => {
    const closable = new BddlHandle();
    expect(closable.closed).toBe(false);
    closable.close();
    expect(closable.closed).toBe(true);
    expect(() => closable.parseProblem(PACKING)).toThrow(HandleClosedError);
    closable.close(); // closing twice is fine
  });
});
