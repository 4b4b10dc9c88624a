#!/usr/bin/env node
/**
 * opendicke-figures: batch-render opendicke CSV outputs to SVG.
 *
 *   opendicke-figures --kind timeseries --input run_strobe.csv --output ts.svg
 *   opendicke-figures --kind bloch      --input run_strobe.csv --output bloch.svg --last 200
 *   opendicke-figures --kind heatmap    --input fig3a_sweep.csv --output phases.svg
 *   opendicke-figures --kind kappa      --input nm_kappa.csv   --output rate.svg
 *
 * Exit codes mirror the producer CLI: 0 success, 1 runtime failure,
 * 2 usage / schema error.
 */

import { existsSync } from "node:fs";

import { FigureKind, FigureRequest, render } from "./render.js";
import { SchemaError } from "./schema.js";

const KIND_ALIASES: Record<string, FigureKind> = {
  timeseries: "TimeSeries",
  TimeSeries: "TimeSeries",
  bloch: "BlochProjection",
  BlochProjection: "BlochProjection",
  heatmap: "PhaseHeatmap",
  PhaseHeatmap: "PhaseHeatmap",
  kappa: "KappaTrace",
  KappaTrace: "KappaTrace",
};

class UsageError extends Error {}

function parseArgs(argv: string[]): FigureRequest {
  const values: Record<string, string> = {};
  for (let i = 0; i < argv.length; i += 2) {
    const flag = argv[i];
    if (!flag.startsWith("--") || i + 1 >= argv.length) {
      throw new UsageError(`expected '--flag value' pairs, got ${JSON.stringify(argv[i])}`);
    }
    values[flag.slice(2)] = argv[i + 1];
  }
  for (const required of ["kind", "input", "output"]) {
    if (!(required in values)) {
      throw new UsageError(`missing required flag --${required}`);
    }
  }
  const kind = KIND_ALIASES[values.kind];
  if (!kind) {
    throw new UsageError(
      `unknown kind ${JSON.stringify(values.kind)}; use one of ${Object.keys(KIND_ALIASES).join(", ")}`,
    );
  }
  const known = new Set(["kind", "input", "output", "last", "title"]);
  for (const key of Object.keys(values)) {
    if (!known.has(key)) {
      throw new UsageError(`unknown flag --${key}`);
    }
  }
  const request: FigureRequest = { kind, input: values.input, output: values.output };
  if ("last" in values) {
    const last = Number(values.last);
    if (!Number.isInteger(last) || last < 1) {
      throw new UsageError(`--last must be a positive integer, got ${values.last}`);
    }
    request.lastPeriods = last;
  }
  if ("title" in values) {
    request.title = values.title;
  }
  return request;
}

export function runCli(argv: string[]): number {
  let request: FigureRequest;
  try {
    request = parseArgs(argv);
    if (!existsSync(request.input)) {
      throw new UsageError(`input file not found: ${request.input}`);
    }
  } catch (error) {
    console.error(`error: ${(error as Error).message}`);
    return 2;
  }
  try {
    render(request);
  } catch (error) {
    if (error instanceof SchemaError) {
      console.error(`error: ${error.message}`);
      return 2;
    }
    console.error(`error: ${(error as Error).message}`);
    return 1;
  }
  console.log(`wrote ${request.output} (${request.kind})`);
  return 0;
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url.endsWith(process.argv[1].split("/").pop() ?? "");
if (invokedDirectly) {
  process.exit(runCli(process.argv.slice(2)));
}
