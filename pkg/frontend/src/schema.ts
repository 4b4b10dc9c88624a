/**
 * Readers for the versioned opendicke CSV schemas.
 *
 * Strobe and kappa files carry a `# opendicke <schema>` comment line above
 * the column header; sweep files carry a JSON header line instead.  Any
 * mismatch in schema line, header row or cell layout raises SchemaError.
 */

import { readFileSync } from "node:fs";
import Papa from "papaparse";

export class SchemaError extends Error {}

export const STROBE_SCHEMA = "strobe-v1";
export const KAPPA_SCHEMA = "kappa-v1";
export const SWEEP_SCHEMA = "sweep-v1";

export const STROBE_COLUMNS = ["n", "x", "p", "jx", "jy", "jz"];
export const KAPPA_COLUMNS = ["t", "kappa"];
export const SWEEP_COLUMNS = [
  "epsilon", "m", "kappa0", "kappa_max", "lambda0", "a0",
  "regime", "T", "phase", "period", "variance", "dimension",
  "nn_spread", "parity_flag", "error_note",
];

export interface StrobeRow {
  n: number;
  x: number;
  p: number;
  jx: number;
  jy: number;
  jz: number;
}

export interface KappaRow {
  t: number;
  kappa: number;
}

export interface SweepRow {
  epsilon: number;
  m: number | null;
  kappa0: number;
  kappa_max: number;
  lambda0: number;
  a0: number;
  regime: string;
  T: number | null;
  phase: string;
  period: number | null;
  variance: number | null;
  dimension: number | null;
  nn_spread: number | null;
  parity_flag: boolean | null;
  error_note: string;
}

function parseCells(text: string, path: string): string[][] {
  const parsed = Papa.parse<string[]>(text.trimEnd(), { skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    throw new SchemaError(`${path}: ${parsed.errors[0].message}`);
  }
  return parsed.data;
}

function splitFirstLine(path: string): { first: string; rest: string } {
  const text = readFileSync(path, "utf8");
  const cut = text.indexOf("\n");
  if (cut < 0) {
    throw new SchemaError(`${path}: empty or truncated file`);
  }
  return { first: text.slice(0, cut), rest: text.slice(cut + 1) };
}

function requireHeader(cells: string[][], columns: string[], path: string): string[][] {
  const header = cells[0];
  if (!header || header.length !== columns.length || header.some((c, i) => c !== columns[i])) {
    throw new SchemaError(
      `${path}: header ${JSON.stringify(header)} does not match ${JSON.stringify(columns)}`,
    );
  }
  return cells.slice(1);
}

function toNumber(cell: string, path: string): number {
  const value = Number(cell);
  if (cell === "" || Number.isNaN(value)) {
    throw new SchemaError(`${path}: expected a number, found ${JSON.stringify(cell)}`);
  }
  return value;
}

function commentSchema(path: string, schema: string, columns: string[]): string[][] {
  const { first, rest } = splitFirstLine(path);
  if (first !== `# opendicke ${schema}`) {
    throw new SchemaError(`${path}: expected '# opendicke ${schema}', found ${JSON.stringify(first)}`);
  }
  const rows = requireHeader(parseCells(rest, path), columns, path);
  if (rows.length === 0) {
    throw new SchemaError(`${path}: no data rows`);
  }
  return rows;
}

export function parseStrobeCsv(path: string): StrobeRow[] {
  return commentSchema(path, STROBE_SCHEMA, STROBE_COLUMNS).map((cells) => {
    if (cells.length !== STROBE_COLUMNS.length) {
      throw new SchemaError(`${path}: row with ${cells.length} cells`);
    }
    const [n, x, p, jx, jy, jz] = cells.map((c) => toNumber(c, path));
    return { n, x, p, jx, jy, jz };
  });
}

export function parseKappaCsv(path: string): KappaRow[] {
  return commentSchema(path, KAPPA_SCHEMA, KAPPA_COLUMNS).map((cells) => {
    if (cells.length !== KAPPA_COLUMNS.length) {
      throw new SchemaError(`${path}: row with ${cells.length} cells`);
    }
    return { t: toNumber(cells[0], path), kappa: toNumber(cells[1], path) };
  });
}

export interface SweepFile {
  header: Record<string, unknown>;
  rows: SweepRow[];
}

export function parseSweepCsv(path: string): SweepFile {
  const { first, rest } = splitFirstLine(path);
  let header: Record<string, unknown>;
  try {
    header = JSON.parse(first) as Record<string, unknown>;
  } catch {
    throw new SchemaError(`${path}: first line is not a JSON sweep header`);
  }
  if (header["schema"] !== SWEEP_SCHEMA) {
    throw new SchemaError(`${path}: unexpected schema ${JSON.stringify(header["schema"])}`);
  }
  const raw = requireHeader(parseCells(rest, path), SWEEP_COLUMNS, path);
  if (raw.length === 0) {
    throw new SchemaError(`${path}: no data rows`);
  }
  const optional = (cell: string) => (cell === "" ? null : toNumber(cell, path));
  const rows = raw.map((cells) => {
    if (cells.length !== SWEEP_COLUMNS.length) {
      throw new SchemaError(`${path}: row with ${cells.length} cells`);
    }
    return {
      epsilon: toNumber(cells[0], path),
      m: optional(cells[1]),
      kappa0: toNumber(cells[2], path),
      kappa_max: toNumber(cells[3], path),
      lambda0: toNumber(cells[4], path),
      a0: toNumber(cells[5], path),
      regime: cells[6],
      T: optional(cells[7]),
      phase: cells[8],
      period: optional(cells[9]),
      variance: optional(cells[10]),
      dimension: optional(cells[11]),
      nn_spread: optional(cells[12]),
      parity_flag: cells[13] === "" ? null : cells[13] === "true",
      error_note: cells[14],
    };
  });
  return { header, rows };
}
