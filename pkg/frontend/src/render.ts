/**
 * The four figure kinds rendered from opendicke CSV files.
 *
 * TimeSeries      stroboscopic jx, jy, jz against the period index (last
 *                 `lastPeriods` points, default 30)
 * BlochProjection last `lastPeriods` (default 200) stroboscopic spin points
 *                 projected orthographically onto the unit sphere
 * PhaseHeatmap    the (epsilon, m) grid colored by phase, dashed line at
 *                 m = 2*kappa0, legend covering every phase present
 * KappaTrace      the dissipation-rate samples (t, kappa)
 *
 * Rendering performs no numerical work beyond axis scaling/projection; each
 * SVG carries a sha256 checksum of the plotted source values in its
 * `data-checksum` attribute (see checksum.ts for the canonical form).
 */

import { writeFileSync } from "node:fs";

import { Cell, checksumOf } from "./checksum.js";
import {
  KappaRow,
  SchemaError,
  StrobeRow,
  SweepRow,
  parseKappaCsv,
  parseStrobeCsv,
  parseSweepCsv,
} from "./schema.js";
import { SvgBuilder, linearScale, ticks } from "./svg.js";

export const RENDERER_VERSION = "opendicke-figures/0.1.0";

export type FigureKind = "TimeSeries" | "BlochProjection" | "PhaseHeatmap" | "KappaTrace";

export interface FigureRequest {
  kind: FigureKind;
  input: string;
  output: string;
  /** time-series / Bloch window; defaults: 30 / 200 */
  lastPeriods?: number;
  title?: string;
}

export const PHASE_COLORS: Record<string, string> = {
  TISS: "#4878cf",
  DTC: "#ee8434",
  PeriodN: "#c23b3b",
  LimitCycle: "#7e57c2",
  Thermal: "#3a9d5d",
  Unresolved: "#9e9e9e",
};

const SPIN_COLORS: Record<string, string> = { jx: "#c23b3b", jy: "#3a9d5d", jz: "#4878cf" };

function rootAttrs(kind: FigureKind, checksum: string): Record<string, string> {
  return {
    "data-renderer": RENDERER_VERSION,
    "data-kind": kind,
    "data-checksum": checksum,
  };
}

function windowOf<T>(rows: T[], last: number): T[] {
  return rows.slice(Math.max(0, rows.length - last));
}

function renderTimeSeries(request: FigureRequest): string {
  const rows = windowOf(parseStrobeCsv(request.input), request.lastPeriods ?? 30);
  const checksum = checksumOf(rows.map((r) => [r.n, r.jx, r.jy, r.jz] as Cell[]));
  const svg = new SvgBuilder(640, 420);
  const box = { left: 60, right: 620, top: 40, bottom: 360 };
  const nMin = rows[0].n;
  const nMax = rows[rows.length - 1].n;
  const xScale = linearScale(nMin, nMax, box.left, box.right);
  const yScale = linearScale(-1.05, 1.05, box.bottom, box.top);
  svg.axes(box, xScale, yScale, ticks(nMin, nMax, 6), ticks(-1, 1, 5),
           "period index n", "spin components");
  svg.line(box.left, yScale(0), box.right, yScale(0), {
    stroke: "#bbb", "stroke-dasharray": "4 3",
  });
  (Object.keys(SPIN_COLORS) as Array<"jx" | "jy" | "jz">).forEach((component, i) => {
    const color = SPIN_COLORS[component];
    const pts = rows.map((r) => [xScale(r.n), yScale(r[component])] as [number, number]);
    svg.polyline(pts, { stroke: color, "stroke-width": 1 });
    for (const [x, y] of pts) {
      svg.circle(x, y, 2.5, { fill: color });
    }
    svg.text(box.right - 100 + i * 36, box.top - 10, component, {
      "font-size": 13, fill: color,
    });
  });
  svg.text(box.left, box.top - 10, request.title ?? "stroboscopic spin record", {
    "font-size": 14,
  });
  return svg.toString(rootAttrs("TimeSeries", checksum));
}

/** Orthographic projection shared by the sphere wireframe and the points. */
function project(jx: number, jy: number, jz: number): { sx: number; sy: number; depth: number } {
  const azimuth = (-35 * Math.PI) / 180;
  const elevation = (18 * Math.PI) / 180;
  const x1 = jx * Math.cos(azimuth) - jy * Math.sin(azimuth);
  const y1 = jx * Math.sin(azimuth) + jy * Math.cos(azimuth);
  const y2 = y1 * Math.cos(elevation) - jz * Math.sin(elevation);
  const z2 = y1 * Math.sin(elevation) + jz * Math.cos(elevation);
  return { sx: x1, sy: z2, depth: y2 };
}

function renderBloch(request: FigureRequest): string {
  const rows = windowOf(parseStrobeCsv(request.input), request.lastPeriods ?? 200);
  const checksum = checksumOf(rows.map((r) => [r.n, r.jx, r.jy, r.jz] as Cell[]));
  const svg = new SvgBuilder(520, 520);
  const cx = 260;
  const cy = 268;
  const R = 190;
  const toScreen = (p: { sx: number; sy: number }) => [cx + R * p.sx, cy - R * p.sy] as [number, number];
  svg.circle(cx, cy, R, { fill: "none", stroke: "#555" });
  for (const circle of ["equator", "meridian"]) {
    const pts: Array<[number, number]> = [];
    for (let k = 0; k <= 120; k++) {
      const t = (2 * Math.PI * k) / 120;
      const point =
        circle === "equator"
          ? project(Math.cos(t), Math.sin(t), 0)
          : project(Math.cos(t), 0, Math.sin(t));
      pts.push(toScreen(point));
    }
    svg.polyline(pts, { stroke: "#aaa", "stroke-dasharray": "3 4" });
  }
  for (const [label, axis] of [["jx", [1, 0, 0]], ["jy", [0, 1, 0]], ["jz", [0, 0, 1]]] as const) {
    const tip = project(axis[0] * 1.12, axis[1] * 1.12, axis[2] * 1.12);
    const [x, y] = toScreen(tip);
    svg.text(x, y, label, { "font-size": 13, fill: "#555", "text-anchor": "middle" });
  }
  const projected = rows
    .map((r) => ({ ...project(r.jx, r.jy, r.jz) }))
    .sort((a, b) => a.depth - b.depth);
  for (const p of projected) {
    const [x, y] = toScreen(p);
    svg.circle(x, y, 3.5, {
      fill: "#1f5fd0",
      "fill-opacity": p.depth < 0 ? 0.35 : 0.9,
    });
  }
  svg.text(20, 26, request.title ?? "stroboscopic points on the spin sphere", {
    "font-size": 14,
  });
  return svg.toString(rootAttrs("BlochProjection", checksum));
}

function renderHeatmap(request: FigureRequest): string {
  const { rows } = parseSweepCsv(request.input);
  if (rows.some((r) => r.m === null)) {
    throw new SchemaError(`${request.input}: phase heatmap needs the spectral-width column`);
  }
  const checksum = checksumOf(rows.map((r) => [r.epsilon, r.m, r.phase] as Cell[]));
  const epsValues = [...new Set(rows.map((r) => r.epsilon))].sort((a, b) => a - b);
  const mValues = [...new Set(rows.map((r) => r.m as number))].sort((a, b) => a - b);
  const phasesPresent = [...new Set(rows.map((r) => r.phase))].sort();
  const svg = new SvgBuilder(720, 480);
  const box = { left: 70, right: 560, top: 40, bottom: 400 };
  const dEps = epsValues.length > 1 ? epsValues[1] - epsValues[0] : 1;
  const dM = mValues.length > 1 ? mValues[1] - mValues[0] : 1;
  const xScale = linearScale(epsValues[0] - dEps / 2, epsValues[epsValues.length - 1] + dEps / 2,
                             box.left, box.right);
  const yScale = linearScale(mValues[0] - dM / 2, mValues[mValues.length - 1] + dM / 2,
                             box.bottom, box.top);
  for (const row of rows) {
    const m = row.m as number;
    const x0 = xScale(row.epsilon - dEps / 2);
    const y0 = yScale(m + dM / 2);
    svg.rect(x0, y0, xScale(row.epsilon + dEps / 2) - x0, yScale(m - dM / 2) - y0, {
      fill: PHASE_COLORS[row.phase] ?? PHASE_COLORS.Unresolved,
    });
  }
  svg.axes(box, xScale, yScale,
           ticks(epsValues[0], epsValues[epsValues.length - 1], 6),
           ticks(mValues[0], mValues[mValues.length - 1], 6),
           "detuning error epsilon", "spectral width m");
  const boundary = 2 * rows[0].kappa0;
  if (boundary >= mValues[0] - dM / 2 && boundary <= mValues[mValues.length - 1] + dM / 2) {
    const y = yScale(boundary);
    svg.line(box.left, y, box.right, y, {
      stroke: "#111", "stroke-width": 2, "stroke-dasharray": "8 5",
    });
    svg.text(box.right - 6, y - 6, "m = 2*kappa0", {
      "font-size": 12, "text-anchor": "end",
    });
  }
  phasesPresent.forEach((phase, i) => {
    const y = box.top + 14 + i * 24;
    svg.rect(box.right + 18, y - 11, 14, 14, {
      fill: PHASE_COLORS[phase] ?? PHASE_COLORS.Unresolved,
      id: `legend-${phase}`,
    });
    svg.text(box.right + 38, y, phase, { "font-size": 12 });
  });
  svg.text(box.left, box.top - 10, request.title ?? "dynamical phases", { "font-size": 14 });
  return svg.toString(rootAttrs("PhaseHeatmap", checksum));
}

function renderKappaTrace(request: FigureRequest): string {
  const rows = parseKappaCsv(request.input);
  const checksum = checksumOf(rows.map((r) => [r.t, r.kappa] as Cell[]));
  const svg = new SvgBuilder(640, 420);
  const box = { left: 60, right: 620, top: 40, bottom: 360 };
  const tMax = rows[rows.length - 1].t;
  const kMin = Math.min(...rows.map((r) => r.kappa));
  const kMax = Math.max(...rows.map((r) => r.kappa));
  const pad = 0.05 * (kMax - kMin || 1);
  const xScale = linearScale(rows[0].t, tMax, box.left, box.right);
  const yScale = linearScale(kMin - pad, kMax + pad, box.bottom, box.top);
  svg.axes(box, xScale, yScale, ticks(rows[0].t, tMax, 6), ticks(kMin, kMax, 6),
           "time t", "dissipation rate kappa(t)");
  if (kMin < 0 && kMax > 0) {
    svg.line(box.left, yScale(0), box.right, yScale(0), {
      stroke: "#bbb", "stroke-dasharray": "4 3",
    });
  }
  svg.polyline(rows.map((r) => [xScale(r.t), yScale(r.kappa)] as [number, number]), {
    stroke: "#1f5fd0", "stroke-width": 1.4,
  });
  svg.text(box.left, box.top - 10, request.title ?? "dissipation rate", { "font-size": 14 });
  return svg.toString(rootAttrs("KappaTrace", checksum));
}

export function renderToString(request: FigureRequest): string {
  switch (request.kind) {
    case "TimeSeries":
      return renderTimeSeries(request);
    case "BlochProjection":
      return renderBloch(request);
    case "PhaseHeatmap":
      return renderHeatmap(request);
    case "KappaTrace":
      return renderKappaTrace(request);
    default:
      throw new SchemaError(`unknown figure kind ${JSON.stringify(request.kind)}`);
  }
}

export function render(request: FigureRequest): void {
  writeFileSync(request.output, renderToString(request), "utf8");
}
