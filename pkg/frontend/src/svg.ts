/** Minimal SVG assembly: scales, ticks, shape elements. No DOM required. */

export type Scale = (value: number) => number;

export function linearScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const span = d1 - d0 || 1;
  return (value: number) => r0 + ((value - d0) / span) * (r1 - r0);
}

/** Round tick positions covering [min, max] (roughly `count` of them). */
export function ticks(min: number, max: number, count = 5): number[] {
  if (!(max > min)) {
    return [min];
  }
  const rawStep = (max - min) / Math.max(1, count);
  const power = Math.pow(10, Math.floor(Math.log10(rawStep)));
  const candidates = [1, 2, 2.5, 5, 10].map((m) => m * power);
  const step = candidates.find((s) => (max - min) / s <= count + 0.5) ?? candidates[4];
  const start = Math.ceil(min / step) * step;
  const out: number[] = [];
  for (let v = start; v <= max + 1e-12 * Math.abs(step); v += step) {
    out.push(Math.abs(v) < 1e-12 ? 0 : v);
  }
  return out;
}

export function fmtTick(value: number): string {
  if (value === 0) {
    return "0";
  }
  const abs = Math.abs(value);
  if (abs >= 1e4 || abs < 1e-3) {
    return value.toExponential(1);
  }
  return String(Number(value.toPrecision(6)));
}

function escapeText(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function attrs(pairs: Record<string, string | number>): string {
  return Object.entries(pairs)
    .map(([key, value]) => ` ${key}="${value}"`)
    .join("");
}

const round = (v: number) => Math.round(v * 100) / 100;

export class SvgBuilder {
  private parts: string[] = [];

  constructor(
    readonly width: number,
    readonly height: number,
  ) {}

  line(x1: number, y1: number, x2: number, y2: number, extra: Record<string, string | number> = {}): void {
    this.parts.push(
      `<line${attrs({ x1: round(x1), y1: round(y1), x2: round(x2), y2: round(y2), ...extra })}/>`,
    );
  }

  circle(cx: number, cy: number, r: number, extra: Record<string, string | number> = {}): void {
    this.parts.push(`<circle${attrs({ cx: round(cx), cy: round(cy), r, ...extra })}/>`);
  }

  rect(x: number, y: number, w: number, h: number, extra: Record<string, string | number> = {}): void {
    this.parts.push(
      `<rect${attrs({ x: round(x), y: round(y), width: round(w), height: round(h), ...extra })}/>`,
    );
  }

  polyline(points: Array<[number, number]>, extra: Record<string, string | number> = {}): void {
    const joined = points.map(([x, y]) => `${round(x)},${round(y)}`).join(" ");
    this.parts.push(`<polyline${attrs({ points: joined, fill: "none", ...extra })}/>`);
  }

  text(x: number, y: number, content: string, extra: Record<string, string | number> = {}): void {
    this.parts.push(
      `<text${attrs({ x: round(x), y: round(y), "font-family": "sans-serif", ...extra })}>` +
        `${escapeText(content)}</text>`,
    );
  }

  /** Frame, tick marks and tick labels for a plot area. */
  axes(
    box: { left: number; right: number; top: number; bottom: number },
    xScale: Scale,
    yScale: Scale,
    xTicks: number[],
    yTicks: number[],
    xLabel: string,
    yLabel: string,
  ): void {
    this.rect(box.left, box.top, box.right - box.left, box.bottom - box.top, {
      fill: "none",
      stroke: "#333",
    });
    for (const t of xTicks) {
      const x = xScale(t);
      this.line(x, box.bottom, x, box.bottom + 5, { stroke: "#333" });
      this.text(x, box.bottom + 18, fmtTick(t), { "font-size": 11, "text-anchor": "middle" });
    }
    for (const t of yTicks) {
      const y = yScale(t);
      this.line(box.left - 5, y, box.left, y, { stroke: "#333" });
      this.text(box.left - 8, y + 4, fmtTick(t), { "font-size": 11, "text-anchor": "end" });
    }
    this.text((box.left + box.right) / 2, box.bottom + 36, xLabel, {
      "font-size": 13,
      "text-anchor": "middle",
    });
    this.text(14, (box.top + box.bottom) / 2, yLabel, {
      "font-size": 13,
      "text-anchor": "middle",
      transform: `rotate(-90 14 ${round((box.top + box.bottom) / 2)})`,
    });
  }

  toString(rootAttrs: Record<string, string> = {}): string {
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" height="${this.height}"` +
      `${attrs(rootAttrs)}>\n<rect width="${this.width}" height="${this.height}" fill="white"/>\n` +
      this.parts.join("\n") +
      "\n</svg>\n"
    );
  }
}
