/**
 * Minimal deterministic SVG scene builder shared by the plot scripts.
 *
 * No timestamps, no randomness: identical inputs give identical bytes.
 */

export interface Frame {
  width: number;
  height: number;
  left: number;
  right: number;
  top: number;
  bottom: number;
}

export const DEFAULT_FRAME: Frame = {
  width: 640,
  height: 440,
  left: 70,
  right: 25,
  top: 45,
  bottom: 55,
};

export function plotArea(f: Frame) {
  return {
    x0: f.left,
    y0: f.top,
    x1: f.width - f.right,
    y1: f.height - f.bottom,
  };
}

/** Affine map from data interval to pixel interval. */
export function scale(d0: number, d1: number, p0: number, p1: number) {
  const span = d1 - d0 || 1;
  return (v: number) => p0 + ((v - d0) / span) * (p1 - p0);
}

export function fmt(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 0.01 && a < 10000) return String(Number(v.toPrecision(4)));
  return v.toExponential(2);
}

export function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function text(
  x: number,
  y: number,
  content: string,
  opts: { size?: number; anchor?: string; fill?: string; cls?: string } = {}
): string {
  const size = opts.size ?? 12;
  const anchor = opts.anchor ?? "start";
  const fill = opts.fill ?? "#222";
  const cls = opts.cls ? ` class="${opts.cls}"` : "";
  return (
    `<text${cls} x="${fmt(x)}" y="${fmt(y)}" font-size="${size}" ` +
    `text-anchor="${anchor}" fill="${fill}" font-family="Helvetica,Arial,sans-serif">` +
    `${esc(content)}</text>`
  );
}

export function line(
  x1: number,
  y1: number,
  x2: number,
  y2: number,
  opts: { color?: string; width?: number; dash?: string; cls?: string } = {}
): string {
  const dash = opts.dash ? ` stroke-dasharray="${opts.dash}"` : "";
  const cls = opts.cls ? ` class="${opts.cls}"` : "";
  return (
    `<line${cls} x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" ` +
    `stroke="${opts.color ?? "#222"}" stroke-width="${opts.width ?? 1}"${dash}/>`
  );
}

export function polyline(
  pts: Array<[number, number]>,
  opts: { color?: string; width?: number; dash?: string; cls?: string } = {}
): string {
  const points = pts.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
  const dash = opts.dash ? ` stroke-dasharray="${opts.dash}"` : "";
  const cls = opts.cls ? ` class="${opts.cls}"` : "";
  return (
    `<polyline${cls} points="${points}" fill="none" ` +
    `stroke="${opts.color ?? "#222"}" stroke-width="${opts.width ?? 1.5}"${dash}/>`
  );
}

export function circle(x: number, y: number, r: number, color: string, cls?: string): string {
  const c = cls ? ` class="${cls}"` : "";
  return `<circle${c} cx="${fmt(x)}" cy="${fmt(y)}" r="${r}" fill="${color}"/>`;
}

export function rect(
  x: number,
  y: number,
  w: number,
  h: number,
  color: string,
  cls?: string
): string {
  const c = cls ? ` class="${cls}"` : "";
  return (
    `<rect${c} x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" ` +
    `fill="${color}"/>`
  );
}

export function document(f: Frame, body: string[]): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${f.width}" height="${f.height}" ` +
      `viewBox="0 0 ${f.width} ${f.height}">`,
    `<rect x="0" y="0" width="${f.width}" height="${f.height}" fill="#ffffff"/>`,
    ...body,
    `</svg>`,
    ``,
  ].join("\n");
}

/** Axis frame with title and axis labels. */
export function axes(f: Frame, title: string, xLabel: string, yLabel: string): string[] {
  const a = plotArea(f);
  return [
    line(a.x0, a.y1, a.x1, a.y1),
    line(a.x0, a.y0, a.x0, a.y1),
    text(f.width / 2, 24, title, { size: 14, anchor: "middle" }),
    text((a.x0 + a.x1) / 2, f.height - 14, xLabel, { anchor: "middle" }),
    `<g transform="rotate(-90 18 ${(a.y0 + a.y1) / 2})">` +
      text(18, (a.y0 + a.y1) / 2, yLabel, { anchor: "middle" }) +
      `</g>`,
  ];
}

/** Decade tick positions covering [lo, hi] (log10 values). */
export function decadeTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  for (let d = Math.ceil(lo); d <= Math.floor(hi); d++) ticks.push(d);
  if (ticks.length === 0) ticks.push(Math.round((lo + hi) / 2));
  return ticks;
}
