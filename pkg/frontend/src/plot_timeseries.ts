/**
 * Time series of the controlling functionals from a diagnostics CSV:
 * the low norm A(t), the high norm B(t), and the running integral intB(t),
 * on a log scale (viscous decay spans decades).
 *
 * Usage: node dist/plot_timeseries.js --input diagnostics.csv --output series.svg
 */

import { DiagnosticsRow, parseDiagnosticsCsv } from "./schema.js";
import {
  DEFAULT_FRAME,
  axes,
  decadeTicks,
  document,
  fmt,
  line,
  plotArea,
  polyline,
  scale,
  text,
} from "./svg.js";
import { runPlot } from "./cli_util.js";

const SERIES: Array<{ key: "A" | "B" | "intB"; color: string; label: string }> = [
  { key: "A", color: "#4361ee", label: "A(t) low norm" },
  { key: "B", color: "#e63946", label: "B(t) high norm" },
  { key: "intB", color: "#2d6a4f", label: "intB(t) running integral" },
];

export function renderTimeSeries(rows: DiagnosticsRow[]): string {
  const f = DEFAULT_FRAME;
  const a = plotArea(f);
  const times = rows.map((r) => r.t);

  // log-scale y over all positive values of the plotted series
  const positives = SERIES.flatMap(({ key }) =>
    rows.map((r) => r[key]).filter((v) => v > 0)
  );
  if (positives.length === 0) {
    throw new Error("no positive values to plot");
  }
  const y0 = Math.log10(Math.min(...positives));
  const y1 = Math.log10(Math.max(...positives));
  const padY = 0.05 * (y1 - y0 || 1);

  const sx = scale(Math.min(...times), Math.max(...times), a.x0, a.x1);
  const sy = scale(y0 - padY, y1 + padY, a.y1, a.y0);

  const body = axes(f, "Controlling functionals along the run", "t", "value (log scale)");

  const nTicks = 5;
  for (let i = 0; i <= nTicks; i++) {
    const t = Math.min(...times) + ((Math.max(...times) - Math.min(...times)) * i) / nTicks;
    body.push(line(sx(t), a.y1, sx(t), a.y1 + 5));
    body.push(text(sx(t), a.y1 + 18, fmt(t), { anchor: "middle", size: 11 }));
  }
  for (const d of decadeTicks(y0 - padY, y1 + padY)) {
    body.push(line(a.x0 - 5, sy(d), a.x0, sy(d)));
    body.push(text(a.x0 - 8, sy(d) + 4, `1e${d}`, { anchor: "end", size: 11 }));
  }

  SERIES.forEach(({ key, color, label }, s) => {
    const pts: Array<[number, number]> = [];
    for (const r of rows) {
      if (r[key] > 0) pts.push([sx(r.t), sy(Math.log10(r[key]))]);
    }
    if (pts.length > 1) {
      body.push(polyline(pts, { color, width: 1.5, cls: `series-${key}` }));
    }
    body.push(text(a.x1 - 180, a.y0 + 18 + 16 * s, label, { fill: color, size: 11 }));
  });

  return document(f, body);
}

export function renderFromCsv(raw: string): string {
  return renderTimeSeries(parseDiagnosticsCsv(raw));
}

const isMain = process.argv[1]?.endsWith("plot_timeseries.js");
if (isMain) {
  runPlot(process.argv.slice(2), renderFromCsv);
}
