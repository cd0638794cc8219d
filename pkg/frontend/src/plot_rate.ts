/**
 * Thin-layer limit rate plot.
 *
 * Log-log scatter of the measured error E(eps) against eps, the fitted
 * slope line from the report, and a reference slope-1 guide. The fitted
 * slope is annotated to three decimals, straight from the report.
 *
 * Usage: node dist/plot_rate.js --input convergence_report.json --output rate.svg
 */

import { ConvergenceReport, validateReport } from "./schema.js";
import {
  DEFAULT_FRAME,
  axes,
  circle,
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

const POINT_COLOR = "#4361ee";
const FIT_COLOR = "#e63946";
const GUIDE_COLOR = "#2d6a4f";

export function renderRatePlot(report: ConvergenceReport): string {
  const f = DEFAULT_FRAME;
  const a = plotArea(f);
  const lx = report.epsilons.map(Math.log10);
  const ly = report.errors.map(Math.log10);

  const padX = 0.08 * (Math.max(...lx) - Math.min(...lx) || 1);
  const x0 = Math.min(...lx) - padX;
  const x1 = Math.max(...lx) + padX;
  const padY = 0.1 * (Math.max(...ly) - Math.min(...ly) || 1);
  const y0 = Math.min(...ly) - padY;
  const y1 = Math.max(...ly) + padY;

  const sx = scale(x0, x1, a.x0, a.x1);
  const sy = scale(y0, y1, a.y1, a.y0); // SVG y grows downward

  const body = axes(f, "Thin-layer limit error vs eps", "eps (log scale)", "E(eps) (log scale)");

  // tick marks: one per epsilon on x, decades on y
  for (const [i, e] of report.epsilons.entries()) {
    const px = sx(lx[i]);
    body.push(line(px, a.y1, px, a.y1 + 5));
    body.push(text(px, a.y1 + 18, fmt(e), { anchor: "middle", size: 11 }));
  }
  for (const d of decadeTicks(y0, y1)) {
    const py = sy(d);
    body.push(line(a.x0 - 5, py, a.x0, py));
    body.push(text(a.x0 - 8, py + 4, `1e${d}`, { anchor: "end", size: 11 }));
  }

  // least-squares intercept for the report's slope
  const meanX = lx.reduce((s, v) => s + v, 0) / lx.length;
  const meanY = ly.reduce((s, v) => s + v, 0) / ly.length;
  const fitAt = (x: number) => meanY + report.slope * (x - meanX);
  body.push(
    polyline(
      [
        [sx(x0), sy(fitAt(x0))],
        [sx(x1), sy(fitAt(x1))],
      ],
      { color: FIT_COLOR, width: 1.5, cls: "fit-line" }
    )
  );

  // slope-1 guide through the same anchor point, dashed
  const guideAt = (x: number) => meanY + 1.0 * (x - meanX);
  body.push(
    polyline(
      [
        [sx(x0), sy(guideAt(x0))],
        [sx(x1), sy(guideAt(x1))],
      ],
      { color: GUIDE_COLOR, width: 1.2, dash: "6,4", cls: "guide-line" }
    )
  );

  for (const [i] of lx.entries()) {
    body.push(circle(sx(lx[i]), sy(ly[i]), 4, POINT_COLOR, "data-point"));
  }

  body.push(
    text(a.x0 + 10, a.y0 + 18, `fitted slope = ${report.slope.toFixed(3)}`, {
      fill: FIT_COLOR,
      cls: "slope-annotation",
    })
  );
  body.push(
    text(a.x0 + 10, a.y0 + 36, "reference slope 1", { fill: GUIDE_COLOR, size: 11 })
  );
  body.push(
    text(a.x1, a.y0 - 8, `config ${report.config_hash}`, { anchor: "end", size: 10, fill: "#888" })
  );

  return document(f, body);
}

export function renderFromJson(raw: string): string {
  let doc: unknown;
  try {
    doc = JSON.parse(raw);
  } catch {
    throw new Error("input is not valid JSON");
  }
  return renderRatePlot(validateReport(doc));
}

const isMain = process.argv[1]?.endsWith("plot_rate.js");
if (isMain) {
  runPlot(process.argv.slice(2), renderFromJson);
}
