/**
 * Dyadic block spectrum: one bar per block index j with the weighted
 * contribution 2^{js} ||block_j f|| from a besov JSON record. Every entry
 * of the blocks array is drawn (zero bars included), so the bar count
 * always matches the record.
 *
 * Usage: node dist/plot_blocks.js --input besov.json --output blocks.svg
 */

import { BesovRecord, validateBesov } from "./schema.js";
import {
  DEFAULT_FRAME,
  axes,
  document,
  fmt,
  line,
  plotArea,
  rect,
  scale,
  text,
} from "./svg.js";
import { runPlot } from "./cli_util.js";

const BAR_COLOR = "#4361ee";

export function renderBlocks(record: BesovRecord): string {
  const f = DEFAULT_FRAME;
  const a = plotArea(f);
  const n = record.blocks.length;
  if (n === 0) {
    throw new Error("besov record has no blocks");
  }
  const contributions = record.blocks.map(([, c]) => c);
  const cMax = Math.max(...contributions, Number.MIN_VALUE);
  const sy = scale(0, 1.06 * cMax, a.y1, a.y0);
  const slot = (a.x1 - a.x0) / n;
  const barW = 0.6 * slot;

  const body = axes(
    f,
    `Block contributions at s = ${fmt(record.s)}`,
    "block index j",
    "2^(js) block norm"
  );

  record.blocks.forEach(([j, c], i) => {
    const cx = a.x0 + slot * (i + 0.5);
    const top = sy(c);
    body.push(rect(cx - barW / 2, top, barW, a.y1 - top, BAR_COLOR, "block-bar"));
    body.push(text(cx, a.y1 + 18, String(j), { anchor: "middle", size: 11 }));
  });

  for (let i = 0; i <= 4; i++) {
    const v = (1.06 * cMax * i) / 4;
    body.push(line(a.x0 - 5, sy(v), a.x0, sy(v)));
    body.push(text(a.x0 - 8, sy(v) + 4, fmt(v), { anchor: "end", size: 10 }));
  }

  body.push(
    text(a.x1, a.y0 - 8, `norm value = ${fmt(record.value)}`, {
      anchor: "end",
      size: 11,
      fill: "#555",
    })
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
  return renderBlocks(validateBesov(doc));
}

const isMain = process.argv[1]?.endsWith("plot_blocks.js");
if (isMain) {
  runPlot(process.argv.slice(2), renderFromJson);
}
