import { spawnSync } from "node:child_process";
import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { renderBlocks, renderFromJson as renderBlocksFromJson } from "../src/plot_blocks.js";
import { renderFromJson as renderRateFromJson, renderRatePlot } from "../src/plot_rate.js";
import { renderFromCsv, renderTimeSeries } from "../src/plot_timeseries.js";
import { parseDiagnosticsCsv, validateBesov, validateReport } from "../src/schema.js";

const SAMPLE_DIR = join(__dirname, "..", "sample");
const DIST_DIR = join(__dirname, "..", "dist");

const sampleReportRaw = readFileSync(join(SAMPLE_DIR, "convergence_report.json"), "utf-8");
const sampleCsvRaw = readFileSync(join(SAMPLE_DIR, "diagnostics.csv"), "utf-8");
const sampleBesovRaw = readFileSync(join(SAMPLE_DIR, "besov.json"), "utf-8");

describe("rate plot", () => {
  it("annotates the report slope to three decimals", () => {
    const report = validateReport(JSON.parse(sampleReportRaw));
    const svg = renderRatePlot(report);
    const match = svg.match(/fitted slope = (-?\d+\.\d{3})</);
    expect(match).not.toBeNull();
    expect(match![1]).toBe(report.slope.toFixed(3));
  });

  it("draws one point per epsilon plus fit and guide lines", () => {
    const report = validateReport(JSON.parse(sampleReportRaw));
    const svg = renderRatePlot(report);
    expect(svg.match(/class="data-point"/g)).toHaveLength(report.epsilons.length);
    expect(svg).toContain('class="fit-line"');
    expect(svg).toContain('class="guide-line"');
  });

  it("rejects empty epsilons", () => {
    const doc = JSON.parse(sampleReportRaw);
    doc.epsilons = [];
    doc.errors = [];
    expect(() => validateReport(doc)).toThrow(/epsilons/);
  });

  it("is deterministic", () => {
    expect(renderRateFromJson(sampleReportRaw)).toBe(renderRateFromJson(sampleReportRaw));
  });
});

describe("time series plot", () => {
  it("renders the three series from the sample CSV", () => {
    const svg = renderFromCsv(sampleCsvRaw);
    expect(svg).toContain('class="series-A"');
    expect(svg).toContain('class="series-B"');
    expect(svg).toContain('class="series-intB"');
  });

  it("shows the monotone decay of A", () => {
    const rows = parseDiagnosticsCsv(sampleCsvRaw);
    const a = rows.map((r) => r.A);
    for (let i = 1; i < a.length; i++) expect(a[i]).toBeLessThan(a[i - 1]);
  });

  it("rejects an empty CSV", () => {
    expect(() => renderFromCsv("")).toThrow(/empty/);
  });

  it("rejects a header mismatch", () => {
    expect(() => renderFromCsv("a,b,c\n1,2,3\n")).toThrow(/header/);
  });
});

describe("block spectrum plot", () => {
  it("draws as many bars as the blocks array has entries", () => {
    const record = validateBesov(JSON.parse(sampleBesovRaw));
    const svg = renderBlocks(record);
    expect(svg.match(/class="block-bar"/g)).toHaveLength(record.blocks.length);
  });

  it("rejects malformed blocks", () => {
    expect(() => renderBlocksFromJson('{"s": 0.5, "value": 1, "blocks": [[1.5, 2]]}')).toThrow(
      /blocks/
    );
  });
});

describe("CLI exit codes", () => {
  const cases: Array<[string, string, string]> = [
    ["plot_rate.js", '{"epsilons": []}', "rate"],
    ["plot_timeseries.js", "not,a,diagnostics,csv\n1,2,3,4\n", "series"],
    ["plot_blocks.js", '{"s": "bad"}', "blocks"],
  ];

  it.each(cases)("%s exits nonzero on schema-violating input", (script, payload, label) => {
    const dir = mkdtempSync(join(tmpdir(), "figtest-"));
    const input = join(dir, `${label}.in`);
    writeFileSync(input, payload);
    const proc = spawnSync("node", [
      join(DIST_DIR, script),
      "--input",
      input,
      "--output",
      join(dir, `${label}.svg`),
    ]);
    expect(proc.status).not.toBe(0);
    expect(proc.stderr.toString()).toContain("error:");
  });

  it.each(cases)("%s exits nonzero on a missing input file", (script, _payload, label) => {
    const dir = mkdtempSync(join(tmpdir(), "figtest-"));
    const proc = spawnSync("node", [
      join(DIST_DIR, script),
      "--input",
      join(dir, "does-not-exist"),
      "--output",
      join(dir, `${label}.svg`),
    ]);
    expect(proc.status).not.toBe(0);
  });

  it("plot_rate.js succeeds on the shipped sample and embeds the slope", () => {
    const dir = mkdtempSync(join(tmpdir(), "figtest-"));
    const out = join(dir, "rate.svg");
    const proc = spawnSync("node", [
      join(DIST_DIR, "plot_rate.js"),
      "--input",
      join(SAMPLE_DIR, "convergence_report.json"),
      "--output",
      out,
    ]);
    expect(proc.status).toBe(0);
    const svg = readFileSync(out, "utf-8");
    const report = validateReport(JSON.parse(sampleReportRaw));
    expect(svg).toContain(`fitted slope = ${report.slope.toFixed(3)}`);
  });
});

describe("sample data sanity", () => {
  it("sample report validates", () => {
    const report = validateReport(JSON.parse(sampleReportRaw));
    expect(report.epsilons.length).toBeGreaterThanOrEqual(3);
  });

  it("time series render is deterministic", () => {
    expect(renderTimeSeries(parseDiagnosticsCsv(sampleCsvRaw))).toBe(
      renderTimeSeries(parseDiagnosticsCsv(sampleCsvRaw))
    );
  });
});
