/**
 * Validation of the solver's exported file formats.
 *
 * Inputs come from the simulation package's documented exports:
 *   - convergence_report.json  (epsilon sweep results, fitted slopes)
 *   - diagnostics.csv          (per-probe time series)
 *   - besov JSON               (one norm with per-block contributions)
 *
 * Validators throw SchemaError with the offending field in the message;
 * the plot CLIs turn that into a nonzero exit.
 */

export class SchemaError extends Error {}

// ---------------------------------------------------------------------------
// convergence_report.json
// ---------------------------------------------------------------------------

export interface ConvergenceReport {
  epsilons: number[];
  errors: number[];
  sup_part: number[];
  int_part: number[];
  p_dz: number[];
  slope: number;
  slope_pdz: number;
  config_hash: string;
}

function numberArray(doc: Record<string, unknown>, key: string): number[] {
  const val = doc[key];
  if (!Array.isArray(val) || !val.every((x) => typeof x === "number" && isFinite(x))) {
    throw new SchemaError(`report.${key} must be an array of finite numbers`);
  }
  return val as number[];
}

export function validateReport(doc: unknown): ConvergenceReport {
  if (typeof doc !== "object" || doc === null || Array.isArray(doc)) {
    throw new SchemaError("report must be a JSON object");
  }
  const obj = doc as Record<string, unknown>;
  const epsilons = numberArray(obj, "epsilons");
  if (epsilons.length === 0) {
    throw new SchemaError("report.epsilons must not be empty");
  }
  if (epsilons.some((e, i) => e <= 0 || (i > 0 && e >= epsilons[i - 1]))) {
    throw new SchemaError("report.epsilons must be positive and strictly decreasing");
  }
  const errors = numberArray(obj, "errors");
  if (errors.length !== epsilons.length || errors.some((e) => e <= 0)) {
    throw new SchemaError("report.errors must be positive and match epsilons in length");
  }
  for (const key of ["sup_part", "int_part", "p_dz"]) {
    if (numberArray(obj, key).length !== epsilons.length) {
      throw new SchemaError(`report.${key} must match epsilons in length`);
    }
  }
  if (typeof obj.slope !== "number" || !isFinite(obj.slope)) {
    throw new SchemaError("report.slope must be a finite number");
  }
  if (typeof obj.slope_pdz !== "number" || !isFinite(obj.slope_pdz)) {
    throw new SchemaError("report.slope_pdz must be a finite number");
  }
  if (typeof obj.config_hash !== "string") {
    throw new SchemaError("report.config_hash must be a string");
  }
  return {
    epsilons,
    errors,
    sup_part: obj.sup_part as number[],
    int_part: obj.int_part as number[],
    p_dz: obj.p_dz as number[],
    slope: obj.slope,
    slope_pdz: obj.slope_pdz,
    config_hash: obj.config_hash,
  };
}

// ---------------------------------------------------------------------------
// diagnostics.csv
// ---------------------------------------------------------------------------

export const DIAGNOSTIC_COLUMNS = [
  "t",
  "A",
  "B",
  "intB",
  "l2",
  "div_residual",
  "p_gradH_norm",
  "p_dz_norm",
  "intP",
] as const;

export type DiagnosticsRow = Record<(typeof DIAGNOSTIC_COLUMNS)[number], number>;

export function parseDiagnosticsCsv(text: string): DiagnosticsRow[] {
  const lines = text.split(/\r?\n/).filter((l) => l.trim().length > 0);
  if (lines.length === 0) {
    throw new SchemaError("diagnostics CSV is empty");
  }
  const header = lines[0].split(",");
  if (header.join(",") !== DIAGNOSTIC_COLUMNS.join(",")) {
    throw new SchemaError(
      `diagnostics CSV header mismatch: expected "${DIAGNOSTIC_COLUMNS.join(",")}"`
    );
  }
  if (lines.length < 2) {
    throw new SchemaError("diagnostics CSV has no data rows");
  }
  return lines.slice(1).map((line, i) => {
    const cells = line.split(",");
    if (cells.length !== DIAGNOSTIC_COLUMNS.length) {
      throw new SchemaError(`diagnostics CSV row ${i + 1} has ${cells.length} cells`);
    }
    const row = {} as DiagnosticsRow;
    DIAGNOSTIC_COLUMNS.forEach((col, c) => {
      const v = Number(cells[c]);
      if (!isFinite(v)) {
        throw new SchemaError(`diagnostics CSV row ${i + 1}, column ${col}: not a number`);
      }
      row[col] = v;
    });
    return row;
  });
}

// ---------------------------------------------------------------------------
// besov JSON
// ---------------------------------------------------------------------------

export interface BesovRecord {
  s: number;
  value: number;
  blocks: Array<[number, number]>;
}

export function validateBesov(doc: unknown): BesovRecord {
  if (typeof doc !== "object" || doc === null || Array.isArray(doc)) {
    throw new SchemaError("besov record must be a JSON object");
  }
  const obj = doc as Record<string, unknown>;
  if (typeof obj.s !== "number" || !isFinite(obj.s)) {
    throw new SchemaError("besov.s must be a finite number");
  }
  if (typeof obj.value !== "number" || !(obj.value >= 0)) {
    throw new SchemaError("besov.value must be a nonnegative number");
  }
  const blocks = obj.blocks;
  if (
    !Array.isArray(blocks) ||
    !blocks.every(
      (b) =>
        Array.isArray(b) &&
        b.length === 2 &&
        Number.isInteger(b[0]) &&
        typeof b[1] === "number" &&
        b[1] >= 0
    )
  ) {
    throw new SchemaError("besov.blocks must be [j, contribution] pairs");
  }
  return { s: obj.s, value: obj.value, blocks: blocks as Array<[number, number]> };
}
