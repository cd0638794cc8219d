/** Shared --input/--output handling for the plot scripts. */

import { readFileSync, writeFileSync } from "node:fs";
import { parseArgs } from "node:util";

export interface PlotIo {
  input: string;
  output: string;
}

export function parsePlotArgs(argv: string[]): PlotIo {
  const { values } = parseArgs({
    args: argv,
    options: {
      input: { type: "string" },
      output: { type: "string" },
    },
  });
  if (!values.input || !values.output) {
    throw new Error("usage: --input <path> --output <path.svg>");
  }
  return { input: values.input, output: values.output };
}

/** Run a renderer over the input file; any failure exits nonzero. */
export function runPlot(argv: string[], render: (raw: string) => string): void {
  try {
    const io = parsePlotArgs(argv);
    const svg = render(readFileSync(io.input, "utf-8"));
    writeFileSync(io.output, svg);
    console.log(`wrote ${io.output}`);
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    process.exit(1);
  }
}
