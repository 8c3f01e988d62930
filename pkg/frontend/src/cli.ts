/**
 * Usage: node dist/cli.js <kind> <input.csv...> <output.svg> [--deterministic]
 *
 * Kinds: trace (1-2 chain.csv), boxplot (estimates.csv), link (fitted.csv),
 * acf (1-2 acf.csv), dhist (chain.csv). With --deterministic the output
 * embeds no timestamp and is a pure function of the inputs.
 */

import { writeFileSync } from "fs";

import { readCsv } from "./csv.js";
import { FigureKind, render } from "./figures.js";

const KINDS: FigureKind[] = ["trace", "boxplot", "link", "acf", "dhist"];

export function main(argv: string[]): number {
  const args = argv.filter((a) => a !== "--deterministic");
  const deterministic = args.length !== argv.length;
  if (args.length < 3) {
    console.error(
      "usage: cli <trace|boxplot|link|acf|dhist> <input.csv...> <output.svg> [--deterministic]",
    );
    return 2;
  }
  const kind = args[0] as FigureKind;
  if (!KINDS.includes(kind)) {
    console.error(`unknown figure kind '${args[0]}'`);
    return 2;
  }
  const inputs = args.slice(1, -1);
  const output = args[args.length - 1];
  try {
    const tables = inputs.map((p) => readCsv(p));
    writeFileSync(output, render(kind, tables, deterministic));
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    return 1;
  }
  console.log(`wrote ${output}`);
  return 0;
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}
