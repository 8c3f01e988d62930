/**
 * Minimal CSV reading for the numeric, comma-separated, headed files the
 * fitting tool writes (no quoting, LF endings).
 */

import { readFileSync } from "fs";

export interface Table {
  columns: string[];
  rows: number[][];
}

export function parseCsv(text: string, path: string): Table {
  const lines = text.split("\n").filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new Error(`${path}: empty input`);
  }
  const columns = lines[0].split(",").map((c) => c.trim());
  const rows: number[][] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length !== columns.length) {
      throw new Error(
        `${path}: row ${i} has ${cells.length} cells, expected ${columns.length}`,
      );
    }
    rows.push(cells.map((c) => Number(c)));
  }
  if (rows.length === 0) {
    throw new Error(`${path}: no data rows`);
  }
  return { columns, rows };
}

export function readCsv(path: string): Table {
  return parseCsv(readFileSync(path, "utf8"), path);
}

export function column(table: Table, name: string, path = "input"): number[] {
  const index = table.columns.indexOf(name);
  if (index < 0) {
    throw new Error(`${path}: missing column '${name}' (have: ${table.columns.join(", ")})`);
  }
  return table.rows.map((r) => r[index]);
}

/** Column names matching a prefix, in file order (e.g. beta_raw_1..p). */
export function columnsWithPrefix(table: Table, prefix: string): string[] {
  return table.columns.filter((c) => c.startsWith(prefix));
}
