import { readFileSync } from "node:fs";
import Papa from "papaparse";

export interface Table {
  columns: string[];
  /** Column-major numeric data; non-numeric cells become NaN. */
  numeric: Map<string, number[]>;
  /** Raw string cells for label-like columns. */
  raw: Map<string, string[]>;
  rowCount: number;
}

export class CsvError extends Error {}

/** Parse one of the runner's CSV artifacts (header row, LF endings). */
export function readTable(path: string): Table {
  let text: string;
  try {
    text = readFileSync(path, "utf-8");
  } catch (err) {
    throw new CsvError(`cannot read ${path}: ${(err as Error).message}`);
  }
  const parsed = Papa.parse<string[]>(text.trim(), { skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    throw new CsvError(`${path}: ${parsed.errors[0].message}`);
  }
  const rows = parsed.data;
  if (rows.length < 2) {
    throw new CsvError(`${path}: need a header row and at least one data row`);
  }
  const columns = rows[0];
  const numeric = new Map<string, number[]>();
  const raw = new Map<string, string[]>();
  columns.forEach((name, index) => {
    const cells = rows.slice(1).map((row) => row[index] ?? "");
    raw.set(name, cells);
    numeric.set(
      name,
      cells.map((cell) => {
        const value = Number(cell);
        return cell === "" || Number.isNaN(value) ? NaN : value;
      }),
    );
  });
  return { columns, numeric, raw, rowCount: rows.length - 1 };
}

export function numericColumn(table: Table, name: string, path = "input"): number[] {
  const values = table.numeric.get(name);
  if (!values || values.every((v) => Number.isNaN(v))) {
    throw new CsvError(`${path}: missing numeric column '${name}'`);
  }
  return values;
}
