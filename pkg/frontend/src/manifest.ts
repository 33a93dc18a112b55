import { existsSync, readFileSync } from "node:fs";
import { dirname, join } from "node:path";

import { Table } from "./csv.js";

export type PlotKind =
  | "decay-curve"
  | "bloch-trajectory"
  | "wigner-heatmap"
  | "zeno-rates"
  | "pointer-entropy";

export class SchemaError extends Error {}

interface KindSpec {
  /** manifest schema integer this kind understands */
  schema: number;
  /** runner scenarios whose tables feed this kind */
  scenarios: string[];
  /** columns that must be present in the CSV */
  columns: string[];
}

export const KIND_SPECS: Record<PlotKind, KindSpec> = {
  "decay-curve": {
    schema: 1,
    scenarios: ["cat-dephasing", "exponential-decay", "chiral-molecule"],
    columns: ["t"],
  },
  "bloch-trajectory": {
    schema: 1,
    scenarios: [],
    columns: ["t", "pi1", "pi2", "pi3", "pi_norm"],
  },
  "wigner-heatmap": {
    schema: 1,
    scenarios: ["wigner-cat"],
    columns: ["p", "q", "W"],
  },
  "zeno-rates": {
    schema: 1,
    scenarios: ["quantum-zeno"],
    columns: ["kappa", "fitted_rate"],
  },
  "pointer-entropy": {
    schema: 1,
    scenarios: ["pointer-basis"],
    columns: ["basis", "avg_entropy"],
  },
};

/**
 * Enforce the schema contract for a plot input.
 *
 * When a runner manifest.json sits next to the CSV, its scenario must be
 * one this kind accepts and its schema_version must equal the kind's
 * expected integer. Library-produced CSVs without a manifest (Bloch
 * trajectories) are checked by their header signature instead.
 */
export function checkSchema(kind: PlotKind, inputPath: string, table: Table): void {
  const spec = KIND_SPECS[kind];
  for (const column of spec.columns) {
    if (!table.columns.includes(column)) {
      throw new SchemaError(
        `${inputPath}: column '${column}' required by ${kind} is missing ` +
          `(found: ${table.columns.join(", ")})`,
      );
    }
  }
  const manifestPath = join(dirname(inputPath), "manifest.json");
  if (!existsSync(manifestPath)) return;
  let manifest: { scenario?: string; schema_version?: number };
  try {
    manifest = JSON.parse(readFileSync(manifestPath, "utf-8"));
  } catch (err) {
    throw new SchemaError(`${manifestPath}: unreadable manifest: ${(err as Error).message}`);
  }
  if (manifest.scenario !== undefined && spec.scenarios.length > 0) {
    if (!spec.scenarios.includes(manifest.scenario)) {
      throw new SchemaError(
        `${inputPath}: scenario '${manifest.scenario}' does not feed ${kind} ` +
          `(expected one of: ${spec.scenarios.join(", ")})`,
      );
    }
  }
  if (manifest.schema_version !== undefined && manifest.schema_version !== spec.schema) {
    throw new SchemaError(
      `${inputPath}: schema_version ${manifest.schema_version} does not match ` +
        `${kind}'s expected ${spec.schema}`,
    );
  }
}
