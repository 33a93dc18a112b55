import { writeFileSync } from "node:fs";

import { readTable } from "./csv.js";
import { KIND_SPECS, PlotKind, checkSchema } from "./manifest.js";
import {
  RenderOptions,
  renderBlochTrajectory,
  renderDecayCurve,
  renderPointerEntropy,
  renderWignerHeatmap,
  renderZenoRates,
} from "./plots.js";

type Renderer = (
  table: ReturnType<typeof readTable>,
  path: string,
  options: RenderOptions,
) => string;

const RENDERERS: Record<PlotKind, Renderer> = {
  "decay-curve": renderDecayCurve,
  "bloch-trajectory": renderBlochTrajectory,
  "wigner-heatmap": renderWignerHeatmap,
  "zeno-rates": renderZenoRates,
  "pointer-entropy": renderPointerEntropy,
};

export const PLOT_KINDS = Object.keys(KIND_SPECS) as PlotKind[];

/** Parse, schema-check and render one CSV artifact to an SVG string. */
export function renderSvg(kind: PlotKind, inputPath: string, options: RenderOptions = {}): string {
  const table = readTable(inputPath);
  checkSchema(kind, inputPath, table);
  return RENDERERS[kind](table, inputPath, options);
}

export function renderToFile(
  kind: PlotKind,
  inputPath: string,
  outputPath: string,
  options: RenderOptions = {},
): void {
  writeFileSync(outputPath, renderSvg(kind, inputPath, options));
}
