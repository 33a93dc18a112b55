import { basename } from "node:path";

import { divergingAtZero, rgbCss, sequentialColor } from "./colormap.js";
import { CsvError, Table, numericColumn } from "./csv.js";
import {
  DEFAULT_MARGIN,
  SERIES_COLORS,
  Scale,
  SvgDocument,
  drawAxes,
  formatTick,
  linearScale,
  logScale,
} from "./svg.js";

export interface RenderOptions {
  title?: string;
  /** log-scale the y axis (decay curves only) */
  logY?: boolean;
  width?: number;
  height?: number;
}

const WIDTH = 800;
const HEIGHT = 560;

function plotArea(width: number, height: number): {
  x: [number, number];
  y: [number, number];
} {
  return {
    x: [DEFAULT_MARGIN.left, width - DEFAULT_MARGIN.right],
    y: [height - DEFAULT_MARGIN.bottom, DEFAULT_MARGIN.top],
  };
}

function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (Number.isNaN(v)) continue;
    lo = Math.min(lo, v);
    hi = Math.max(hi, v);
  }
  if (!Number.isFinite(lo)) throw new CsvError("no finite values to plot");
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  return [lo, hi];
}

function drawSeries(
  doc: SvgDocument,
  xs: number[],
  ys: number[],
  xScale: Scale,
  yScale: Scale,
  color: string,
): void {
  const points: Array<[number, number]> = [];
  for (let i = 0; i < xs.length; i++) {
    if (Number.isNaN(ys[i])) continue;
    if (yScale.log && ys[i] <= 0) continue;
    points.push([xScale(xs[i]), yScale(ys[i])]);
  }
  doc.polyline(points, color);
}

function legend(doc: SvgDocument, names: string[], x: number, y: number): void {
  names.forEach((name, i) => {
    const py = y + i * 18;
    doc.line(x, py - 4, x + 22, py - 4, SERIES_COLORS[i % SERIES_COLORS.length], 2.5);
    doc.text(x + 28, py, name, { size: 12 });
  });
}

/** Time series of every numeric column against t (optionally log-y). */
export function renderDecayCurve(table: Table, inputPath: string, options: RenderOptions): string {
  const width = options.width ?? WIDTH;
  const height = options.height ?? HEIGHT;
  const t = numericColumn(table, "t", inputPath);
  const seriesNames = table.columns.filter(
    (name) => name !== "t" && !table.numeric.get(name)!.every((v) => Number.isNaN(v)),
  );
  if (seriesNames.length === 0) {
    throw new CsvError(`${inputPath}: no numeric series besides t`);
  }
  const area = plotArea(width, height);
  const all = seriesNames.flatMap((name) => table.numeric.get(name)!).filter((v) => !Number.isNaN(v));
  const xScale = linearScale(extent(t), area.x);
  let yScale: Scale;
  if (options.logY) {
    const positive = all.filter((v) => v > 0);
    if (positive.length === 0) throw new CsvError(`${inputPath}: nothing positive to log-plot`);
    yScale = logScale(extent(positive), area.y);
  } else {
    const [lo, hi] = extent(all);
    yScale = linearScale([Math.min(lo, 0), hi], area.y);
  }
  const doc = new SvgDocument(width, height);
  drawAxes(doc, xScale, yScale, DEFAULT_MARGIN, {
    x: "t",
    y: options.logY ? "value (log)" : "value",
    title: options.title ?? basename(inputPath),
  });
  seriesNames.forEach((name, i) => {
    drawSeries(doc, t, table.numeric.get(name)!, xScale, yScale,
      SERIES_COLORS[i % SERIES_COLORS.length]);
  });
  legend(doc, seriesNames, area.x[1] - 170, DEFAULT_MARGIN.top + 14);
  return doc.render();
}

/** Polarization components and |pi| against time. */
export function renderBlochTrajectory(
  table: Table,
  inputPath: string,
  options: RenderOptions,
): string {
  const width = options.width ?? WIDTH;
  const height = options.height ?? HEIGHT;
  const t = numericColumn(table, "t", inputPath);
  const names = ["pi1", "pi2", "pi3", "pi_norm"];
  const area = plotArea(width, height);
  const xScale = linearScale(extent(t), area.x);
  const yScale = linearScale([-1.05, 1.05], area.y);
  const doc = new SvgDocument(width, height);
  drawAxes(doc, xScale, yScale, DEFAULT_MARGIN, {
    x: "t",
    y: "polarization",
    title: options.title ?? basename(inputPath),
  });
  // unit-ball bounds
  for (const bound of [-1, 1]) {
    doc.line(area.x[0], yScale(bound), area.x[1], yScale(bound), "#bbb", 1);
  }
  names.forEach((name, i) => {
    drawSeries(doc, t, numericColumn(table, name, inputPath), xScale, yScale,
      SERIES_COLORS[i % SERIES_COLORS.length]);
  });
  legend(doc, names, area.x[1] - 120, DEFAULT_MARGIN.top + 14);
  return doc.render();
}

/**
 * Phase-space heatmap from (p, q, W) triples. The colormap is diverging
 * and pinned symmetric about zero so negativity is visible as the cold
 * side regardless of the data range.
 */
export function renderWignerHeatmap(
  table: Table,
  inputPath: string,
  options: RenderOptions,
): string {
  const width = options.width ?? WIDTH;
  const height = options.height ?? HEIGHT;
  const p = numericColumn(table, "p", inputPath);
  const q = numericColumn(table, "q", inputPath);
  const w = numericColumn(table, "W", inputPath);
  const ps = Array.from(new Set(p)).sort((a, b) => a - b);
  const qs = Array.from(new Set(q)).sort((a, b) => a - b);
  if (ps.length * qs.length !== w.length) {
    throw new CsvError(
      `${inputPath}: ${w.length} rows do not fill a ${ps.length} x ${qs.length} grid`,
    );
  }
  const pIndex = new Map(ps.map((v, i) => [v, i]));
  const qIndex = new Map(qs.map((v, i) => [v, i]));
  const grid: number[][] = Array.from({ length: ps.length }, () =>
    new Array(qs.length).fill(NaN),
  );
  for (let row = 0; row < w.length; row++) {
    grid[pIndex.get(p[row])!][qIndex.get(q[row])!] = w[row];
  }
  const limit = Math.max(...w.map((v) => Math.abs(v)));

  const area = plotArea(width - 80, height); // leave room for the colorbar
  const xScale = linearScale([qs[0], qs[qs.length - 1]], area.x);
  const yScale = linearScale([ps[0], ps[ps.length - 1]], area.y);
  const doc = new SvgDocument(width, height);
  const cellW = (area.x[1] - area.x[0]) / qs.length;
  const cellH = (area.y[0] - area.y[1]) / ps.length;
  for (let i = 0; i < ps.length; i++) {
    for (let j = 0; j < qs.length; j++) {
      const value = grid[i][j];
      if (Number.isNaN(value)) continue;
      doc.rect(
        area.x[0] + j * cellW,
        area.y[1] + (ps.length - 1 - i) * cellH,
        cellW + 0.5,
        cellH + 0.5,
        rgbCss(divergingAtZero(value, limit)),
      );
    }
  }
  drawAxes(doc, xScale, yScale, DEFAULT_MARGIN, {
    x: "q",
    y: "p",
    title: options.title ?? basename(inputPath),
  });
  // colorbar, zero pinned at the middle
  const barX = width - 64;
  const barTop = DEFAULT_MARGIN.top;
  const barHeight = height - DEFAULT_MARGIN.top - DEFAULT_MARGIN.bottom;
  const steps = 64;
  for (let k = 0; k < steps; k++) {
    const value = limit - (k / (steps - 1)) * 2 * limit;
    doc.rect(barX, barTop + (k * barHeight) / steps, 18, barHeight / steps + 0.5,
      rgbCss(divergingAtZero(value, limit)));
  }
  doc.text(barX + 24, barTop + 10, formatTick(limit), { size: 11 });
  doc.text(barX + 24, barTop + barHeight / 2 + 4, "0", { size: 11 });
  doc.text(barX + 24, barTop + barHeight, formatTick(-limit), { size: 11 });
  return doc.render();
}

/** Fitted (and expected) Zeno decay rates against kappa, log-log. */
export function renderZenoRates(table: Table, inputPath: string, options: RenderOptions): string {
  const width = options.width ?? WIDTH;
  const height = options.height ?? HEIGHT;
  const kappa = numericColumn(table, "kappa", inputPath);
  const seriesNames = table.columns.filter((name) => name !== "kappa");
  const area = plotArea(width, height);
  const xScale = logScale(extent(kappa), area.x);
  const all = seriesNames
    .flatMap((name) => table.numeric.get(name) ?? [])
    .filter((v) => v > 0);
  const yScale = logScale(extent(all), area.y);
  const doc = new SvgDocument(width, height);
  drawAxes(doc, xScale, yScale, DEFAULT_MARGIN, {
    x: "monitoring rate kappa",
    y: "survival decay rate",
    title: options.title ?? basename(inputPath),
  });
  seriesNames.forEach((name, i) => {
    const color = SERIES_COLORS[i % SERIES_COLORS.length];
    const values = table.numeric.get(name)!;
    drawSeries(doc, kappa, values, xScale, yScale, color);
    values.forEach((v, row) => {
      if (v > 0) doc.circle(xScale(kappa[row]), yScale(v), 3.5, color);
    });
  });
  legend(doc, seriesNames, area.x[0] + 20, DEFAULT_MARGIN.top + 14);
  return doc.render();
}

/** Horizontal bars of entropy production per candidate basis. */
export function renderPointerEntropy(
  table: Table,
  inputPath: string,
  options: RenderOptions,
): string {
  const width = options.width ?? WIDTH;
  const height = options.height ?? HEIGHT;
  const labels = table.raw.get("basis")!;
  const entropy = numericColumn(table, "avg_entropy", inputPath);
  const area = plotArea(width, height);
  const xScale = linearScale([0, Math.max(...entropy) * 1.1 || 1], area.x);
  const doc = new SvgDocument(width, height);
  const slot = (area.y[0] - area.y[1]) / labels.length;
  const barHeight = Math.min(34, slot * 0.7);
  labels.forEach((label, i) => {
    const y = area.y[1] + i * slot + (slot - barHeight) / 2;
    const fraction = labels.length === 1 ? 0.5 : i / (labels.length - 1);
    doc.rect(area.x[0], y, xScale(entropy[i]) - area.x[0], barHeight,
      rgbCss(sequentialColor(fraction)));
    doc.text(area.x[0] - 8, y + barHeight / 2 + 4, label, { anchor: "end", size: 12 });
    doc.text(xScale(entropy[i]) + 6, y + barHeight / 2 + 4, formatTick(entropy[i]), {
      size: 11,
    });
  });
  // x axis only: categorical y
  doc.line(area.x[0], area.y[0], area.x[1], area.y[0], "#222");
  doc.line(area.x[0], area.y[1], area.x[0], area.y[0], "#222");
  doc.text((area.x[0] + area.x[1]) / 2, area.y[0] + 40, "entropy production (nats)", {
    anchor: "middle",
  });
  doc.text((area.x[0] + area.x[1]) / 2, DEFAULT_MARGIN.top - 14,
    options.title ?? basename(inputPath), { anchor: "middle", size: 15 });
  return doc.render();
}
