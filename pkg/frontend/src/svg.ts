/**
 * Minimal SVG assembly: enough axes, lines, rects and text for static
 * figures, no DOM required.
 */

export interface Margin {
  top: number;
  right: number;
  bottom: number;
  left: number;
}

export const DEFAULT_MARGIN: Margin = { top: 36, right: 28, bottom: 52, left: 72 };

export interface Scale {
  (value: number): number;
  domain: [number, number];
  range: [number, number];
  log: boolean;
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 === 0 ? 1 : d1 - d0;
  const scale = ((value: number) => r0 + ((value - d0) / span) * (r1 - r0)) as Scale;
  scale.domain = domain;
  scale.range = range;
  scale.log = false;
  return scale;
}

export function logScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  if (d0 <= 0 || d1 <= 0) {
    throw new Error(`log scale needs a positive domain, got [${d0}, ${d1}]`);
  }
  const l0 = Math.log10(d0);
  const span = Math.log10(d1) - l0 === 0 ? 1 : Math.log10(d1) - l0;
  const [r0, r1] = range;
  const scale = ((value: number) =>
    r0 + ((Math.log10(value) - l0) / span) * (r1 - r0)) as Scale;
  scale.domain = domain;
  scale.range = range;
  scale.log = true;
  return scale;
}

/** Round tick positions covering the domain (log scales get decades). */
export function ticks(scale: Scale, count = 6): number[] {
  const [d0, d1] = scale.domain;
  if (scale.log) {
    const out: number[] = [];
    for (let e = Math.ceil(Math.log10(d0)); e <= Math.floor(Math.log10(d1)); e++) {
      out.push(10 ** e);
    }
    return out.length >= 2 ? out : [d0, d1];
  }
  const span = d1 - d0;
  if (span === 0) return [d0];
  const step = 10 ** Math.floor(Math.log10(span / count));
  const err = span / count / step;
  const factor = err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1;
  const nice = step * factor;
  const out: number[] = [];
  for (let v = Math.ceil(d0 / nice) * nice; v <= d1 + nice * 1e-9; v += nice) {
    out.push(Math.abs(v) < nice * 1e-9 ? 0 : v);
  }
  return out;
}

export function formatTick(value: number): string {
  if (value === 0) return "0";
  const magnitude = Math.abs(value);
  if (magnitude >= 1e4 || magnitude < 1e-3) return value.toExponential(1);
  return Number(value.toPrecision(4)).toString();
}

const escapeText = (text: string): string =>
  text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");

export class SvgDocument {
  private parts: string[] = [];

  constructor(
    readonly width: number,
    readonly height: number,
  ) {}

  rect(x: number, y: number, w: number, h: number, fill: string, stroke = "none"): void {
    this.parts.push(
      `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" ` +
        `fill="${fill}" stroke="${stroke}"/>`,
    );
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, width = 1): void {
    this.parts.push(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" ` +
        `stroke="${stroke}" stroke-width="${width}"/>`,
    );
  }

  polyline(points: Array<[number, number]>, stroke: string, width = 1.5): void {
    const path = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    this.parts.push(
      `<polyline points="${path}" fill="none" stroke="${stroke}" stroke-width="${width}"/>`,
    );
  }

  circle(cx: number, cy: number, r: number, fill: string): void {
    this.parts.push(`<circle cx="${fmt(cx)}" cy="${fmt(cy)}" r="${r}" fill="${fill}"/>`);
  }

  text(
    x: number,
    y: number,
    content: string,
    options: { anchor?: string; size?: number; rotate?: number; fill?: string } = {},
  ): void {
    const anchor = options.anchor ?? "start";
    const size = options.size ?? 13;
    const fill = options.fill ?? "#222";
    const transform =
      options.rotate !== undefined
        ? ` transform="rotate(${options.rotate} ${fmt(x)} ${fmt(y)})"`
        : "";
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" text-anchor="${anchor}" ` +
        `font-family="sans-serif" font-size="${size}" fill="${fill}"${transform}>` +
        `${escapeText(content)}</text>`,
    );
  }

  render(): string {
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" ` +
      `height="${this.height}" viewBox="0 0 ${this.width} ${this.height}">\n` +
      `<rect width="${this.width}" height="${this.height}" fill="white"/>\n` +
      this.parts.join("\n") +
      "\n</svg>\n"
    );
  }
}

function fmt(value: number): string {
  return Number(value.toFixed(2)).toString();
}

export interface AxisLabels {
  x: string;
  y: string;
  title: string;
}

/** Draw frame, ticks and labels for a plot area; returns nothing. */
export function drawAxes(
  doc: SvgDocument,
  xScale: Scale,
  yScale: Scale,
  margin: Margin,
  labels: AxisLabels,
): void {
  const [x0, x1] = xScale.range;
  const [y1, y0] = [yScale.range[0], yScale.range[1]]; // range is [bottom, top]
  doc.line(x0, y1, x1, y1, "#222");
  doc.line(x0, y0, x0, y1, "#222");
  for (const t of ticks(xScale)) {
    const px = xScale(t);
    doc.line(px, y1, px, y1 + 5, "#222");
    doc.text(px, y1 + 20, formatTick(t), { anchor: "middle", size: 11 });
  }
  for (const t of ticks(yScale)) {
    const py = yScale(t);
    doc.line(x0 - 5, py, x0, py, "#222");
    doc.text(x0 - 8, py + 4, formatTick(t), { anchor: "end", size: 11 });
  }
  doc.text((x0 + x1) / 2, y1 + 40, labels.x, { anchor: "middle" });
  doc.text(x0 - 52, (y0 + y1) / 2, labels.y, {
    anchor: "middle",
    rotate: -90,
  });
  doc.text((x0 + x1) / 2, margin.top - 14, labels.title, { anchor: "middle", size: 15 });
}

export const SERIES_COLORS = ["#1b6ca8", "#c0392b", "#27ae60", "#8e44ad", "#e67e22"];
