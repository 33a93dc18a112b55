export type Rgb = [number, number, number];

/**
 * Piecewise-linear interpolation through a list of color stops given at
 * evenly spaced fractions of [0, 1].
 */
function interpolateStops(stops: Rgb[], fraction: number): Rgb {
  const t = Math.max(0, Math.min(1, fraction));
  const scaled = t * (stops.length - 1);
  const low = Math.floor(scaled);
  const high = Math.min(low + 1, stops.length - 1);
  const frac = scaled - low;
  const mix = (a: number, b: number) => Math.round(a + (b - a) * frac);
  return [
    mix(stops[low][0], stops[high][0]),
    mix(stops[low][1], stops[high][1]),
    mix(stops[low][2], stops[high][2]),
  ];
}

// Blue-white-red diverging stops (cool to warm through a neutral center).
const DIVERGING_STOPS: Rgb[] = [
  [5, 48, 97],
  [33, 102, 172],
  [103, 169, 207],
  [209, 229, 240],
  [247, 247, 247],
  [253, 219, 199],
  [239, 138, 98],
  [178, 24, 43],
  [103, 0, 31],
];

// Dark-to-bright sequential stops for non-signed quantities.
const SEQUENTIAL_STOPS: Rgb[] = [
  [68, 1, 84],
  [59, 82, 139],
  [33, 145, 140],
  [94, 201, 98],
  [253, 231, 37],
];

export function divergingColor(fraction: number): Rgb {
  return interpolateStops(DIVERGING_STOPS, fraction);
}

export function sequentialColor(fraction: number): Rgb {
  return interpolateStops(SEQUENTIAL_STOPS, fraction);
}

/**
 * Map a signed value onto the diverging palette with the neutral color
 * pinned at exactly zero: the domain is [-limit, +limit] where limit is
 * the largest magnitude in the data, never an asymmetric data range.
 */
export function divergingAtZero(value: number, limit: number): Rgb {
  if (limit <= 0) return divergingColor(0.5);
  return divergingColor(0.5 + 0.5 * Math.max(-1, Math.min(1, value / limit)));
}

export function rgbCss([r, g, b]: Rgb): string {
  return `rgb(${r},${g},${b})`;
}
