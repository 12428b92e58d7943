// Pure helpers for the expectation heatmap. Rendering is a plain div
// grid; these functions pick colors and map cells to angles.

import type { SweepResponse } from './types.js';

// Compact viridis-like ramp, dark-to-bright.
const RAMP: Array<[number, number, number]> = [
  [68, 1, 84],
  [65, 68, 135],
  [42, 120, 142],
  [34, 168, 132],
  [122, 209, 81],
  [253, 231, 37],
];

function lerp(a: number, b: number, t: number): number {
  return a + (b - a) * t;
}

/** Linear color for value in [lo, hi] along the ramp. */
export function colorFor(value: number, lo: number, hi: number): string {
  const span = hi - lo;
  const t = span > 0 ? Math.min(1, Math.max(0, (value - lo) / span)) : 0.5;
  const scaled = t * (RAMP.length - 1);
  const i = Math.min(RAMP.length - 2, Math.floor(scaled));
  const f = scaled - i;
  const a = RAMP[i]!;
  const b = RAMP[i + 1]!;
  const rgb = [0, 1, 2].map((c) => Math.round(lerp(a[c]!, b[c]!, f)));
  return `rgb(${rgb[0]},${rgb[1]},${rgb[2]})`;
}

export function gridRange(values: number[][]): { lo: number; hi: number } {
  let lo = Infinity;
  let hi = -Infinity;
  for (const row of values) {
    for (const v of row) {
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
  }
  return { lo, hi };
}

/** Index of the grid angle closest to x. */
export function nearestIndex(angles: number[], x: number): number {
  let best = 0;
  let dist = Infinity;
  for (let i = 0; i < angles.length; i++) {
    const d = Math.abs(angles[i]! - x);
    if (d < dist) {
      dist = d;
      best = i;
    }
  }
  return best;
}

export interface MarkedCell {
  gi: number;
  ti: number;
}

/** Grid cell nearest to the session's active angles. */
export function markedCell(grid: SweepResponse, gamma: number, theta: number): MarkedCell {
  return {
    gi: nearestIndex(grid.gammas, gamma),
    ti: nearestIndex(grid.thetas, theta),
  };
}
