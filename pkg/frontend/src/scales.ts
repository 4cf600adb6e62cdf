/** Color and log-axis helpers shared by the figure renderers. */

import { interpolateViridis, scaleLog } from "d3";

/** Hex color for a channel value in [0, 255]. */
function hex2(v: number): string {
  const clamped = Math.max(0, Math.min(255, Math.round(v)));
  return clamped.toString(16).padStart(2, "0");
}

function parseRgb(color: string): [number, number, number] {
  const m = color.match(/rgb\((\d+),\s*(\d+),\s*(\d+)\)/);
  if (m) return [Number(m[1]), Number(m[2]), Number(m[3])];
  const h = color.replace("#", "");
  return [
    parseInt(h.slice(0, 2), 16),
    parseInt(h.slice(2, 4), 16),
    parseInt(h.slice(4, 6), 16),
  ];
}

function toHex(rgb: [number, number, number]): string {
  return `#${hex2(rgb[0])}${hex2(rgb[1])}${hex2(rgb[2])}`;
}

/** Sequential colormap for log-scaled rates, as hex. */
export function rateColor(t: number): string {
  const clamped = Math.max(0, Math.min(1, t));
  return toHex(parseRgb(interpolateViridis(clamped)));
}

const DIVERGING_NEG: [number, number, number] = [33, 102, 172];
const DIVERGING_POS: [number, number, number] = [178, 24, 43];
const WHITE: [number, number, number] = [255, 255, 255];

function lerp(a: [number, number, number], b: [number, number, number], t: number): string {
  return toHex([
    a[0] + (b[0] - a[0]) * t,
    a[1] + (b[1] - a[1]) * t,
    a[2] + (b[2] - a[2]) * t,
  ]);
}

/**
 * Symmetric diverging colormap over [-1, 1]: blue for negative, red for
 * positive, exactly white at zero.
 */
export function divergingColor(c: number): string {
  const clamped = Math.max(-1, Math.min(1, c));
  if (clamped < 0) return lerp(WHITE, DIVERGING_NEG, -clamped);
  return lerp(WHITE, DIVERGING_POS, clamped);
}

/** Log-decade tick values within [min, max]. */
export function logTicks(min: number, max: number): number[] {
  const lo = Math.ceil(Math.log10(min) - 1e-9);
  const hi = Math.floor(Math.log10(max) + 1e-9);
  const ticks = [];
  for (let e = lo; e <= hi; e += 1) ticks.push(Math.pow(10, e));
  return ticks;
}

/** Compact scientific label: 1e-3, 0.1, 1, 10, 100, 1e3 ... */
export function sciLabel(value: number): string {
  if (value === 0) return "0";
  const e = Math.log10(Math.abs(value));
  if (Math.abs(e - Math.round(e)) < 1e-9) {
    const r = Math.round(e);
    if (r >= -1 && r <= 2) return String(value);
    return `${value < 0 ? "-" : ""}1e${r}`;
  }
  return value.toPrecision(3).replace(/\.?0+$/, "");
}

export interface LogScale {
  (value: number): number;
  domain: [number, number];
}

/** Log scale mapping [min, max] onto pixel [r0, r1]. */
export function makeLogScale(min: number, max: number, r0: number, r1: number): LogScale {
  const scale = scaleLog().domain([min, max]).range([r0, r1]);
  const fn = ((value: number) => scale(value)) as LogScale;
  fn.domain = [min, max];
  return fn;
}

/**
 * Cell edges for a log-spaced axis: geometric midpoints between grid
 * values, end cells extended by the half-step of their neighbor.
 */
export function logEdges(values: number[]): number[] {
  if (values.length === 1) {
    const v = values[0];
    return [v / Math.sqrt(10), v * Math.sqrt(10)];
  }
  const edges = [values[0] * Math.sqrt(values[0] / values[1])];
  for (let i = 0; i + 1 < values.length; i += 1) {
    edges.push(Math.sqrt(values[i] * values[i + 1]));
  }
  const n = values.length;
  edges.push(values[n - 1] * Math.sqrt(values[n - 1] / values[n - 2]));
  return edges;
}
