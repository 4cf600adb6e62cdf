/**
 * Distance plot: key rate versus total distance, one series per
 * generation scheme, rate on a log axis.  Non-secure points carry no
 * usable rate and are dropped from their series.
 */

import { Artifact, ArtifactRow, SchemaError, rowDistanceKm } from "./schema.js";
import { logTicks, makeLogScale, sciLabel } from "./scales.js";
import { Margin, px, svgDocument, tag, text } from "./svg.js";

export interface LinesOptions {
  title?: string;
  width?: number;
  height?: number;
  xMin?: number;
  xMax?: number;
  yMin?: number;
  yMax?: number;
}

const MARGIN: Margin = { top: 42, right: 150, bottom: 58, left: 86 };

const SERIES_COLOR: Record<string, string> = {
  feedback: "#1b6ca8",
  ancilla: "#c0392b",
};

interface Point {
  L: number;
  rate: number;
}

function marker(scheme: string, x: number, y: number, color: string): string {
  if (scheme === "ancilla") {
    return tag("rect", {
      x: px(x - 3.5),
      y: px(y - 3.5),
      width: 7,
      height: 7,
      fill: color,
    });
  }
  return tag("circle", { cx: px(x), cy: px(y), r: 3.5, fill: color });
}

function seriesPoints(rows: ArtifactRow[]): Point[] {
  const points: Point[] = [];
  for (const row of rows) {
    if (!row.secure || row.reff_hz <= 0) continue;
    const L = rowDistanceKm(row);
    if (L === undefined) {
      throw new SchemaError("distance plot: row has no distance");
    }
    points.push({ L, rate: row.reff_hz });
  }
  points.sort((a, b) => a.L - b.L);
  return points;
}

/** Render rate-versus-distance series grouped by scheme. */
export function renderDistanceLines(artifact: Artifact, options: LinesOptions = {}): string {
  const width = options.width ?? 640;
  const height = options.height ?? 460;
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;

  const bySchemes = new Map<string, ArtifactRow[]>();
  for (const row of artifact.rows) {
    const list = bySchemes.get(row.scheme) ?? [];
    list.push(row);
    bySchemes.set(row.scheme, list);
  }
  const series = new Map<string, Point[]>();
  for (const [scheme, rows] of bySchemes) {
    const points = seriesPoints(rows);
    if (points.length > 0) series.set(scheme, points);
  }
  if (series.size === 0) {
    throw new SchemaError("distance plot: no secure points to draw");
  }

  const allPoints = [...series.values()].flat();
  const xMin = options.xMin ?? Math.min(...allPoints.map((p) => p.L));
  const xMax = options.xMax ?? Math.max(...allPoints.map((p) => p.L));
  const yMin = options.yMin ?? Math.min(...allPoints.map((p) => p.rate));
  const yMax = options.yMax ?? Math.max(...allPoints.map((p) => p.rate));
  const xSpan = xMax - xMin > 0 ? xMax - xMin : 1;
  const xOf = (L: number) => MARGIN.left + ((L - xMin) / xSpan) * plotW;
  const yScale = makeLogScale(
    yMin,
    yMax > yMin ? yMax : yMin * 10,
    MARGIN.top + plotH,
    MARGIN.top,
  );

  const parts: string[] = [];
  parts.push(
    tag("rect", {
      x: px(MARGIN.left),
      y: px(MARGIN.top),
      width: px(plotW),
      height: px(plotH),
      fill: "none",
      stroke: "#333",
    }),
  );

  const y0 = MARGIN.top + plotH;
  const xTickCount = 6;
  for (let i = 0; i <= xTickCount; i += 1) {
    const L = xMin + (xSpan * i) / xTickCount;
    const x = xOf(L);
    parts.push(tag("line", { x1: px(x), y1: px(y0), x2: px(x), y2: px(y0 + 5), stroke: "#333" }));
    parts.push(
      text(String(Math.round(L)), {
        x: px(x),
        y: px(y0 + 19),
        "text-anchor": "middle",
        "font-size": 11,
      }),
    );
  }
  for (const tick of logTicks(yScale.domain[0], yScale.domain[1])) {
    const y = yScale(tick);
    parts.push(
      tag("line", {
        x1: px(MARGIN.left - 5),
        y1: px(y),
        x2: px(MARGIN.left),
        y2: px(y),
        stroke: "#333",
      }),
    );
    parts.push(
      tag("line", {
        x1: px(MARGIN.left),
        y1: px(y),
        x2: px(MARGIN.left + plotW),
        y2: px(y),
        stroke: "#eee",
      }),
    );
    parts.push(
      text(sciLabel(tick), {
        x: px(MARGIN.left - 8),
        y: px(y + 4),
        "text-anchor": "end",
        "font-size": 11,
      }),
    );
  }
  parts.push(
    text("total distance (km)", {
      x: px(MARGIN.left + plotW / 2),
      y: px(y0 + 40),
      "text-anchor": "middle",
      "font-size": 13,
    }),
  );
  parts.push(
    text("key rate (Hz)", {
      x: px(MARGIN.left - 62),
      y: px(MARGIN.top + plotH / 2),
      "text-anchor": "middle",
      "font-size": 13,
      transform: `rotate(-90 ${px(MARGIN.left - 62)} ${px(MARGIN.top + plotH / 2)})`,
    }),
  );

  const schemes = [...series.keys()].sort();
  schemes.forEach((scheme, si) => {
    const points = series.get(scheme)!;
    const color = SERIES_COLOR[scheme] ?? "#555";
    const path = points
      .map((p) => `${px(xOf(p.L))},${px(yScale(p.rate))}`)
      .join(" ");
    const markers = points.map((p) => marker(scheme, xOf(p.L), yScale(p.rate), color));
    parts.push(
      tag(
        "g",
        { "data-scheme": scheme, "data-points": String(points.length) },
        [
          tag("polyline", {
            points: path,
            fill: "none",
            stroke: color,
            "stroke-width": 1.5,
          }),
          ...markers,
        ],
      ),
    );
    const ly = MARGIN.top + 14 + si * 18;
    const lx = width - MARGIN.right + 18;
    parts.push(marker(scheme, lx, ly - 4, color));
    parts.push(text(scheme, { x: px(lx + 10), y: px(ly), "font-size": 12 }));
  });

  const title = options.title ?? `key rate vs distance, ${artifact.rows[0].protocol}`;
  parts.unshift(
    text(title, {
      x: px(MARGIN.left + plotW / 2),
      y: px(MARGIN.top - 16),
      "text-anchor": "middle",
      "font-size": 14,
      "font-weight": "bold",
    }),
  );

  const metadata = {
    kind: "distance_lines",
    provenance: artifact.provenance,
    schemes,
  };
  return svgDocument(width, height, metadata, parts);
}
