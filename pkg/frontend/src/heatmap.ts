/**
 * Heatmaps over the (emission rate, coherence time) grid.
 *
 * The plain heatmap paints each cell by its secret key rate on a log
 * color scale and paints non-secure cells black.  The difference
 * heatmap compares the two generation schemes per cell with the
 * normalized difference (a - b) / (a + b) on a diverging scale that is
 * white at zero.
 */

import { Artifact, ArtifactRow, SchemaError, distinctSorted } from "./schema.js";
import {
  divergingColor,
  logEdges,
  logTicks,
  makeLogScale,
  rateColor,
  sciLabel,
} from "./scales.js";
import { Margin, px, svgDocument, tag, text } from "./svg.js";

export interface HeatmapOptions {
  title?: string;
  width?: number;
  height?: number;
}

const MARGIN: Margin = { top: 42, right: 118, bottom: 58, left: 86 };
const INSECURE_FILL = "#000000";

interface Grid {
  gammas: number[];
  tcohs: number[];
  cell: Map<string, ArtifactRow>;
}

function cellKey(gamma: number, tcoh: number): string {
  return `${gamma}|${tcoh}`;
}

function buildGrid(rows: ArtifactRow[], label: string): Grid {
  const gammas = distinctSorted(rows, "gamma_ghz");
  const tcohs = distinctSorted(rows, "tcoh_s");
  const cell = new Map<string, ArtifactRow>();
  for (const row of rows) {
    const key = cellKey(row.gamma_ghz, row.tcoh_s);
    if (cell.has(key)) {
      throw new SchemaError(`${label}: duplicate cell at (${row.gamma_ghz}, ${row.tcoh_s})`);
    }
    cell.set(key, row);
  }
  for (const g of gammas) {
    for (const t of tcohs) {
      if (!cell.has(cellKey(g, t))) {
        throw new SchemaError(`${label}: missing cell at (${g}, ${t})`);
      }
    }
  }
  return { gammas, tcohs, cell };
}

interface Frame {
  width: number;
  height: number;
  plotW: number;
  plotH: number;
  xEdge: number[];
  yEdge: number[];
  xOf: (v: number) => number;
  yOf: (v: number) => number;
}

function buildFrame(grid: Grid, options: HeatmapOptions): Frame {
  const width = options.width ?? 640;
  const height = options.height ?? 460;
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;
  const xEdge = logEdges(grid.gammas);
  const yEdge = logEdges(grid.tcohs);
  const xScale = makeLogScale(xEdge[0], xEdge[xEdge.length - 1], MARGIN.left, MARGIN.left + plotW);
  const yScale = makeLogScale(yEdge[0], yEdge[yEdge.length - 1], MARGIN.top + plotH, MARGIN.top);
  return { width, height, plotW, plotH, xEdge, yEdge, xOf: xScale, yOf: yScale };
}

function axes(frame: Frame, grid: Grid): string[] {
  const parts: string[] = [];
  const x0 = MARGIN.left;
  const y0 = MARGIN.top + frame.plotH;
  parts.push(
    tag("rect", {
      x: px(x0),
      y: px(MARGIN.top),
      width: px(frame.plotW),
      height: px(frame.plotH),
      fill: "none",
      stroke: "#333",
    }),
  );
  for (const g of grid.gammas) {
    const x = frame.xOf(g);
    parts.push(tag("line", { x1: px(x), y1: px(y0), x2: px(x), y2: px(y0 + 5), stroke: "#333" }));
    parts.push(
      text(sciLabel(g), {
        x: px(x),
        y: px(y0 + 19),
        "text-anchor": "middle",
        "font-size": 11,
      }),
    );
  }
  for (const t of grid.tcohs) {
    const y = frame.yOf(t);
    parts.push(tag("line", { x1: px(x0 - 5), y1: px(y), x2: px(x0), y2: px(y), stroke: "#333" }));
    parts.push(
      text(sciLabel(t), {
        x: px(x0 - 8),
        y: px(y + 4),
        "text-anchor": "end",
        "font-size": 11,
      }),
    );
  }
  parts.push(
    text("emission rate (GHz)", {
      x: px(x0 + frame.plotW / 2),
      y: px(y0 + 40),
      "text-anchor": "middle",
      "font-size": 13,
    }),
  );
  parts.push(
    text("coherence time (s)", {
      x: px(x0 - 62),
      y: px(MARGIN.top + frame.plotH / 2),
      "text-anchor": "middle",
      "font-size": 13,
      transform: `rotate(-90 ${px(x0 - 62)} ${px(MARGIN.top + frame.plotH / 2)})`,
    }),
  );
  return parts;
}

function cellRect(
  frame: Frame,
  grid: Grid,
  gi: number,
  ti: number,
  fill: string,
  data: Record<string, string>,
): string {
  const x0 = frame.xOf(frame.xEdge[gi]);
  const x1 = frame.xOf(frame.xEdge[gi + 1]);
  const y0 = frame.yOf(frame.yEdge[ti + 1]);
  const y1 = frame.yOf(frame.yEdge[ti]);
  return tag("rect", {
    x: px(x0),
    y: px(y0),
    width: px(x1 - x0),
    height: px(y1 - y0),
    fill,
    stroke: "#ffffff",
    "stroke-width": 0.5,
    "data-gamma": String(grid.gammas[gi]),
    "data-tcoh": String(grid.tcohs[ti]),
    ...data,
  });
}

function rateColorbar(frame: Frame, lo: number, hi: number): string[] {
  const parts: string[] = [];
  const x = frame.width - MARGIN.right + 24;
  const barW = 16;
  const steps = 64;
  const stepH = frame.plotH / steps;
  for (let i = 0; i < steps; i += 1) {
    const t = (i + 0.5) / steps;
    const y = MARGIN.top + frame.plotH - (i + 1) * stepH;
    parts.push(
      tag("rect", {
        x: px(x),
        y: px(y),
        width: px(barW),
        height: px(stepH + 0.5),
        fill: rateColor(t),
      }),
    );
  }
  parts.push(
    tag("rect", {
      x: px(x),
      y: px(MARGIN.top),
      width: px(barW),
      height: px(frame.plotH),
      fill: "none",
      stroke: "#333",
    }),
  );
  const scale = makeLogScale(lo, hi, MARGIN.top + frame.plotH, MARGIN.top);
  for (const tick of logTicks(lo, hi)) {
    const y = scale(tick);
    parts.push(
      text(sciLabel(tick), {
        x: px(x + barW + 5),
        y: px(y + 4),
        "font-size": 10,
      }),
    );
  }
  parts.push(
    text("key rate (Hz)", {
      x: px(x + barW / 2),
      y: px(MARGIN.top - 10),
      "text-anchor": "middle",
      "font-size": 11,
    }),
  );
  return parts;
}

function diffColorbar(frame: Frame): string[] {
  const parts: string[] = [];
  const x = frame.width - MARGIN.right + 24;
  const barW = 16;
  const steps = 64;
  const stepH = frame.plotH / steps;
  for (let i = 0; i < steps; i += 1) {
    const c = -1 + (2 * (i + 0.5)) / steps;
    const y = MARGIN.top + frame.plotH - (i + 1) * stepH;
    parts.push(
      tag("rect", {
        x: px(x),
        y: px(y),
        width: px(barW),
        height: px(stepH + 0.5),
        fill: divergingColor(c),
      }),
    );
  }
  parts.push(
    tag("rect", {
      x: px(x),
      y: px(MARGIN.top),
      width: px(barW),
      height: px(frame.plotH),
      fill: "none",
      stroke: "#333",
    }),
  );
  for (const tick of [-1, -0.5, 0, 0.5, 1]) {
    const y = MARGIN.top + frame.plotH * (1 - (tick + 1) / 2);
    parts.push(
      text(String(tick), {
        x: px(x + barW + 5),
        y: px(y + 4),
        "font-size": 10,
      }),
    );
  }
  parts.push(
    text("normalized difference", {
      x: px(x + barW / 2 - 10),
      y: px(MARGIN.top - 10),
      "text-anchor": "middle",
      "font-size": 11,
    }),
  );
  return parts;
}

function titleText(frame: Frame, title: string): string {
  return text(title, {
    x: px(MARGIN.left + frame.plotW / 2),
    y: px(MARGIN.top - 16),
    "text-anchor": "middle",
    "font-size": 14,
    "font-weight": "bold",
  });
}

/** Render a key-rate heatmap; non-secure cells are painted black. */
export function renderHeatmap(artifact: Artifact, options: HeatmapOptions = {}): string {
  const grid = buildGrid(artifact.rows, "heatmap");
  const frame = buildFrame(grid, options);
  const secureRates = artifact.rows
    .filter((r) => r.secure && r.reff_hz > 0)
    .map((r) => r.reff_hz);
  const lo = secureRates.length > 0 ? Math.min(...secureRates) : 0.1;
  const hi = secureRates.length > 0 ? Math.max(...secureRates) : 1.0;
  const logLo = Math.log10(lo);
  const logHi = Math.log10(hi);
  const span = logHi - logLo > 0 ? logHi - logLo : 1;
  const cells: string[] = [];
  grid.gammas.forEach((g, gi) => {
    grid.tcohs.forEach((t, ti) => {
      const row = grid.cell.get(cellKey(g, t))!;
      const fill =
        row.secure && row.reff_hz > 0
          ? rateColor((Math.log10(row.reff_hz) - logLo) / span)
          : INSECURE_FILL;
      cells.push(
        cellRect(frame, grid, gi, ti, fill, {
          "data-rate": String(row.reff_hz),
          "data-secure": String(row.secure),
        }),
      );
    });
  });
  const title =
    options.title ??
    `key rate, ${artifact.rows[0].protocol} / ${artifact.rows[0].scheme}`;
  const metadata = {
    kind: "heatmap",
    provenance: artifact.provenance,
    gammas: grid.gammas,
    tcohs: grid.tcohs,
  };
  return svgDocument(frame.width, frame.height, metadata, [
    titleText(frame, title),
    ...cells,
    ...axes(frame, grid),
    ...rateColorbar(frame, lo, hi),
  ]);
}

/** Normalized difference (a - b) / (a + b), zero when both vanish. */
export function normalizedDifference(a: number, b: number): number {
  if (a === 0 && b === 0) return 0;
  return (a - b) / (a + b);
}

/**
 * Render a scheme-comparison heatmap from an artifact holding both
 * feedback and ancilla rows on the same grid.
 */
export function renderDiffHeatmap(artifact: Artifact, options: HeatmapOptions = {}): string {
  const bySchemes = new Map<string, ArtifactRow[]>();
  for (const row of artifact.rows) {
    const list = bySchemes.get(row.scheme) ?? [];
    list.push(row);
    bySchemes.set(row.scheme, list);
  }
  for (const scheme of ["feedback", "ancilla"]) {
    if (!bySchemes.has(scheme)) {
      throw new SchemaError(`diff heatmap needs scheme "${scheme}" rows`);
    }
  }
  const fb = buildGrid(bySchemes.get("feedback")!, "feedback");
  const anc = buildGrid(bySchemes.get("ancilla")!, "ancilla");
  if (
    fb.gammas.join() !== anc.gammas.join() ||
    fb.tcohs.join() !== anc.tcohs.join()
  ) {
    throw new SchemaError("diff heatmap: scheme grids do not match");
  }
  const frame = buildFrame(fb, options);
  const cells: string[] = [];
  fb.gammas.forEach((g, gi) => {
    fb.tcohs.forEach((t, ti) => {
      const key = cellKey(g, t);
      const c = normalizedDifference(fb.cell.get(key)!.reff_hz, anc.cell.get(key)!.reff_hz);
      cells.push(
        cellRect(frame, fb, gi, ti, divergingColor(c), {
          "data-diff": c.toPrecision(6),
        }),
      );
    });
  });
  const title =
    options.title ?? `feedback vs ancilla, ${artifact.rows[0].protocol}`;
  const metadata = {
    kind: "diff_heatmap",
    provenance: artifact.provenance,
    gammas: fb.gammas,
    tcohs: fb.tcohs,
  };
  return svgDocument(frame.width, frame.height, metadata, [
    titleText(frame, title),
    ...cells,
    ...axes(frame, fb),
    ...diffColorbar(frame),
  ]);
}
