/**
 * Figure entry point: a FigureSpec names an input artifact, a figure
 * kind, and an output path.  Rendering is a pure function of the input
 * bytes, so re-rendering the same artifact reproduces the same image
 * byte for byte.  On any validation error no output file is written.
 */

import { readFileSync, writeFileSync } from "node:fs";

import { renderDiffHeatmap, renderHeatmap } from "./heatmap.js";
import { renderDistanceLines } from "./lines.js";
import { Artifact, SchemaError, parseArtifact } from "./schema.js";

export type FigureKind = "heatmap" | "diff_heatmap" | "distance_lines";

export interface FigureSpec {
  /** path of the CSV artifact to read */
  input: string;
  kind: FigureKind;
  /** path of the SVG image to write */
  output: string;
  title?: string;
  width?: number;
  height?: number;
  /** distance plot only: axis overrides */
  xMin?: number;
  xMax?: number;
  yMin?: number;
  yMax?: number;
}

/** Render an already-parsed artifact to SVG text. */
export function renderArtifact(kind: FigureKind, artifact: Artifact, spec: Partial<FigureSpec> = {}): string {
  const common = { title: spec.title, width: spec.width, height: spec.height };
  switch (kind) {
    case "heatmap":
      return renderHeatmap(artifact, common);
    case "diff_heatmap":
      return renderDiffHeatmap(artifact, common);
    case "distance_lines":
      return renderDistanceLines(artifact, {
        ...common,
        xMin: spec.xMin,
        xMax: spec.xMax,
        yMin: spec.yMin,
        yMax: spec.yMax,
      });
    default:
      throw new SchemaError(`unknown figure kind: ${kind}`);
  }
}

/** Read the artifact, render it, and write the image. */
export function render(spec: FigureSpec): string {
  const bytes = readFileSync(spec.input, "utf-8");
  const artifact = parseArtifact(bytes);
  const svg = renderArtifact(spec.kind, artifact, spec);
  writeFileSync(spec.output, svg);
  return spec.output;
}
