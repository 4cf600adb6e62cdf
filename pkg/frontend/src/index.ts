export {
  Artifact,
  ArtifactRow,
  SchemaError,
  distinctSorted,
  parseArtifact,
  rowDistanceKm,
} from "./schema.js";
export { divergingColor, logTicks, rateColor, sciLabel } from "./scales.js";
export { normalizedDifference, renderDiffHeatmap, renderHeatmap } from "./heatmap.js";
export { renderDistanceLines } from "./lines.js";
export { FigureKind, FigureSpec, render, renderArtifact } from "./figure.js";
