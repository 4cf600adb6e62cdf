/**
 * Artifact loading: provenance header plus the sweep/scan CSV schema.
 *
 * Artifacts carry "# key = value" comment lines before the header row;
 * both are preserved so a rendered figure can embed where its numbers
 * came from.
 */

import Papa from "papaparse";

export interface ArtifactRow {
  gamma_ghz: number;
  tcoh_s: number;
  protocol: string;
  scheme: string;
  reff_hz: number;
  spacing_km: number;
  geometry: string;
  m: number;
  n: number;
  L_feedback_m: number;
  L_delay_m: number;
  secure: boolean;
  /** total distance in km; present on distance-scan artifacts */
  L_km?: number;
}

export interface Artifact {
  provenance: Record<string, string>;
  rows: ArtifactRow[];
}

export class SchemaError extends Error {}

const REQUIRED_COLUMNS = [
  "gamma_ghz",
  "tcoh_s",
  "protocol",
  "scheme",
  "reff_hz",
  "spacing_km",
  "geometry",
  "m",
  "n",
  "L_feedback_m",
  "L_delay_m",
  "secure",
] as const;

const NUMERIC_COLUMNS = [
  "gamma_ghz",
  "tcoh_s",
  "reff_hz",
  "spacing_km",
  "m",
  "n",
  "L_feedback_m",
  "L_delay_m",
] as const;

function parseProvenance(lines: string[]): Record<string, string> {
  const out: Record<string, string> = {};
  for (const line of lines) {
    const body = line.replace(/^#\s*/, "");
    const eq = body.indexOf("=");
    if (eq < 0) continue;
    out[body.slice(0, eq).trim()] = body.slice(eq + 1).trim();
  }
  return out;
}

function toNumber(column: string, raw: string, line: number): number {
  const value = Number(raw);
  if (raw === "" || Number.isNaN(value)) {
    throw new SchemaError(`row ${line}: ${column} is not a number: "${raw}"`);
  }
  return value;
}

function toBoolean(raw: string, line: number): boolean {
  if (raw === "true") return true;
  if (raw === "false") return false;
  throw new SchemaError(`row ${line}: secure is not a boolean: "${raw}"`);
}

/** Parse one artifact's text into provenance and typed rows. */
export function parseArtifact(text: string): Artifact {
  const lines = text.split(/\r?\n/);
  const commentLines = [];
  let start = 0;
  while (start < lines.length && lines[start].startsWith("#")) {
    commentLines.push(lines[start]);
    start += 1;
  }
  const body = lines.slice(start).join("\n");
  if (body.trim() === "") {
    throw new SchemaError("no data rows");
  }
  const parsed = Papa.parse<Record<string, string>>(body, {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    throw new SchemaError(`CSV parse error: ${first.message}`);
  }
  const fields = parsed.meta.fields ?? [];
  for (const column of REQUIRED_COLUMNS) {
    if (!fields.includes(column)) {
      throw new SchemaError(`missing column: ${column}`);
    }
  }
  if (parsed.data.length === 0) {
    throw new SchemaError("no data rows");
  }
  const hasL = fields.includes("L_km");
  const rows = parsed.data.map((raw, i) => {
    const row: Record<string, unknown> = {
      protocol: raw.protocol,
      scheme: raw.scheme,
      geometry: raw.geometry,
      secure: toBoolean(raw.secure, i + 1),
    };
    for (const column of NUMERIC_COLUMNS) {
      row[column] = toNumber(column, raw[column], i + 1);
    }
    if (hasL) {
      row.L_km = toNumber("L_km", raw.L_km, i + 1);
    }
    return row as unknown as ArtifactRow;
  });
  return { provenance: parseProvenance(commentLines), rows };
}

/** Distinct values of a numeric field, ascending. */
export function distinctSorted(rows: ArtifactRow[], field: "gamma_ghz" | "tcoh_s"): number[] {
  return [...new Set(rows.map((r) => r[field]))].sort((a, b) => a - b);
}

/** Total distance of a row in km, from L_km or spacing times link count. */
export function rowDistanceKm(row: ArtifactRow): number | undefined {
  if (row.L_km !== undefined) return row.L_km;
  const derived = row.spacing_km * (row.m + 1);
  return derived > 0 ? derived : undefined;
}
