/**
 * Minimal declarations for the runtime dependencies, covering exactly
 * the surface this package uses.
 */

declare module "d3" {
  export function interpolateViridis(t: number): string;

  export interface LogScaleNumeric {
    (value: number): number;
    domain(values: number[]): this;
    range(values: number[]): this;
  }

  export function scaleLog(): LogScaleNumeric;
}

declare module "papaparse" {
  export interface ParseError {
    message: string;
    row?: number;
  }

  export interface ParseMeta {
    fields?: string[];
  }

  export interface ParseResult<T> {
    data: T[];
    errors: ParseError[];
    meta: ParseMeta;
  }

  export interface ParseConfig {
    header?: boolean;
    skipEmptyLines?: boolean;
  }

  export function parse<T>(input: string, config?: ParseConfig): ParseResult<T>;

  const Papa: { parse: typeof parse };
  export default Papa;
}
