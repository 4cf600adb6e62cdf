/** Command-line renderer: --input CSV --kind KIND --output SVG. */

import { pathToFileURL } from "node:url";

import { FigureKind, FigureSpec, render } from "./figure.js";

const KINDS: FigureKind[] = ["heatmap", "diff_heatmap", "distance_lines"];

function usage(): string {
  return (
    "usage: render --input artifact.csv --kind " +
    KINDS.join("|") +
    " --output figure.svg [--title TEXT]"
  );
}

export function main(argv: string[]): number {
  const args = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const flag = argv[i];
    if (!flag.startsWith("--") || i + 1 >= argv.length) {
      console.error(usage());
      return 2;
    }
    args.set(flag.slice(2), argv[i + 1]);
  }
  const input = args.get("input");
  const kind = args.get("kind") as FigureKind | undefined;
  const output = args.get("output");
  if (!input || !kind || !output || !KINDS.includes(kind)) {
    console.error(usage());
    return 2;
  }
  const spec: FigureSpec = { input, kind, output, title: args.get("title") };
  try {
    render(spec);
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    return 1;
  }
  console.log(output);
  return 0;
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === pathToFileURL(process.argv[1]).href;
if (invokedDirectly) {
  process.exitCode = main(process.argv.slice(2));
}
