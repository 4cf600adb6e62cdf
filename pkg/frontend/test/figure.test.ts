import { existsSync, mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import { SchemaError, render } from "../dist/index.js";
import { main } from "../dist/cli.js";

const FIXTURES = fileURLToPath(new URL("./fixtures", import.meta.url));

function tmp(): string {
  return mkdtempSync(join(tmpdir(), "plots-"));
}

describe("render", () => {
  it("re-renders the same artifact byte for byte", () => {
    const dir = tmp();
    const spec = {
      input: join(FIXTURES, "sweep_both.csv"),
      kind: "diff_heatmap" as const,
      output: join(dir, "a.svg"),
    };
    render(spec);
    const first = readFileSync(spec.output);
    render({ ...spec, output: join(dir, "b.svg") });
    expect(readFileSync(join(dir, "b.svg")).equals(first)).toBe(true);
  });

  it("rejects unknown figure kinds", () => {
    const dir = tmp();
    const spec = {
      input: join(FIXTURES, "sweep_fb.csv"),
      kind: "pie" as never,
      output: join(dir, "pie.svg"),
    };
    expect(() => render(spec)).toThrow(SchemaError);
    expect(existsSync(spec.output)).toBe(false);
  });

  it("writes nothing when the artifact is empty", () => {
    const dir = tmp();
    const input = join(dir, "empty.csv");
    writeFileSync(input, "# verb = sweep\n");
    const output = join(dir, "empty.svg");
    expect(() =>
      render({ input, kind: "heatmap", output }),
    ).toThrow(/missing column|no data rows/);
    expect(existsSync(output)).toBe(false);
  });

  it("writes nothing when the schema does not match", () => {
    const dir = tmp();
    const input = join(dir, "bad.csv");
    writeFileSync(input, "a,b\n1,2\n");
    const output = join(dir, "bad.svg");
    expect(() => render({ input, kind: "heatmap", output })).toThrow(/missing column/);
    expect(existsSync(output)).toBe(false);
  });
});

describe("cli main", () => {
  it("renders a figure and exits zero", () => {
    const dir = tmp();
    const out = join(dir, "cli.svg");
    const code = main([
      "--input",
      join(FIXTURES, "sweep_rgs_fb.csv"),
      "--kind",
      "heatmap",
      "--output",
      out,
    ]);
    expect(code).toBe(0);
    expect(existsSync(out)).toBe(true);
  });

  it("exits 2 on usage errors", () => {
    expect(main(["--kind", "heatmap"])).toBe(2);
    expect(main(["--input", "x.csv", "--kind", "pie", "--output", "y.svg"])).toBe(2);
  });

  it("exits 1 when the input cannot be rendered", () => {
    const dir = tmp();
    expect(
      main([
        "--input",
        join(dir, "absent.csv"),
        "--kind",
        "heatmap",
        "--output",
        join(dir, "absent.svg"),
      ]),
    ).toBe(1);
  });
});
