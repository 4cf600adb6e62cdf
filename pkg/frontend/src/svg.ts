/** Minimal SVG string builder; output order is fully deterministic. */

export type Attrs = Record<string, string | number>;

export function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function attrString(attrs: Attrs): string {
  const keys = Object.keys(attrs);
  if (keys.length === 0) return "";
  return " " + keys.map((k) => `${k}="${esc(String(attrs[k]))}"`).join(" ");
}

export function tag(name: string, attrs: Attrs, children?: string[]): string {
  const inner = children ? children.join("") : "";
  if (inner === "") return `<${name}${attrString(attrs)}/>`;
  return `<${name}${attrString(attrs)}>${inner}</${name}>`;
}

export function text(content: string, attrs: Attrs): string {
  return `<text${attrString(attrs)}>${esc(content)}</text>`;
}

/** Round to fixed precision so float noise never reaches the output. */
export function px(value: number): string {
  return value.toFixed(2).replace(/\.00$/, "");
}

export interface Margin {
  top: number;
  right: number;
  bottom: number;
  left: number;
}

export function svgDocument(
  width: number,
  height: number,
  metadata: unknown,
  children: string[],
): string {
  const meta = tag("metadata", {}, [esc(JSON.stringify(metadata))]);
  const body = [meta, ...children].join("\n");
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}" font-family="sans-serif">\n${body}\n</svg>\n`
  );
}
