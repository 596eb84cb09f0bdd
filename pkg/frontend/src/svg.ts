/** Minimal line-chart SVG builder with embedded numeric metadata. */

export interface Series {
  name: string;
  color: string;
  dashed?: boolean;
  x: number[];
  y: number[];
}

export interface PanelSpec {
  title: string;
  xlabel: string;
  ylabel: string;
  series: Series[];
  /** Vertical marker positions in x units (e.g. change episodes). */
  markers: number[];
  width?: number;
  height?: number;
}

export interface Extent {
  xMin: number;
  xMax: number;
  yMin: number;
  yMax: number;
}

const MARGIN = { left: 62, right: 16, top: 34, bottom: 44 };

export function dataExtent(spec: PanelSpec): Extent {
  let xMin = Infinity, xMax = -Infinity, yMin = Infinity, yMax = -Infinity;
  for (const s of spec.series) {
    for (const v of s.x) {
      if (v < xMin) xMin = v;
      if (v > xMax) xMax = v;
    }
    for (const v of s.y) {
      if (v < yMin) yMin = v;
      if (v > yMax) yMax = v;
    }
  }
  if (!Number.isFinite(xMin)) {
    xMin = 0; xMax = 1; yMin = 0; yMax = 1;
  }
  if (xMin === xMax) xMax = xMin + 1;
  if (yMin === yMax) yMax = yMin + 1;
  return { xMin, xMax, yMin, yMax };
}

function ticks(lo: number, hi: number, count = 5): number[] {
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const candidates = [step, 2 * step, 5 * step, 10 * step];
  const chosen = candidates.find((c) => span / c <= count) ?? 10 * step;
  const out: number[] = [];
  for (let v = Math.ceil(lo / chosen) * chosen; v <= hi + 1e-9; v += chosen) {
    out.push(Number(v.toPrecision(12)));
  }
  return out;
}

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

/** Render one panel; plotted values are embedded verbatim as JSON metadata. */
export function renderPanel(spec: PanelSpec): string {
  const width = spec.width ?? 640;
  const height = spec.height ?? 420;
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;
  const ext = dataExtent(spec);
  const sx = (v: number) =>
    MARGIN.left + ((v - ext.xMin) / (ext.xMax - ext.xMin)) * plotW;
  const sy = (v: number) =>
    MARGIN.top + plotH - ((v - ext.yMin) / (ext.yMax - ext.yMin)) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`);
  const metadata = {
    title: spec.title,
    extent: ext,
    markers: spec.markers,
    series: spec.series.map((s) => ({
      name: s.name,
      dashed: Boolean(s.dashed),
      x: s.x,
      y: s.y,
    })),
  };
  parts.push(`<metadata id="plot-data">${esc(JSON.stringify(metadata))}</metadata>`);
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" fill="none" stroke="#333"/>`);

  for (const t of ticks(ext.xMin, ext.xMax)) {
    const x = sx(t);
    parts.push(
      `<line x1="${x}" y1="${MARGIN.top + plotH}" x2="${x}" y2="${MARGIN.top + plotH + 5}" stroke="#333"/>`);
    parts.push(
      `<text x="${x}" y="${MARGIN.top + plotH + 18}" font-size="11" text-anchor="middle">${t}</text>`);
  }
  for (const t of ticks(ext.yMin, ext.yMax)) {
    const y = sy(t);
    parts.push(
      `<line x1="${MARGIN.left - 5}" y1="${y}" x2="${MARGIN.left}" y2="${y}" stroke="#333"/>`);
    parts.push(
      `<text x="${MARGIN.left - 8}" y="${y + 4}" font-size="11" text-anchor="end">${t}</text>`);
  }

  for (const m of spec.markers) {
    if (m < ext.xMin || m > ext.xMax) continue;
    const x = sx(m);
    parts.push(
      `<line x1="${x}" y1="${MARGIN.top}" x2="${x}" y2="${MARGIN.top + plotH}" stroke="#888" stroke-dasharray="3,3" class="change-marker"/>`);
  }

  for (const s of spec.series) {
    const points = s.x
      .map((v, i) => `${sx(v).toFixed(2)},${sy(s.y[i]).toFixed(2)}`)
      .join(" ");
    const dash = s.dashed ? ' stroke-dasharray="6,4"' : "";
    parts.push(
      `<polyline points="${points}" fill="none" stroke="${s.color}" stroke-width="1.5"${dash} class="series" data-name="${esc(s.name)}"/>`);
  }

  parts.push(
    `<text x="${width / 2}" y="20" font-size="14" text-anchor="middle">${esc(spec.title)}</text>`);
  parts.push(
    `<text x="${MARGIN.left + plotW / 2}" y="${height - 8}" font-size="12" text-anchor="middle">${esc(spec.xlabel)}</text>`);
  parts.push(
    `<text x="16" y="${MARGIN.top + plotH / 2}" font-size="12" text-anchor="middle" transform="rotate(-90 16 ${MARGIN.top + plotH / 2})">${esc(spec.ylabel)}</text>`);

  let legendY = MARGIN.top + 14;
  for (const s of spec.series) {
    const x0 = width - MARGIN.right - 150;
    const dash = s.dashed ? ' stroke-dasharray="6,4"' : "";
    parts.push(
      `<line x1="${x0}" y1="${legendY - 4}" x2="${x0 + 22}" y2="${legendY - 4}" stroke="${s.color}" stroke-width="1.5"${dash}/>`);
    parts.push(
      `<text x="${x0 + 28}" y="${legendY}" font-size="11">${esc(s.name)}</text>`);
    legendY += 16;
  }

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}

/** Extract the numeric metadata embedded by renderPanel. */
export function readPanelMetadata(svg: string): {
  title: string;
  extent: Extent;
  markers: number[];
  series: { name: string; dashed: boolean; x: number[]; y: number[] }[];
} {
  const match = svg.match(/<metadata id="plot-data">([\s\S]*?)<\/metadata>/);
  if (!match) throw new Error("no plot metadata found");
  const json = match[1]
    .replace(/&lt;/g, "<")
    .replace(/&gt;/g, ">")
    .replace(/&amp;/g, "&");
  return JSON.parse(json);
}
