/** Four-panel figure generation from a curves.csv file. */

import { mkdirSync, readFileSync, writeFileSync } from "node:fs";
import { join } from "node:path";

import { CurveSet, Metric, METRICS, movingAverage, parseCurves } from "./csv.js";
import { encodePng, Raster, type Color } from "./png.js";
import { dataExtent, renderPanel, type PanelSpec, type Series } from "./svg.js";

export interface RenderOptions {
  /** Moving-average window; 0 or 1 disables smoothing. */
  smooth?: number;
  /** Change episodes drawn as vertical markers. */
  changes?: number[];
  width?: number;
  height?: number;
}

export const DEFAULT_CHANGES = [1000, 2000];

/** The flat tail of the pairs panel is omitted beyond this episode. */
export const PAIRS_EPISODE_LIMIT = 50;

const AGENT_COLORS: Record<string, string> = {
  baseline: "#1f77b4",
  oasp: "#2ca02c",
};

const PANEL_TITLES: Record<Metric, string> = {
  rmsd: "RMSD between consecutive episodes",
  return: "Return per episode",
  steps: "Steps per episode",
  pairs: "Known state-action pairs",
};

function agentColor(name: string, index: number): string {
  return AGENT_COLORS[name] ?? ["#d62728", "#9467bd", "#8c564b"][index % 3];
}

export function buildPanel(
  curves: CurveSet,
  metric: Metric,
  options: RenderOptions,
): PanelSpec {
  const smooth = options.smooth ?? 0;
  const changes = options.changes ?? DEFAULT_CHANGES;
  const truncate = metric === "pairs";
  const limit = truncate
    ? Math.min(curves.episodes.length, PAIRS_EPISODE_LIMIT)
    : curves.episodes.length;
  const x = curves.episodes.slice(0, limit);

  const series: Series[] = [];
  let index = 0;
  for (const [agent, agentSeries] of curves.agents) {
    const raw = agentSeries[metric].slice(0, limit);
    series.push({
      name: agent,
      color: agentColor(agent, index),
      x,
      y: truncate ? raw : movingAverage(raw, smooth),
    });
    index += 1;
  }

  if (metric === "return" || metric === "steps") {
    const ref = metric === "return" ? curves.refReturn : curves.refSteps;
    series.push({
      name: "optimal reference",
      color: "#d62728",
      dashed: true,
      x,
      y: ref.slice(0, limit),
    });
  }

  return {
    title: PANEL_TITLES[metric],
    xlabel: "episode",
    ylabel: metric,
    series,
    markers: changes.filter((c) => c < limit),
    width: options.width,
    height: options.height,
  };
}

function hexColor(hex: string): Color {
  return [
    parseInt(hex.slice(1, 3), 16),
    parseInt(hex.slice(3, 5), 16),
    parseInt(hex.slice(5, 7), 16),
  ];
}

export function rasterizePanel(spec: PanelSpec): Buffer {
  const width = spec.width ?? 640;
  const height = spec.height ?? 420;
  const margin = { left: 62, right: 16, top: 34, bottom: 44 };
  const plotW = width - margin.left - margin.right;
  const plotH = height - margin.top - margin.bottom;
  const ext = dataExtent(spec);
  const sx = (v: number) =>
    margin.left + ((v - ext.xMin) / (ext.xMax - ext.xMin)) * plotW;
  const sy = (v: number) =>
    margin.top + plotH - ((v - ext.yMin) / (ext.yMax - ext.yMin)) * plotH;

  const raster = new Raster(width, height);
  const frame: Color = [51, 51, 51];
  raster.polyline(
    [margin.left, margin.left + plotW, margin.left + plotW, margin.left, margin.left],
    [margin.top, margin.top, margin.top + plotH, margin.top + plotH, margin.top],
    frame);
  for (const m of spec.markers) {
    if (m < ext.xMin || m > ext.xMax) continue;
    raster.line(sx(m), margin.top, sx(m), margin.top + plotH, [136, 136, 136]);
  }
  for (const s of spec.series) {
    raster.polyline(s.x.map(sx), s.y.map(sy), hexColor(s.color));
  }
  return encodePng(raster);
}

export interface RenderResult {
  files: string[];
}

/** Render the four panels of one scenario to <outDir>/<metric>.{svg,png}. */
export function render(
  csvPath: string,
  outDir: string,
  options: RenderOptions = {},
): RenderResult {
  const curves = parseCurves(readFileSync(csvPath, "utf8"));
  mkdirSync(outDir, { recursive: true });
  const files: string[] = [];
  for (const metric of METRICS) {
    const spec = buildPanel(curves, metric, options);
    const svgPath = join(outDir, `${metric}.svg`);
    writeFileSync(svgPath, renderPanel(spec));
    const pngPath = join(outDir, `${metric}.png`);
    writeFileSync(pngPath, rasterizePanel(spec));
    files.push(svgPath, pngPath);
  }
  return { files };
}
