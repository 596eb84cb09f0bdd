/** Parser for the experiment harness curves.csv format. */

export const CSV_HEADER =
  "episode,agent,rmsd,return,steps,pairs,ref_steps,ref_return";

export const METRICS = ["rmsd", "return", "steps", "pairs"] as const;
export type Metric = (typeof METRICS)[number];

export interface AgentSeries {
  rmsd: number[];
  return: number[];
  steps: number[];
  pairs: number[];
}

export interface CurveSet {
  /** Episode indices, contiguous from 0. */
  episodes: number[];
  /** Agent name -> per-metric series, one value per episode. */
  agents: Map<string, AgentSeries>;
  /** Per-episode deterministic-optimal reference. */
  refSteps: number[];
  refReturn: number[];
}

export class CsvError extends Error {}

function emptySeries(): AgentSeries {
  return { rmsd: [], return: [], steps: [], pairs: [] };
}

export function parseCurves(text: string): CurveSet {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0 || lines[0] !== CSV_HEADER) {
    throw new CsvError(`unexpected header: ${JSON.stringify(lines[0] ?? "")}`);
  }
  if (lines.length === 1) {
    throw new CsvError("no data rows");
  }

  const agents = new Map<string, AgentSeries>();
  const refSteps: number[] = [];
  const refReturn: number[] = [];
  const episodes: number[] = [];

  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].split(",");
    if (parts.length !== 8) {
      throw new CsvError(`row ${i}: expected 8 fields, got ${parts.length}`);
    }
    const episode = Number(parts[0]);
    const agent = parts[1];
    const values = parts.slice(2).map(Number);
    if (!Number.isInteger(episode) || episode < 0 || agent === "" ||
        values.some((v) => !Number.isFinite(v))) {
      throw new CsvError(`row ${i}: malformed values in ${JSON.stringify(lines[i])}`);
    }

    let series = agents.get(agent);
    if (series === undefined) {
      series = emptySeries();
      agents.set(agent, series);
    }
    if (series.rmsd.length !== episode) {
      throw new CsvError(
        `row ${i}: episode ${episode} out of order for agent ${agent}`);
    }
    series.rmsd.push(values[0]);
    series.return.push(values[1]);
    series.steps.push(values[2]);
    series.pairs.push(values[3]);

    if (episodes.length === episode) {
      episodes.push(episode);
      refSteps.push(values[4]);
      refReturn.push(values[5]);
    }
  }

  for (const [agent, series] of agents) {
    if (series.rmsd.length !== episodes.length) {
      throw new CsvError(
        `agent ${agent} has ${series.rmsd.length} rows, expected ${episodes.length}`);
    }
  }
  return { episodes, agents, refSteps, refReturn };
}

/** Centered-window moving average; window <= 1 returns the input unchanged. */
export function movingAverage(values: number[], window: number): number[] {
  if (window <= 1) return values.slice();
  const half = Math.floor(window / 2);
  return values.map((_, i) => {
    const lo = Math.max(0, i - half);
    const hi = Math.min(values.length, i + half + 1);
    let sum = 0;
    for (let j = lo; j < hi; j++) sum += values[j];
    return sum / (hi - lo);
  });
}
