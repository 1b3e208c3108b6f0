// Pure scatter layout and SVG rendering: one point per trial, colored by
// verdict, optionally marking the constraint's in-region trials. No metric
// is computed here; in-region membership comes from the server's
// in_region_trial_ids.

import type { FeatureRow, Verdict, VerdictFilter } from "./types.js";

export interface ScatterPoint {
  trialId: string;
  x: number;
  y: number;
  verdict: Verdict;
  inRegion: boolean | null;
}

export interface ScatterView {
  points: ScatterPoint[];
  skipped: number;
  empty: boolean;
  xDomain: [number, number];
  yDomain: [number, number];
}

export const VERDICT_COLORS: Record<Verdict, string> = {
  HOLDS: "#2f9e44",
  VIOLATED: "#e03131",
  ERROR: "#868e96",
};

function numericValue(row: FeatureRow, feature: string): number | null {
  const value = row.features[feature];
  if (value === null || value === undefined || typeof value === "boolean") return null;
  return value;
}

export function buildScatter(
  rows: readonly FeatureRow[],
  xAxis: string,
  yAxis: string,
  filter: VerdictFilter,
  inRegionIds: ReadonlySet<string> | null,
): ScatterView {
  const points: ScatterPoint[] = [];
  let skipped = 0;
  for (const row of rows) {
    if (filter !== "ALL" && row.verdict !== filter) continue;
    const x = numericValue(row, xAxis);
    const y = numericValue(row, yAxis);
    if (x === null || y === null) {
      skipped += 1;
      continue;
    }
    points.push({
      trialId: row.trial_id,
      x,
      y,
      verdict: row.verdict,
      inRegion: inRegionIds ? inRegionIds.has(row.trial_id) : null,
    });
  }
  const xs = points.map((p) => p.x);
  const ys = points.map((p) => p.y);
  return {
    points,
    skipped,
    empty: points.length === 0,
    xDomain: xs.length ? [Math.min(...xs), Math.max(...xs)] : [0, 1],
    yDomain: ys.length ? [Math.min(...ys), Math.max(...ys)] : [0, 1],
  };
}

export function linearScale(
  domain: [number, number],
  range: [number, number],
): (v: number) => number {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  return (v: number) => r0 + ((v - d0) / span) * (r1 - r0);
}

export function niceTicks(lo: number, hi: number, count = 5): number[] {
  if (lo === hi) return [lo];
  const rawStep = (hi - lo) / Math.max(1, count);
  const magnitude = 10 ** Math.floor(Math.log10(rawStep));
  const candidates = [1, 2, 5, 10].map((m) => m * magnitude);
  const step = candidates.find((c) => c >= rawStep) ?? candidates[3]!;
  const start = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let v = start; v <= hi + step * 1e-9; v += step) {
    ticks.push(Number(v.toPrecision(12)));
  }
  return ticks;
}

const WIDTH = 640;
const HEIGHT = 420;
const PAD = 42;

/** Render the scatter as standalone SVG markup. Every circle carries its
 * trial id in data-trial-id so the shell can wire click-to-inspect. */
export function renderSvg(view: ScatterView, xAxis: string, yAxis: string): string {
  if (view.empty) {
    return `<svg viewBox="0 0 ${WIDTH} ${HEIGHT}" role="img">` +
      `<text x="${WIDTH / 2}" y="${HEIGHT / 2}" text-anchor="middle" class="empty-state">` +
      `no trials match the current filters</text></svg>`;
  }
  const sx = linearScale(view.xDomain, [PAD, WIDTH - PAD]);
  const sy = linearScale(view.yDomain, [HEIGHT - PAD, PAD]);
  const parts: string[] = [
    `<svg viewBox="0 0 ${WIDTH} ${HEIGHT}" role="img">`,
    `<line x1="${PAD}" y1="${HEIGHT - PAD}" x2="${WIDTH - PAD}" y2="${HEIGHT - PAD}" class="axis"/>`,
    `<line x1="${PAD}" y1="${PAD}" x2="${PAD}" y2="${HEIGHT - PAD}" class="axis"/>`,
  ];
  for (const t of niceTicks(view.xDomain[0], view.xDomain[1])) {
    const x = sx(t);
    parts.push(`<text x="${x.toFixed(1)}" y="${HEIGHT - PAD + 16}" text-anchor="middle" class="tick">${t}</text>`);
  }
  for (const t of niceTicks(view.yDomain[0], view.yDomain[1])) {
    const y = sy(t);
    parts.push(`<text x="${PAD - 6}" y="${(y + 4).toFixed(1)}" text-anchor="end" class="tick">${t}</text>`);
  }
  parts.push(`<text x="${WIDTH / 2}" y="${HEIGHT - 6}" text-anchor="middle" class="label">${xAxis}</text>`);
  parts.push(`<text x="12" y="${HEIGHT / 2}" text-anchor="middle" class="label" transform="rotate(-90 12 ${HEIGHT / 2})">${yAxis}</text>`);
  for (const p of view.points) {
    const cls = p.inRegion === null ? "pt" : p.inRegion ? "pt in-region" : "pt out-region";
    parts.push(
      `<circle cx="${sx(p.x).toFixed(1)}" cy="${sy(p.y).toFixed(1)}" r="4" ` +
      `fill="${VERDICT_COLORS[p.verdict]}" class="${cls}" data-trial-id="${p.trialId}"/>`,
    );
  }
  parts.push("</svg>");
  return parts.join("");
}
