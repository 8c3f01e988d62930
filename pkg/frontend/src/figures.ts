/**
 * The five figure kinds, each a pure function from parsed CSV tables (plus
 * the deterministic flag) to an SVG string.
 *
 * Input schemas (as written by the fitting tool):
 *   trace   chain.csv (1 or 2 files)    iteration, beta_raw_*, ..., sigma, lambda, gamma
 *   boxplot estimates.csv               replicate, beta_*, ...
 *   link    fitted.csv                  grid, mean, lower, upper
 *   acf     acf.csv (1 or 2 files)      lag, acf_beta_*, ...
 *   dhist   chain.csv                   ..., d, ...
 */

import { Table, column, columnsWithPrefix } from "./csv.js";
import { Scene, extent } from "./svg.js";

export type FigureKind = "trace" | "boxplot" | "link" | "acf" | "dhist";

const CHAIN_COLORS = ["#1b6ca8", "#d1495b"];

function quantile(sorted: number[], p: number): number {
  const h = p * (sorted.length - 1);
  const k = Math.floor(h);
  const next = Math.min(k + 1, sorted.length - 1);
  return sorted[k] + (h - k) * (sorted[next] - sorted[k]);
}

export function renderTrace(chains: Table[], deterministic: boolean): string {
  if (chains.length < 1 || chains.length > 2) {
    throw new Error(`trace expects 1 or 2 chain files, got ${chains.length}`);
  }
  const betas = columnsWithPrefix(chains[0], "beta_raw_");
  if (betas.length === 0) {
    throw new Error("input: missing column 'beta_raw_1'");
  }
  const params = [...betas, "sigma", "gamma", "lambda"];
  const cols = 3;
  const rows = Math.ceil(params.length / cols);
  const pw = 220;
  const ph = 110;
  const scene = new Scene(40 + cols * (pw + 50), 40 + rows * (ph + 45), deterministic);
  scene.title(chains.length === 2 ? "Trace plots (two chains)" : "Trace plots");

  params.forEach((name, i) => {
    const series = chains.map((c) => column(c, name));
    const iter = chains.map((c) => column(c, "iteration"));
    const r = Math.floor(i / cols);
    const cIdx = i % cols;
    const panel = scene.panel(
      50 + cIdx * (pw + 50),
      45 + r * (ph + 45),
      pw,
      ph,
      extent(iter.flat(), 0),
      extent(series.flat()),
    );
    panel.frame(name);
    series.forEach((values, k) => {
      panel.polyline(iter[k], values, CHAIN_COLORS[k], 1, chains.length === 2 ? 0.8 : 1);
    });
  });
  if (chains.length === 2) {
    scene.legend(50, 28, [
      { label: "chain 1", color: CHAIN_COLORS[0] },
      { label: "chain 2", color: CHAIN_COLORS[1] },
    ]);
  }
  return scene.render();
}

export function renderBoxplot(estimates: Table, deterministic: boolean): string {
  const betas = columnsWithPrefix(estimates, "beta_");
  if (betas.length === 0) {
    throw new Error("input: missing column 'beta_1'");
  }
  const series = betas.map((name) => [...column(estimates, name)].sort((a, b) => a - b));
  const scene = new Scene(120 + betas.length * 60, 320, deterministic);
  scene.title("Index estimates across replications");
  const panel = scene.panel(
    60,
    45,
    betas.length * 60,
    230,
    { min: 0, max: betas.length },
    extent(series.flat()),
  );
  panel.frame("");
  series.forEach((sorted, i) => {
    const center = i + 0.5;
    const q1 = quantile(sorted, 0.25);
    const q2 = quantile(sorted, 0.5);
    const q3 = quantile(sorted, 0.75);
    const lo = sorted[0];
    const hi = sorted[sorted.length - 1];
    panel.segment(center, lo, center, q1, "#333");
    panel.segment(center, q3, center, hi, "#333");
    panel.segment(center - 0.12, lo, center + 0.12, lo, "#333");
    panel.segment(center - 0.12, hi, center + 0.12, hi, "#333");
    panel.rect(center - 0.25, center + 0.25, q1, q3, "#9ec9e2");
    panel.segment(center - 0.25, q2, center + 0.25, q2, "#1b6ca8", 2);
    panel.parts.push(
      `<text x="${panel.sx(center).toFixed(2)}" y="${(panel.y + panel.height + 30).toFixed(2)}" text-anchor="middle" font-size="10" font-family="sans-serif">${betas[i]}</text>`,
    );
  });
  return scene.render();
}

export function renderLink(fitted: Table, deterministic: boolean): string {
  const grid = column(fitted, "grid");
  const mean = column(fitted, "mean");
  const lower = column(fitted, "lower");
  const upper = column(fitted, "upper");
  const scene = new Scene(520, 360, deterministic);
  scene.title("Fitted link with 95% band");
  const panel = scene.panel(60, 45, 420, 270, extent(grid, 0), extent([...lower, ...upper]));
  panel.frame("");
  panel.polygon(
    [...grid, ...[...grid].reverse()],
    [...upper, ...[...lower].reverse()],
    "#9ec9e2",
    0.5,
  );
  panel.polyline(grid, mean, "#1b6ca8", 2);
  return scene.render();
}

export function renderAcf(tables: Table[], deterministic: boolean): string {
  if (tables.length < 1 || tables.length > 2) {
    throw new Error(`acf expects 1 or 2 files, got ${tables.length}`);
  }
  const betas = columnsWithPrefix(tables[0], "acf_beta_");
  if (betas.length === 0) {
    throw new Error("input: missing column 'acf_beta_1'");
  }
  const pw = 200;
  const ph = 120;
  const scene = new Scene(50 + betas.length * (pw + 45), 230, deterministic);
  scene.title(
    tables.length === 2 ? "Autocorrelation: collapsed vs uncollapsed" : "Autocorrelation",
  );
  betas.forEach((name, i) => {
    const lag = column(tables[0], "lag");
    const panel = scene.panel(
      55 + i * (pw + 45),
      60,
      pw,
      ph,
      extent(lag, 0),
      { min: -0.25, max: 1.05 },
    );
    panel.frame(name.replace("acf_", ""));
    panel.hline(0, "#999", "3,3");
    tables.forEach((t, k) => {
      panel.polyline(lag, column(t, name), CHAIN_COLORS[k], 1.5);
    });
  });
  if (tables.length === 2) {
    scene.legend(55, 34, [
      { label: "collapsed", color: CHAIN_COLORS[0] },
      { label: "uncollapsed", color: CHAIN_COLORS[1] },
    ]);
  }
  return scene.render();
}

export function renderDhist(chain: Table, deterministic: boolean, bins = 30): string {
  const d = column(chain, "d");
  const ext = extent(d, 0);
  const width = (ext.max - ext.min) / bins || 1;
  const counts = new Array(bins).fill(0);
  for (const v of d) {
    let b = Math.floor((v - ext.min) / width);
    if (b >= bins) b = bins - 1;
    if (b < 0) b = 0;
    counts[b] += 1;
  }
  const scene = new Scene(520, 360, deterministic);
  scene.title("Posterior of the implied range parameter d");
  const panel = scene.panel(
    60,
    45,
    420,
    270,
    ext,
    { min: 0, max: Math.max(...counts) * 1.08 },
  );
  panel.frame("");
  counts.forEach((count, b) => {
    if (count > 0) {
      panel.rect(ext.min + b * width, ext.min + (b + 1) * width, 0, count, "#9ec9e2");
    }
  });
  return scene.render();
}

export function render(kind: FigureKind, tables: Table[], deterministic: boolean): string {
  switch (kind) {
    case "trace":
      return renderTrace(tables, deterministic);
    case "boxplot":
      return renderBoxplot(tables[0], deterministic);
    case "link":
      return renderLink(tables[0], deterministic);
    case "acf":
      return renderAcf(tables, deterministic);
    case "dhist":
      return renderDhist(tables[0], deterministic);
  }
}
