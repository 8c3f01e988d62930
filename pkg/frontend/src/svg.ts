/**
 * Deterministic SVG scene building: a small panel abstraction with linear
 * scales, axes, and shape helpers. Output depends only on the drawing calls
 * (numbers are formatted with a fixed precision), never on the clock.
 */

const PRECISION = 2;

export function fmt(v: number): string {
  const s = v.toFixed(PRECISION);
  return s === "-0.00" ? "0.00" : s;
}

export interface Extent {
  min: number;
  max: number;
}

export function extent(values: number[], pad = 0.05): Extent {
  let min = Infinity;
  let max = -Infinity;
  for (const v of values) {
    if (Number.isFinite(v)) {
      if (v < min) min = v;
      if (v > max) max = v;
    }
  }
  if (!Number.isFinite(min)) {
    min = 0;
    max = 1;
  }
  if (min === max) {
    min -= 0.5;
    max += 0.5;
  }
  const span = max - min;
  return { min: min - pad * span, max: max + pad * span };
}

export function ticks(ext: Extent, count = 5): number[] {
  const span = ext.max - ext.min;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const err = (count * step) / span;
  const factor = err <= 0.15 ? 10 : err <= 0.35 ? 5 : err <= 0.75 ? 2 : 1;
  const chosen = step * factor;
  const out: number[] = [];
  for (let t = Math.ceil(ext.min / chosen) * chosen; t <= ext.max + 1e-12; t += chosen) {
    out.push(Math.abs(t) < chosen * 1e-9 ? 0 : t);
  }
  return out;
}

function tickLabel(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 10000 || a < 0.01) return v.toExponential(1);
  return String(Math.round(v * 1000) / 1000);
}

export class Panel {
  readonly parts: string[] = [];

  constructor(
    readonly x: number,
    readonly y: number,
    readonly width: number,
    readonly height: number,
    readonly xExt: Extent,
    readonly yExt: Extent,
  ) {}

  sx(v: number): number {
    return this.x + ((v - this.xExt.min) / (this.xExt.max - this.xExt.min)) * this.width;
  }

  sy(v: number): number {
    return this.y + this.height - ((v - this.yExt.min) / (this.yExt.max - this.yExt.min)) * this.height;
  }

  frame(title: string): void {
    this.parts.push(
      `<rect x="${fmt(this.x)}" y="${fmt(this.y)}" width="${fmt(this.width)}" height="${fmt(this.height)}" fill="none" stroke="#444" stroke-width="1"/>`,
    );
    if (title) {
      this.parts.push(
        `<text x="${fmt(this.x + this.width / 2)}" y="${fmt(this.y - 6)}" text-anchor="middle" font-size="12" font-family="sans-serif">${title}</text>`,
      );
    }
    for (const t of ticks(this.xExt)) {
      const px = this.sx(t);
      this.parts.push(
        `<line x1="${fmt(px)}" y1="${fmt(this.y + this.height)}" x2="${fmt(px)}" y2="${fmt(this.y + this.height + 4)}" stroke="#444" stroke-width="1"/>`,
        `<text x="${fmt(px)}" y="${fmt(this.y + this.height + 16)}" text-anchor="middle" font-size="9" font-family="sans-serif">${tickLabel(t)}</text>`,
      );
    }
    for (const t of ticks(this.yExt)) {
      const py = this.sy(t);
      this.parts.push(
        `<line x1="${fmt(this.x - 4)}" y1="${fmt(py)}" x2="${fmt(this.x)}" y2="${fmt(py)}" stroke="#444" stroke-width="1"/>`,
        `<text x="${fmt(this.x - 6)}" y="${fmt(py + 3)}" text-anchor="end" font-size="9" font-family="sans-serif">${tickLabel(t)}</text>`,
      );
    }
  }

  polyline(xs: number[], ys: number[], color: string, width = 1, opacity = 1): void {
    const pts = xs
      .map((v, i) => [v, ys[i]])
      .filter(([v, w]) => Number.isFinite(v) && Number.isFinite(w))
      .map(([v, w]) => `${fmt(this.sx(v))},${fmt(this.sy(w))}`)
      .join(" ");
    if (!pts) return;
    const op = opacity === 1 ? "" : ` stroke-opacity="${opacity}"`;
    this.parts.push(
      `<polyline points="${pts}" fill="none" stroke="${color}" stroke-width="${width}"${op}/>`,
    );
  }

  polygon(xs: number[], ys: number[], fill: string, opacity: number): void {
    const pts = xs.map((v, i) => `${fmt(this.sx(v))},${fmt(this.sy(ys[i]))}`).join(" ");
    this.parts.push(`<polygon points="${pts}" fill="${fill}" fill-opacity="${opacity}" stroke="none"/>`);
  }

  rect(x0: number, x1: number, y0: number, y1: number, fill: string, stroke = "#333"): void {
    const px = Math.min(this.sx(x0), this.sx(x1));
    const py = Math.min(this.sy(y0), this.sy(y1));
    const w = Math.abs(this.sx(x1) - this.sx(x0));
    const h = Math.abs(this.sy(y1) - this.sy(y0));
    this.parts.push(
      `<rect x="${fmt(px)}" y="${fmt(py)}" width="${fmt(w)}" height="${fmt(h)}" fill="${fill}" stroke="${stroke}" stroke-width="1"/>`,
    );
  }

  segment(x0: number, y0: number, x1: number, y1: number, color: string, width = 1): void {
    this.parts.push(
      `<line x1="${fmt(this.sx(x0))}" y1="${fmt(this.sy(y0))}" x2="${fmt(this.sx(x1))}" y2="${fmt(this.sy(y1))}" stroke="${color}" stroke-width="${width}"/>`,
    );
  }

  hline(y: number, color: string, dash = ""): void {
    const d = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(
      `<line x1="${fmt(this.x)}" y1="${fmt(this.sy(y))}" x2="${fmt(this.x + this.width)}" y2="${fmt(this.sy(y))}" stroke="${color}" stroke-width="1"${d}/>`,
    );
  }
}

export interface LegendEntry {
  label: string;
  color: string;
}

export class Scene {
  private readonly panels: Panel[] = [];
  private readonly extras: string[] = [];

  constructor(
    readonly width: number,
    readonly height: number,
    readonly deterministic: boolean,
  ) {}

  panel(x: number, y: number, w: number, h: number, xExt: Extent, yExt: Extent): Panel {
    const p = new Panel(x, y, w, h, xExt, yExt);
    this.panels.push(p);
    return p;
  }

  legend(x: number, y: number, entries: LegendEntry[]): void {
    entries.forEach((e, i) => {
      const py = y + i * 14;
      this.extras.push(
        `<line x1="${fmt(x)}" y1="${fmt(py)}" x2="${fmt(x + 18)}" y2="${fmt(py)}" stroke="${e.color}" stroke-width="2"/>`,
        `<text x="${fmt(x + 24)}" y="${fmt(py + 3)}" font-size="10" font-family="sans-serif">${e.label}</text>`,
      );
    });
  }

  title(text: string): void {
    this.extras.push(
      `<text x="${fmt(this.width / 2)}" y="16" text-anchor="middle" font-size="13" font-family="sans-serif">${text}</text>`,
    );
  }

  render(): string {
    const body = [...this.extras, ...this.panels.flatMap((p) => p.parts)].join("\n");
    const stamp = this.deterministic ? "" : `<!-- generated ${new Date().toISOString()} -->\n`;
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" height="${this.height}" viewBox="0 0 ${this.width} ${this.height}">\n` +
      stamp +
      `<rect width="${this.width}" height="${this.height}" fill="white"/>\n` +
      body +
      "\n</svg>\n"
    );
  }
}
