// Chart rendering as plain SVG/HTML strings built from the API's
// summaries (quantile fans, sweep curves, pmf tables). No DOM types
// here, so the whole module is testable outside a browser.

import { FanSummary, SideFan, SweepPoint, WorstCaseSummary } from "./types.js";

const OUTCOME_LABELS = ["z=(0,0)", "z=(1,0)", "z=(0,1)", "z=(1,1)"];

interface Box {
  width: number;
  height: number;
  pad: number;
}

function scale(domainLo: number, domainHi: number, rangeLo: number, rangeHi: number) {
  const span = domainHi - domainLo || 1;
  return (x: number) => rangeLo + ((x - domainLo) / span) * (rangeHi - rangeLo);
}

function polyline(xs: number[], ys: number[]): string {
  return xs.map((x, i) => `${x.toFixed(2)},${ys[i].toFixed(2)}`).join(" ");
}

function bandPath(xs: number[], upper: number[], lower: number[]): string {
  const forward = xs.map((x, i) => `${x.toFixed(2)},${upper[i].toFixed(2)}`);
  const back = xs
    .map((x, i) => `${x.toFixed(2)},${lower[i].toFixed(2)}`)
    .reverse();
  return `M${forward.join(" L")} L${back.join(" L")} Z`;
}

function fanLayers(
  fan: SideFan,
  xs: number[],
  y: (v: number) => number,
  color: string,
  label: string,
): string {
  const q05 = fan.q05.map(y);
  const q25 = fan.q25.map(y);
  const q75 = fan.q75.map(y);
  const q95 = fan.q95.map(y);
  const mean = fan.mean.map(y);
  return [
    `<path d="${bandPath(xs, q95, q05)}" fill="${color}" opacity="0.15"/>`,
    `<path d="${bandPath(xs, q75, q25)}" fill="${color}" opacity="0.3"/>`,
    `<polyline points="${polyline(xs, mean)}" fill="none" stroke="${color}" stroke-width="2" data-series="${label}"/>`,
  ].join("");
}

export function fanChart(
  fan: FanSummary,
  classic: { B: number[]; R: number[] } | null = null,
  box: Box = { width: 640, height: 300, pad: 36 },
): string {
  const { width, height, pad } = box;
  const values = [
    ...fan.B.q05, ...fan.B.q95, ...fan.R.q05, ...fan.R.q95,
    ...(classic ? [...classic.B, ...classic.R] : []),
  ];
  const lo = Math.min(0, ...values);
  const hi = Math.max(...values) * 1.05 || 1;
  const x = scale(fan.times[0], fan.times[fan.times.length - 1], pad, width - 8);
  const y = scale(lo, hi, height - pad, 8);
  const xs = fan.times.map(x);
  const parts = [
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" class="chart fan-chart" role="img">`,
    `<line x1="${pad}" y1="${y(0)}" x2="${width - 8}" y2="${y(0)}" stroke="#888"/>`,
    `<line x1="${pad}" y1="${height - pad}" x2="${pad}" y2="8" stroke="#888"/>`,
    fanLayers(fan.B, xs, y, "#2563eb", "B"),
    fanLayers(fan.R, xs, y, "#dc2626", "R"),
  ];
  if (classic) {
    parts.push(
      `<polyline points="${polyline(xs, classic.B.map(y))}" fill="none" stroke="#2563eb" stroke-dasharray="5 4" stroke-width="1.5" data-series="B-classic"/>`,
      `<polyline points="${polyline(xs, classic.R.map(y))}" fill="none" stroke="#dc2626" stroke-dasharray="5 4" stroke-width="1.5" data-series="R-classic"/>`,
    );
  }
  for (const t of fan.times) {
    parts.push(
      `<text x="${x(t).toFixed(2)}" y="${height - pad + 16}" font-size="10" text-anchor="middle">${t}</text>`,
    );
  }
  parts.push(
    `<text x="${pad - 6}" y="${y(hi / 1.05).toFixed(2)}" font-size="10" text-anchor="end">${(hi / 1.05).toFixed(0)}</text>`,
    `<text x="${pad - 6}" y="${y(0)}" font-size="10" text-anchor="end">0</text>`,
    "</svg>",
  );
  return parts.join("");
}

export function sweepChart(
  points: SweepPoint[],
  piStar: number | null = null,
  box: Box = { width: 640, height: 260, pad: 42 },
): string {
  const { width, height, pad } = box;
  const upper = points.map((p) => p.objective + p.stderr);
  const lower = points.map((p) => p.objective - p.stderr);
  const lo = Math.min(...lower);
  const hi = Math.max(...upper);
  const x = scale(points[0].pi, points[points.length - 1].pi, pad, width - 8);
  const y = scale(lo, hi === lo ? lo + 1 : hi, height - pad, 8);
  const xs = points.map((p) => x(p.pi));
  const parts = [
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" class="chart sweep-chart" role="img">`,
    `<path d="${bandPath(xs, upper.map(y), lower.map(y))}" fill="#0d9488" opacity="0.2" data-series="stderr-band"/>`,
    `<polyline points="${polyline(xs, points.map((p) => y(p.objective)))}" fill="none" stroke="#0d9488" stroke-width="2" data-series="objective"/>`,
  ];
  if (piStar !== null) {
    const px = x(piStar);
    parts.push(
      `<line x1="${px.toFixed(2)}" y1="8" x2="${px.toFixed(2)}" y2="${height - pad}" stroke="#f59e0b" stroke-width="2" data-series="pi-star"/>`,
      `<text x="${px.toFixed(2)}" y="${height - pad + 28}" font-size="11" text-anchor="middle" fill="#b45309">pi*=${piStar.toFixed(3)}</text>`,
    );
  }
  for (const frac of [0, 0.25, 0.5, 0.75, 1]) {
    const pi = points[0].pi + frac * (points[points.length - 1].pi - points[0].pi);
    parts.push(
      `<text x="${x(pi).toFixed(2)}" y="${height - pad + 14}" font-size="10" text-anchor="middle">${pi.toFixed(2)}</text>`,
    );
  }
  parts.push(
    `<text x="${pad - 6}" y="${y(hi).toFixed(2)}" font-size="10" text-anchor="end">${hi.toFixed(1)}</text>`,
    `<text x="${pad - 6}" y="${y(lo).toFixed(2)}" font-size="10" text-anchor="end">${lo.toFixed(1)}</text>`,
    "</svg>",
  );
  return parts.join("");
}

function pmfRow(label: string, pmf: number[]): string {
  const cells = pmf
    .map((p) => {
      const alpha = Math.min(1, Math.max(0.04, p)).toFixed(3);
      return `<td class="pmf-cell" style="background: rgba(13, 148, 136, ${alpha})">${p.toFixed(4)}</td>`;
    })
    .join("");
  return `<tr><th>${label}</th>${cells}</tr>`;
}

export function worstcasePanel(worstcase: WorstCaseSummary): string {
  const avg = [0, 1, 2, 3].map(
    (j) =>
      worstcase.per_step_pmf.reduce((acc, row) => acc + row[j], 0) /
      worstcase.per_step_pmf.length,
  );
  const header = OUTCOME_LABELS.map((s) => `<th>${s}</th>`).join("");
  const kl = worstcase.weighted_kl;
  const saturated = worstcase.saturated ? " <em>(radius saturated)</em>" : "";
  return [
    `<table class="pmf-table"><thead><tr><th></th>${header}</tr></thead><tbody>`,
    pmfRow("barycenter", worstcase.barycenter),
    pmfRow("worst case (step avg)", avg),
    "</tbody></table>",
    `<p class="kl-readout">weighted KL: barycenter ${kl.barycenter.toFixed(6)}, ` +
      `worst case ${kl.worstcase.toFixed(6)} | backend ${worstcase.backend}, ` +
      `kappa ${worstcase.kappa.toPrecision(4)}${saturated}</p>`,
  ].join("");
}

export function perStepTable(perStep: number[][]): string {
  const header = OUTCOME_LABELS.map((s) => `<th>${s}</th>`).join("");
  const rows = perStep.map((row, k) => pmfRow(`k=${k + 1}`, row)).join("");
  return `<table class="pmf-table per-step"><thead><tr><th>step</th>${header}</tr></thead><tbody>${rows}</tbody></table>`;
}
