/** Minimal SVG line-and-band chart, rendered to a string.
 *
 * History draws as a single line; the forecast window draws nested
 * quantile bands (0.05-0.95 and 0.25-0.75) around the median line. Band
 * edges come straight from the service's quantiles; nothing is sorted or
 * recomputed here, so monotone service quantiles render as non-crossing
 * bands by construction.
 */

export interface ChartPoint {
  x: number;
  y: number;
}

export interface BandPoint {
  x: number;
  lo: number;
  hi: number;
}

export interface ChartSpec {
  width?: number;
  height?: number;
  history: ChartPoint[];
  median: ChartPoint[];
  outerBand: BandPoint[];
  innerBand: BandPoint[];
  markers?: { x: number; kind: "Increase" | "Decrease" }[];
}

const MARGIN = 6;

export function renderChart(spec: ChartSpec): string {
  const width = spec.width ?? 520;
  const height = spec.height ?? 140;
  const xs = [...spec.history, ...spec.median].map((p) => p.x);
  const ys = [
    ...spec.history.map((p) => p.y),
    ...spec.median.map((p) => p.y),
    ...spec.outerBand.flatMap((b) => [b.lo, b.hi]),
  ];
  if (!xs.length || !ys.length) {
    return `<svg class="chart" width="${width}" height="${height}"></svg>`;
  }
  const xMin = Math.min(...xs);
  const xMax = Math.max(...xs);
  const yMin = Math.min(...ys);
  const yMax = Math.max(...ys);
  const sx = (x: number) =>
    MARGIN + ((x - xMin) / Math.max(xMax - xMin, 1e-9)) * (width - 2 * MARGIN);
  const sy = (y: number) =>
    height - MARGIN - ((y - yMin) / Math.max(yMax - yMin, 1e-9)) * (height - 2 * MARGIN);

  const polyline = (points: ChartPoint[]) =>
    points.map((p) => `${sx(p.x).toFixed(1)},${sy(p.y).toFixed(1)}`).join(" ");
  const bandPath = (band: BandPoint[]) => {
    if (!band.length) return "";
    const upper = band.map((b) => `${sx(b.x).toFixed(1)},${sy(b.hi).toFixed(1)}`);
    const lower = [...band].reverse().map((b) => `${sx(b.x).toFixed(1)},${sy(b.lo).toFixed(1)}`);
    return `M${upper.join(" L")} L${lower.join(" L")} Z`;
  };

  const markers = (spec.markers ?? [])
    .map((m) => {
      const color = m.kind === "Increase" ? "var(--up, #2e7d32)" : "var(--down, #c62828)";
      return `<line x1="${sx(m.x).toFixed(1)}" y1="${MARGIN}" x2="${sx(m.x).toFixed(1)}" y2="${height - MARGIN}" stroke="${color}" stroke-dasharray="3 3"/>`;
    })
    .join("");

  return [
    `<svg class="chart" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
    spec.outerBand.length ? `<path class="band outer" d="${bandPath(spec.outerBand)}" fill="#90caf9" opacity="0.35"/>` : "",
    spec.innerBand.length ? `<path class="band inner" d="${bandPath(spec.innerBand)}" fill="#42a5f5" opacity="0.35"/>` : "",
    spec.history.length ? `<polyline class="history" points="${polyline(spec.history)}" fill="none" stroke="#263238" stroke-width="1.5"/>` : "",
    spec.median.length ? `<polyline class="median" points="${polyline(spec.median)}" fill="none" stroke="#1565c0" stroke-width="1.5" stroke-dasharray="5 3"/>` : "",
    markers,
    `</svg>`,
  ].join("");
}
