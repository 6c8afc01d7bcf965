/** View renderers: pure functions from data to HTML strings.
 *
 * Direction badges always show the service's label field verbatim; the
 * client never reclassifies. Class probabilities render next to each
 * badge, and a stale-hash banner appears whenever a forecast's manifest
 * hash differs from the series view it is drawn against.
 */

import { renderChart } from "./chart.js";
import type {
  DraftEvent,
  EventRecord,
  ForecastResponse,
  ReplayCell,
  SeriesRecord,
  TargetForecast,
} from "./types.js";
import { IMPACT_MEANINGS } from "./types.js";

export function escapeHtml(raw: string): string {
  return raw
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function directionBadge(direction: string, scores?: {
  p_increase: number;
  p_stable: number;
  p_decrease: number;
}): string {
  const classes: Record<string, string> = {
    Increase: "badge up",
    Decrease: "badge down",
    Stable: "badge flat",
    Unscored: "badge unscored",
  };
  const cls = classes[direction] ?? "badge";
  const probs = scores
    ? ` title="p(Increase)=${scores.p_increase.toFixed(3)} p(Stable)=${scores.p_stable.toFixed(3)} p(Decrease)=${scores.p_decrease.toFixed(3)}"`
    : "";
  return `<span class="${cls}" data-direction="${escapeHtml(direction)}"${probs}>${escapeHtml(direction)}</span>`;
}

export function staleBanner(seriesHash: string | null, forecastHash: string | null): string {
  if (!seriesHash || !forecastHash || seriesHash === forecastHash) return "";
  return (
    `<div class="banner stale" role="alert">Forecast manifest ${escapeHtml(forecastHash.slice(0, 12))} ` +
    `does not match the series view ${escapeHtml(seriesHash.slice(0, 12))}; retrain or refeaturize.</div>`
  );
}

export function errorBanner(status: number | null, detail: string | null): string {
  if (detail === null) return "";
  const code = status === null ? "" : `HTTP ${status}: `;
  return `<div class="banner error" role="alert">${escapeHtml(code + detail)}</div>`;
}

/** Series explorer: one chart per field with the forecast band appended. */
export function seriesExplorer(
  records: SeriesRecord[],
  fields: string[],
  forecast: ForecastResponse | null,
): string {
  const sections = fields.map((field) => {
    const history = records
      .map((record, i) => ({ record, i }))
      .filter(({ record }) => !record.missing && record.values && field in record.values)
      .map(({ record, i }) => ({ x: i, y: (record.values as Record<string, number>)[field] as number }));
    const target = forecast?.targets[field];
    const offset = records.length;
    const median = target
      ? target.steps.map((s, i) => ({ x: offset + i, y: s.quantiles["0.50"] ?? s.loc }))
      : [];
    const outer = target
      ? target.steps.map((s, i) => ({
          x: offset + i,
          lo: s.quantiles["0.05"] ?? s.loc,
          hi: s.quantiles["0.95"] ?? s.loc,
        }))
      : [];
    const inner = target
      ? target.steps.map((s, i) => ({
          x: offset + i,
          lo: s.quantiles["0.25"] ?? s.loc,
          hi: s.quantiles["0.75"] ?? s.loc,
        }))
      : [];
    const markers = target
      ? target.steps
          .map((s, i) => ({ x: offset + i, kind: s.direction }))
          .filter((m): m is { x: number; kind: "Increase" | "Decrease" } =>
            m.kind === "Increase" || m.kind === "Decrease",
          )
      : [];
    return (
      `<section class="series-field" data-field="${escapeHtml(field)}">` +
      `<h3>${escapeHtml(field)}</h3>` +
      renderChart({ history, median, outerBand: outer, innerBand: inner, markers }) +
      `</section>`
    );
  });
  return `<div class="series-explorer">${sections.join("")}</div>`;
}

export function eventEditor(
  drafts: DraftEvent[],
  categories: string[],
  stored: EventRecord[],
): string {
  const draftRows = drafts
    .map(
      (d, i) =>
        `<tr data-draft-index="${i}"><td>${escapeHtml(d.date)}</td><td>${escapeHtml(d.category)}</td>` +
        `<td>${d.impact} (${escapeHtml(IMPACT_MEANINGS[d.impact] ?? "?")})</td>` +
        `<td>${escapeHtml(d.label)}</td>` +
        `<td><button class="remove-draft" data-index="${i}">remove</button></td></tr>`,
    )
    .join("");
  const options = categories.map((c) => `<option value="${escapeHtml(c)}">${escapeHtml(c)}</option>`).join("");
  const storedRows = stored
    .slice(-8)
    .map(
      (e) =>
        `<tr><td>${escapeHtml(e.date)}</td><td>${escapeHtml(e.category)}</td>` +
        `<td>${e.impact}</td><td>${escapeHtml(e.label)}</td></tr>`,
    )
    .join("");
  return (
    `<div class="event-editor">` +
    `<form id="draft-event-form">` +
    `<input name="date" type="date" required/>` +
    `<select name="category">${options}</select>` +
    `<select name="impact">` +
    `<option value="1">1 (supports)</option><option value="2">2 (opposes)</option>` +
    `<option value="0">0 (neutral)</option><option value="-1">-1 (not related)</option>` +
    `</select>` +
    `<input name="label" type="text" placeholder="label"/>` +
    `<button type="submit">add hypothetical event</button>` +
    `</form>` +
    `<table class="drafts"><tbody>${draftRows}</tbody></table>` +
    `<details><summary>recent stored events</summary><table><tbody>${storedRows}</tbody></table></details>` +
    `</div>`
  );
}

function forecastPanel(title: string, name: string, target: TargetForecast): string {
  const rows = target.steps
    .map((s) => {
      const badge = directionBadge(s.direction, s.class_scores);
      const q05 = s.quantiles["0.05"];
      const q95 = s.quantiles["0.95"];
      const band = q05 !== undefined && q95 !== undefined ? `[${q05.toFixed(3)}, ${q95.toFixed(3)}]` : "";
      return (
        `<tr><td>+${s.step}</td><td>${escapeHtml(s.date)}</td>` +
        `<td>${s.loc.toFixed(3)}</td><td>${band}</td><td>${badge}</td></tr>`
      );
    })
    .join("");
  return (
    `<div class="forecast-panel" data-panel="${escapeHtml(title)}" data-target="${escapeHtml(name)}">` +
    `<h4>${escapeHtml(title)}</h4>` +
    `<table><thead><tr><th>step</th><th>date</th><th>loc</th><th>5-95%</th><th>direction</th></tr></thead>` +
    `<tbody>${rows}</tbody></table></div>`
  );
}

/** Baseline vs what-if, side by side per target. */
export function whatifComparison(
  baseline: ForecastResponse | null,
  whatif: ForecastResponse | null,
): string {
  if (!baseline) return `<div class="comparison empty">No forecast yet.</div>`;
  const targets = Object.keys(baseline.targets);
  const blocks = targets.map((name) => {
    const base = baseline.targets[name] as TargetForecast;
    const what = whatif?.targets[name];
    return (
      `<section class="comparison-target" data-target="${escapeHtml(name)}">` +
      `<h3>${escapeHtml(name)}</h3>` +
      `<div class="panels">` +
      forecastPanel("baseline", name, base) +
      (what ? forecastPanel("what-if", name, what) : "") +
      `</div></section>`
    );
  });
  return `<div class="comparison">${blocks.join("")}</div>`;
}

/** Replay grid: ground-truth arrow plus a check/cross per cell. */
export function replayGrid(cells: ReplayCell[]): string {
  const arrows: Record<string, string> = { Increase: "&#8593;", Decrease: "&#8595;", Stable: "&#8722;" };
  const byAnchor = new Map<string, ReplayCell[]>();
  for (const cell of cells) {
    const bucket = byAnchor.get(cell.anchor) ?? [];
    bucket.push(cell);
    byAnchor.set(cell.anchor, bucket);
  }
  const sections = [...byAnchor.entries()].map(([anchor, group]) => {
    const rows = group
      .map(
        (c) =>
          `<tr data-target="${escapeHtml(c.target)}"><td>${escapeHtml(c.target)}</td>` +
          `<td>${escapeHtml(c.platform)}</td>` +
          `<td class="gt">${arrows[c.truth] ?? "?"}</td>` +
          `<td class="${c.match ? "match" : "miss"}">${c.match ? "&#10003;" : "&#10007;"}</td></tr>`,
      )
      .join("");
    const pct = group.length ? (100 * group.filter((c) => c.match).length) / group.length : 0;
    return (
      `<section class="replay-anchor" data-anchor="${escapeHtml(anchor)}">` +
      `<h3>${escapeHtml(anchor)} <small>${pct.toFixed(1)}% matched</small></h3>` +
      `<table><thead><tr><th>target</th><th>platform</th><th>GT</th><th>model</th></tr></thead>` +
      `<tbody>${rows}</tbody></table></section>`
    );
  });
  return `<div class="replay-grid">${sections.join("")}</div>`;
}
