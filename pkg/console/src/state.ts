/** Console state, draft-event validation, and shareable URL selection.
 *
 * Draft events validate against the movement taxonomy and the impact enum
 * before submission; invalid drafts never reach the service. Selection
 * (movement, anchor, horizon) round-trips through the URL hash so a view
 * is shareable; everything else resets on reload.
 */

import type { DraftEvent, ForecastResponse, MovementConfig } from "./types.js";
import { IMPACT_LEVELS } from "./types.js";

export interface ConsoleState {
  movements: MovementConfig[];
  selectedMovement: string | null;
  anchorDate: string | null;
  horizon: number | null;
  draftEvents: DraftEvent[];
  baselineForecast: ForecastResponse | null;
  whatifForecast: ForecastResponse | null;
  seriesManifestHash: string | null;
  lastError: string | null;
}

export function initialState(): ConsoleState {
  return {
    movements: [],
    selectedMovement: null,
    anchorDate: null,
    horizon: null,
    draftEvents: [],
    baselineForecast: null,
    whatifForecast: null,
    seriesManifestHash: null,
    lastError: null,
  };
}

const ISO_DATE = /^\d{4}-\d{2}-\d{2}$/;

export function validateDraftEvent(
  draft: DraftEvent,
  movement: MovementConfig | null,
  anchorDate: string | null,
  horizon: number | null,
): string[] {
  const problems: string[] = [];
  if (!ISO_DATE.test(draft.date)) {
    problems.push(`event date must be ISO formatted (got "${draft.date}")`);
  }
  if (!IMPACT_LEVELS.includes(draft.impact as (typeof IMPACT_LEVELS)[number])) {
    problems.push(`impact must be one of ${IMPACT_LEVELS.join(", ")} (got ${draft.impact})`);
  }
  if (movement && !(draft.category in movement.taxonomy)) {
    problems.push(`unknown category "${draft.category}"`);
  }
  if (!(draft.magnitude > 0)) {
    problems.push(`magnitude must be positive (got ${draft.magnitude})`);
  }
  if (anchorDate && ISO_DATE.test(draft.date) && draft.date <= anchorDate) {
    problems.push(`event date ${draft.date} must fall after the anchor ${anchorDate}`);
  }
  if (anchorDate && horizon && ISO_DATE.test(draft.date)) {
    const limit = addDays(anchorDate, horizon);
    if (draft.date > limit) {
      problems.push(`event date ${draft.date} is beyond the horizon (${limit})`);
    }
  }
  return problems;
}

export function addDays(isoDate: string, days: number): string {
  const ms = Date.parse(`${isoDate}T00:00:00Z`) + days * 86_400_000;
  return new Date(ms).toISOString().slice(0, 10);
}

export function addDraftEvent(state: ConsoleState, draft: DraftEvent): ConsoleState {
  const movement = state.movements.find((m) => m.id === state.selectedMovement) ?? null;
  const problems = validateDraftEvent(draft, movement, state.anchorDate, state.horizon);
  if (problems.length) {
    return { ...state, lastError: problems.join("; ") };
  }
  return { ...state, draftEvents: [...state.draftEvents, draft], lastError: null };
}

export function removeDraftEvent(state: ConsoleState, index: number): ConsoleState {
  return { ...state, draftEvents: state.draftEvents.filter((_, i) => i !== index) };
}

/** Forecasts are rendered only when their manifest matches the series view. */
export function isStale(state: ConsoleState, forecast: ForecastResponse | null): boolean {
  if (!forecast || !state.seriesManifestHash) return false;
  return forecast.manifest_hash !== state.seriesManifestHash;
}

export interface Selection {
  movement: string | null;
  anchor: string | null;
  horizon: number | null;
}

export function encodeSelection(selection: Selection): string {
  const params = new URLSearchParams();
  if (selection.movement) params.set("movement", selection.movement);
  if (selection.anchor) params.set("anchor", selection.anchor);
  if (selection.horizon) params.set("horizon", String(selection.horizon));
  return params.toString();
}

export function decodeSelection(hash: string): Selection {
  const params = new URLSearchParams(hash.replace(/^#/, ""));
  const horizonRaw = params.get("horizon");
  const horizon = horizonRaw === null ? null : Number.parseInt(horizonRaw, 10);
  return {
    movement: params.get("movement"),
    anchor: params.get("anchor"),
    horizon: horizon !== null && Number.isFinite(horizon) && horizon > 0 ? horizon : null,
  };
}
