/** Browser bootstrap: wires the state, API client, and views to the page.
 *
 * All model math stays on the service; this file only routes data. The
 * current selection (movement, anchor, horizon) lives in the URL hash so
 * views are shareable across reloads.
 */

import { ApiClient, ApiFailure } from "./api.js";
import {
  addDraftEvent,
  decodeSelection,
  encodeSelection,
  initialState,
  isStale,
  removeDraftEvent,
  type ConsoleState,
} from "./state.js";
import {
  errorBanner,
  eventEditor,
  replayGrid,
  seriesExplorer,
  staleBanner,
  whatifComparison,
} from "./views.js";
import type { DraftEvent, EventRecord, ReplayCell, SeriesRecord } from "./types.js";

const api = new ApiClient("");
let state: ConsoleState = initialState();
let records: SeriesRecord[] = [];
let storedEvents: EventRecord[] = [];
let lastStatus: number | null = null;

const CHART_FIELDS = ["volume_raw[reddit]", "volume_raw[news]", "emotion_mean[anger]", "emotion_mean[joy]"];

function element(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node;
}

function render(): void {
  const movement = state.movements.find((m) => m.id === state.selectedMovement) ?? null;
  element("banners").innerHTML =
    errorBanner(lastStatus, state.lastError) +
    staleBanner(state.seriesManifestHash, state.baselineForecast?.manifest_hash ?? null);
  element("series").innerHTML = seriesExplorer(records, CHART_FIELDS, state.baselineForecast);
  element("editor").innerHTML = eventEditor(
    state.draftEvents,
    movement ? Object.keys(movement.taxonomy) : [],
    storedEvents,
  );
  element("comparison").innerHTML = whatifComparison(state.baselineForecast, state.whatifForecast);
  bindEditor();
}

function bindEditor(): void {
  const form = document.getElementById("draft-event-form") as HTMLFormElement | null;
  form?.addEventListener("submit", (event) => {
    event.preventDefault();
    const data = new FormData(form);
    const draft: DraftEvent = {
      date: String(data.get("date") ?? ""),
      category: String(data.get("category") ?? ""),
      impact: Number.parseInt(String(data.get("impact") ?? "1"), 10),
      magnitude: 1.0,
      label: String(data.get("label") ?? ""),
    };
    state = addDraftEvent(state, draft);
    lastStatus = null;
    render();
  });
  document.querySelectorAll("button.remove-draft").forEach((button) => {
    button.addEventListener("click", () => {
      const index = Number.parseInt((button as HTMLElement).dataset.index ?? "-1", 10);
      state = removeDraftEvent(state, index);
      render();
    });
  });
}

async function refreshSeries(): Promise<void> {
  if (!state.selectedMovement) return;
  const response = await api.series(state.selectedMovement);
  records = response.records;
  storedEvents = (await api.events(state.selectedMovement)).events;
  state = { ...state, seriesManifestHash: response.manifest_hash };
}

async function runForecasts(): Promise<void> {
  if (!state.selectedMovement || !state.anchorDate) return;
  try {
    const [baseline, whatif] = await Promise.all([
      api.forecast(state.selectedMovement, state.anchorDate, [], state.horizon ?? undefined),
      state.draftEvents.length
        ? api.forecast(state.selectedMovement, state.anchorDate, state.draftEvents, state.horizon ?? undefined)
        : Promise.resolve(null),
    ]);
    state = {
      ...state,
      baselineForecast: baseline,
      whatifForecast: whatif ?? baseline,
      lastError: null,
    };
    lastStatus = null;
  } catch (failure) {
    if (failure instanceof ApiFailure) {
      lastStatus = failure.status;
      state = { ...state, lastError: failure.detail };
    } else {
      lastStatus = null;
      state = { ...state, lastError: String(failure) };
    }
  }
  render();
}

async function boot(): Promise<void> {
  const selection = decodeSelection(window.location.hash);
  const movements = (await api.movements()).movements;
  state = {
    ...initialState(),
    movements,
    selectedMovement: selection.movement ?? movements[0]?.id ?? null,
    anchorDate: selection.anchor,
    horizon: selection.horizon,
  };
  await refreshSeries();
  render();

  element("anchor-form").addEventListener("submit", (event) => {
    event.preventDefault();
    const anchor = (document.getElementById("anchor-input") as HTMLInputElement).value;
    const horizonRaw = (document.getElementById("horizon-input") as HTMLInputElement).value;
    state = {
      ...state,
      anchorDate: anchor || null,
      horizon: horizonRaw ? Number.parseInt(horizonRaw, 10) : null,
    };
    window.location.hash = encodeSelection({
      movement: state.selectedMovement,
      anchor: state.anchorDate,
      horizon: state.horizon,
    });
    void runForecasts();
  });

  element("replay-load").addEventListener("click", async () => {
    const response = await fetch("replay.json");
    if (response.ok) {
      const payload = (await response.json()) as { cells: ReplayCell[] };
      element("replay").innerHTML = replayGrid(payload.cells);
    }
  });
}

if (typeof document !== "undefined" && document.getElementById("series")) {
  void boot();
}

export { render, runForecasts, boot, isStale };
