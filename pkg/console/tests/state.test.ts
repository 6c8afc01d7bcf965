import { describe, expect, it } from "vitest";

import {
  addDays,
  addDraftEvent,
  decodeSelection,
  encodeSelection,
  initialState,
  isStale,
  validateDraftEvent,
} from "../src/state.js";
import type { DraftEvent } from "../src/types.js";
import { MOVEMENT, forecastPayload } from "./fixtures.js";

function draft(overrides: Partial<DraftEvent> = {}): DraftEvent {
  return {
    date: "2024-11-22",
    category: "Violence",
    impact: 2,
    magnitude: 1,
    label: "",
    ...overrides,
  };
}

describe("draft event validation", () => {
  it("accepts a valid draft", () => {
    expect(validateDraftEvent(draft(), MOVEMENT, "2024-11-20", 7)).toEqual([]);
  });

  it("blocks an out-of-enum impact client-side", () => {
    const problems = validateDraftEvent(draft({ impact: 9 }), MOVEMENT, "2024-11-20", 7);
    expect(problems.some((p) => p.includes("impact"))).toBe(true);
  });

  it("blocks unknown categories", () => {
    const problems = validateDraftEvent(draft({ category: "Sports" }), MOVEMENT, "2024-11-20", 7);
    expect(problems.some((p) => p.includes("category") || p.includes("Sports"))).toBe(true);
  });

  it("blocks events at or before the anchor", () => {
    expect(validateDraftEvent(draft({ date: "2024-11-20" }), MOVEMENT, "2024-11-20", 7)).not.toEqual([]);
    expect(validateDraftEvent(draft({ date: "2024-11-19" }), MOVEMENT, "2024-11-20", 7)).not.toEqual([]);
  });

  it("blocks events beyond the horizon", () => {
    expect(validateDraftEvent(draft({ date: "2024-11-28" }), MOVEMENT, "2024-11-20", 7)).not.toEqual([]);
    expect(validateDraftEvent(draft({ date: "2024-11-27" }), MOVEMENT, "2024-11-20", 7)).toEqual([]);
  });

  it("blocks malformed dates and non-positive magnitudes", () => {
    expect(validateDraftEvent(draft({ date: "Nov 22" }), MOVEMENT, null, null)).not.toEqual([]);
    expect(validateDraftEvent(draft({ magnitude: 0 }), MOVEMENT, null, null)).not.toEqual([]);
  });
});

describe("state reducers", () => {
  it("addDraftEvent stores valid drafts and clears the error", () => {
    const state = {
      ...initialState(),
      movements: [MOVEMENT],
      selectedMovement: MOVEMENT.id,
      anchorDate: "2024-11-20",
      horizon: 7,
      lastError: "old",
    };
    const next = addDraftEvent(state, draft());
    expect(next.draftEvents).toHaveLength(1);
    expect(next.lastError).toBeNull();
  });

  it("addDraftEvent rejects invalid drafts without mutating the list", () => {
    const state = {
      ...initialState(),
      movements: [MOVEMENT],
      selectedMovement: MOVEMENT.id,
      anchorDate: "2024-11-20",
      horizon: 7,
    };
    const next = addDraftEvent(state, draft({ impact: 5 }));
    expect(next.draftEvents).toHaveLength(0);
    expect(next.lastError).toContain("impact");
  });
});

describe("stale-hash detection", () => {
  it("flags a forecast whose manifest differs from the series view", () => {
    const state = { ...initialState(), seriesManifestHash: "hash-series-1" };
    expect(isStale(state, forecastPayload([], "hash-series-1"))).toBe(false);
    expect(isStale(state, forecastPayload([], "other-hash"))).toBe(true);
  });
});

describe("shareable selection", () => {
  it("URL round trip preserves movement, anchor, and horizon", () => {
    const selection = { movement: "equalvoice", anchor: "2024-11-20", horizon: 5 };
    expect(decodeSelection(`#${encodeSelection(selection)}`)).toEqual(selection);
  });

  it("tolerates missing and malformed parts", () => {
    expect(decodeSelection("")).toEqual({ movement: null, anchor: null, horizon: null });
    expect(decodeSelection("#horizon=banana").horizon).toBeNull();
  });
});

describe("date arithmetic", () => {
  it("addDays crosses month boundaries", () => {
    expect(addDays("2024-11-28", 7)).toBe("2024-12-05");
  });
});
