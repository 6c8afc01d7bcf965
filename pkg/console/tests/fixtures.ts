/** Shared fixtures: a fake service with deterministic forecast payloads. */

import type {
  DraftEvent,
  ForecastResponse,
  ForecastStep,
  MovementConfig,
} from "../src/types.js";

export const MOVEMENT: MovementConfig = {
  id: "equalvoice",
  token: "#EqualVoice",
  platforms: ["news", "reddit"],
  taxonomy: {
    "Gender Equality": ["gender equality"],
    Violence: ["domestic violence"],
    "Political Change": ["election reform"],
  },
  keywords: ["equalpay"],
  layer_thresholds: [0.3, 0.2, 0.1],
  percentile_cut: 1.0,
};

function step(i: number, loc: number, direction: ForecastStep["direction"]): ForecastStep {
  return {
    step: i,
    date: `2024-11-2${i}`,
    loc,
    scale: 0.05,
    df: 4.2,
    quantiles: {
      "0.05": loc - 0.2,
      "0.25": loc - 0.08,
      "0.50": loc,
      "0.75": loc + 0.08,
      "0.95": loc + 0.2,
    },
    class_scores: {
      p_increase: direction === "Increase" ? 0.8 : 0.05,
      p_stable: direction === "Stable" ? 0.9 : 0.15,
      p_decrease: direction === "Decrease" ? 0.8 : 0.05,
      degenerate_band: false,
    },
    direction,
  };
}

export function forecastPayload(
  hypothetical: DraftEvent[],
  manifestHash = "hash-series-1",
): ForecastResponse {
  // one target whose direction flips on the hypothetical event day
  const boosted = hypothetical.length > 0;
  return {
    anchor_date: "2024-11-20",
    horizon: 3,
    manifest_hash: manifestHash,
    model_hash: "hash-model-1",
    targets: {
      "emotion_mean[anger]": {
        steps: [
          step(1, 0.12, "Stable"),
          step(2, boosted ? 0.31 : 0.12, boosted ? "Increase" : "Stable"),
          step(3, 0.12, "Stable"),
        ],
        band: { mu: 0.12, sigma: 0.02 },
      },
    },
    hypothetical_events: hypothetical.map((h) => ({ ...h })),
  };
}

/** fetch stub keyed by "METHOD path"; bodies matter only for /forecast. */
export function fakeFetch(manifestHash = "hash-series-1") {
  const calls: { url: string; body?: unknown }[] = [];
  const impl = async (url: string, init?: RequestInit): Promise<Response> => {
    calls.push({ url, body: init?.body ? JSON.parse(String(init.body)) : undefined });
    const respond = (payload: unknown, status = 200) =>
      new Response(JSON.stringify(payload), { status });
    if (url.endsWith("/movements")) {
      return respond({ movements: [MOVEMENT] });
    }
    if (url.includes("/movements/") && !url.includes(`/movements/${MOVEMENT.id}/`)) {
      return respond({ detail: "unknown movement" }, 404);
    }
    if (url.includes("/series")) {
      return respond({
        manifest_hash: manifestHash,
        records: [
          { date: "2024-11-18", missing: false, values: { "emotion_mean[anger]": 0.11 } },
          { date: "2024-11-19", missing: false, values: { "emotion_mean[anger]": 0.13 } },
          { date: "2024-11-20", missing: false, values: { "emotion_mean[anger]": 0.12 } },
        ],
      });
    }
    if (url.endsWith("/events") && init?.method !== "POST") {
      return respond({ events: [] });
    }
    if (url.endsWith("/forecast")) {
      const body = JSON.parse(String(init?.body)) as { hypothetical_events: DraftEvent[] };
      const bad = body.hypothetical_events.find((e) => ![-1, 0, 1, 2].includes(e.impact));
      if (bad) {
        return respond({ detail: `impact must be one of (-1, 0, 1, 2), got ${bad.impact}` }, 422);
      }
      return respond(forecastPayload(body.hypothetical_events, manifestHash));
    }
    return respond({ detail: `unknown movement` }, 404);
  };
  return { impl, calls };
}
