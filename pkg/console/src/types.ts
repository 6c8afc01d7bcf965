/** Payload shapes of the forecasting service API, mirrored field-for-field. */

export interface MovementConfig {
  id: string;
  token: string;
  platforms: string[];
  taxonomy: Record<string, string[]>;
  keywords: string[];
  layer_thresholds: number[];
  percentile_cut: number;
}

export interface SeriesRecord {
  date: string;
  missing: boolean;
  values: Record<string, number> | null;
}

export interface SeriesResponse {
  manifest_hash: string;
  records: SeriesRecord[];
}

export interface EventRecord {
  date: string;
  category: string;
  impact: number;
  magnitude: number;
  label: string;
}

export type Direction = "Increase" | "Stable" | "Decrease" | "Unscored";

export interface ClassScores {
  p_increase: number;
  p_stable: number;
  p_decrease: number;
  degenerate_band: boolean;
}

export interface ForecastStep {
  step: number;
  date: string;
  loc: number;
  scale: number;
  df: number;
  quantiles: Record<string, number>;
  class_scores?: ClassScores;
  direction: Direction;
  /** Band check of the forecast median; the primary label is `direction`. */
  direction_by_median?: Direction;
}

export interface TargetForecast {
  steps: ForecastStep[];
  band: { mu: number; sigma: number } | null;
}

export interface ForecastResponse {
  anchor_date: string;
  horizon: number;
  manifest_hash: string;
  model_hash: string;
  targets: Record<string, TargetForecast>;
  hypothetical_events: EventRecord[];
}

export interface ReplayCell {
  anchor: string;
  target: string;
  platform: string;
  truth: Direction;
  forecast: Direction;
  match: boolean;
}

export interface DraftEvent {
  date: string;
  category: string;
  impact: number;
  magnitude: number;
  label: string;
}

export const IMPACT_LEVELS = [-1, 0, 1, 2] as const;

export const IMPACT_MEANINGS: Record<number, string> = {
  [-1]: "not related",
  0: "neutral",
  1: "supports",
  2: "opposes",
};

export const QUANTILE_KEYS = ["0.05", "0.25", "0.50", "0.75", "0.95"] as const;
