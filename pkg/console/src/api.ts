/** Service client: thin fetch wrappers with in-flight request deduplication.
 *
 * Identical concurrent requests (same method, path, and body) share one
 * promise; the entry clears once the response settles. API failures throw
 * ApiFailure carrying the status code and the service's verbatim detail
 * text so views can surface them unchanged.
 */

import type {
  DraftEvent,
  EventRecord,
  ForecastResponse,
  MovementConfig,
  SeriesResponse,
} from "./types.js";

export class ApiFailure extends Error {
  constructor(
    public status: number,
    public detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private inflight = new Map<string, Promise<unknown>>();

  constructor(
    private baseUrl: string,
    private fetchImpl: FetchLike = fetch,
  ) {}

  private request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const key = `${method} ${path} ${body === undefined ? "" : JSON.stringify(body)}`;
    const existing = this.inflight.get(key);
    if (existing) return existing as Promise<T>;
    const promise = this.fetchImpl(`${this.baseUrl}${path}`, {
      method,
      headers: body === undefined ? undefined : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    })
      .then(async (response) => {
        const text = await response.text();
        if (!response.ok) {
          let detail = text;
          try {
            detail = JSON.parse(text).detail ?? text;
          } catch {
            /* non-JSON error body: surface raw text */
          }
          throw new ApiFailure(response.status, detail);
        }
        return JSON.parse(text) as T;
      })
      .finally(() => {
        this.inflight.delete(key);
      });
    this.inflight.set(key, promise);
    return promise;
  }

  movements(): Promise<{ movements: MovementConfig[] }> {
    return this.request("GET", "/movements");
  }

  series(movementId: string, params: { from?: string; to?: string; fields?: string[] } = {}): Promise<SeriesResponse> {
    const query = new URLSearchParams();
    if (params.from) query.set("from", params.from);
    if (params.to) query.set("to", params.to);
    if (params.fields?.length) query.set("fields", params.fields.join(","));
    const suffix = query.toString() ? `?${query}` : "";
    return this.request("GET", `/movements/${movementId}/series${suffix}`);
  }

  events(movementId: string): Promise<{ events: EventRecord[] }> {
    return this.request("GET", `/movements/${movementId}/events`);
  }

  appendEvent(movementId: string, event: DraftEvent): Promise<{ appended: EventRecord; total: number }> {
    return this.request("POST", `/movements/${movementId}/events`, event);
  }

  forecast(
    movementId: string,
    anchorDate: string,
    hypotheticalEvents: DraftEvent[],
    horizon?: number,
  ): Promise<ForecastResponse> {
    return this.request("POST", `/movements/${movementId}/forecast`, {
      anchor_date: anchorDate,
      horizon: horizon ?? null,
      hypothetical_events: hypotheticalEvents,
    });
  }

  evaluation(movementId: string, delta?: number): Promise<Record<string, unknown>> {
    const suffix = delta === undefined ? "" : `?delta=${delta}`;
    return this.request("GET", `/movements/${movementId}/evaluation${suffix}`);
  }
}
