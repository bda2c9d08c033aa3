/**
 * Thin typed client for the backend HTTP API.  Request bodies are RawJson
 * trees so that any fragment lifted from a previous response (e.g. the
 * closed-loop quasipolynomial fed back into /api/roots) keeps its number
 * tokens verbatim.  All numerics happen on the server; this module only
 * moves JSON.
 */

import { parseRaw, RawJson, stringifyRaw } from "./rawjson.js";

export interface FetchResponse {
  status: number;
  text(): Promise<string>;
}

export type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string }
) => Promise<FetchResponse>;

export class ApiError extends Error {
  constructor(
    message: string,
    public readonly status: number,
    public readonly code: number | null
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init)
  ) {}

  async health(): Promise<RawJson> {
    const res = await this.fetchFn(this.baseUrl + "/api/health");
    return this.decode(res);
  }

  async post(path: string, body: RawJson): Promise<RawJson> {
    const res = await this.fetchFn(this.baseUrl + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: stringifyRaw(body),
    });
    return this.decode(res);
  }

  synthesize(body: RawJson): Promise<RawJson> {
    return this.post("/api/synthesize", body);
  }

  roots(body: RawJson): Promise<RawJson> {
    return this.post("/api/roots", body);
  }

  simulate(body: RawJson): Promise<RawJson> {
    return this.post("/api/simulate", body);
  }

  designSecondOrder(body: RawJson): Promise<RawJson> {
    return this.post("/api/design/second-order", body);
  }

  designWindTunnel(body: RawJson): Promise<RawJson> {
    return this.post("/api/design/wind-tunnel", body);
  }

  private async decode(res: FetchResponse): Promise<RawJson> {
    const text = await res.text();
    if (res.status >= 400) {
      let message = text;
      let code: number | null = null;
      try {
        const parsed = JSON.parse(text) as { error?: string; code?: number };
        if (typeof parsed.error === "string") message = parsed.error;
        if (typeof parsed.code === "number") code = parsed.code;
      } catch {
        // non-JSON error body: report it verbatim
      }
      throw new ApiError(message, res.status, code);
    }
    return parseRaw(text);
  }
}
