import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { FetchLike } from "../src/api.js";

const HERE = dirname(fileURLToPath(import.meta.url));

export function fixture(scenario: string, name: string): string {
  return readFileSync(join(HERE, "fixtures", scenario, name), "utf8");
}

export interface RecordedRequest {
  url: string;
  body: string;
}

export interface MockRoute {
  /** response body; a function receives the request body */
  reply: string | ((body: string) => string);
  status?: number;
  /** per-call artificial latency in ms (cycled) */
  latencyMs?: number[];
}

export interface MockFetch {
  fetchFn: FetchLike;
  requests: RecordedRequest[];
}

export function makeMockFetch(routes: Record<string, MockRoute>): MockFetch {
  const requests: RecordedRequest[] = [];
  const callCounts = new Map<string, number>();
  const fetchFn: FetchLike = async (url, init) => {
    const path = url.replace(/^https?:\/\/[^/]+/, "");
    const route = routes[path];
    if (route === undefined) {
      return { status: 404, text: async () => `{"error":"unknown path ${path}"}` };
    }
    const body = init?.body ?? "";
    requests.push({ url: path, body });
    const k = callCounts.get(path) ?? 0;
    callCounts.set(path, k + 1);
    if (route.latencyMs !== undefined && route.latencyMs.length > 0) {
      const ms = route.latencyMs[k % route.latencyMs.length];
      await new Promise((resolve) => setTimeout(resolve, ms));
    }
    const text = typeof route.reply === "function" ? route.reply(body) : route.reply;
    return { status: route.status ?? 200, text: async () => text };
  };
  return { fetchFn, requests };
}

/** Deterministic PRNG for the property tests (mulberry32). */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function shuffled<T>(arr: T[], rand: () => number): T[] {
  const out = arr.slice();
  for (let i = out.length - 1; i > 0; i -= 1) {
    const j = Math.floor(rand() * (i + 1));
    [out[i], out[j]] = [out[j], out[i]];
  }
  return out;
}
