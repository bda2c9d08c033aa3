/**
 * Design session state machine.
 *
 * A parameter edit schedules (debounced, 250 ms) a refresh chain
 * synthesize -> roots -> simulate against the backend.  Each chain carries a
 * monotonically increasing sequence number; a chain may only commit its
 * responses if no newer chain has committed first, so out-of-order responses
 * can never overwrite fresher state.  Every number held here is a raw JSON
 * token from the server; the session performs no numerics beyond request
 * plumbing (view rectangle and simulation horizon).
 */

import { ApiClient, ApiError } from "./api.js";
import {
  get,
  numToken,
  RawJson,
  rawArray,
  rawFromNumber,
  rawNumber,
  rawObject,
  rawString,
  toNumber,
} from "./rawjson.js";

export type Mode = "raw" | "second_order" | "wind_tunnel";

export interface ViewRect {
  reMin: number;
  reMax: number;
  imMin: number;
  imMax: number;
}

export interface Timers {
  set(fn: () => void, ms: number): unknown;
  clear(handle: unknown): void;
}

const REAL_TIMERS: Timers = {
  set: (fn, ms) => setTimeout(fn, ms),
  clear: (h) => clearTimeout(h as Parameters<typeof clearTimeout>[0]),
};

export interface SessionOptions {
  api: ApiClient;
  debounceMs?: number;
  timers?: Timers;
  /** called after each successful commit */
  onUpdate?: (session: DesignSession) => void;
  /** non-blocking error surface (toast) */
  onToast?: (message: string) => void;
}

interface FieldRule {
  check: (x: number) => boolean;
  message: string;
}

const FIELD_RULES: Record<Mode, Record<string, FieldRule>> = {
  raw: {
    n: { check: (x) => Number.isInteger(x) && x >= 1, message: "n must be a positive integer" },
    tau: { check: (x) => x > 0, message: "tau must be > 0" },
    s0: { check: (x) => Number.isFinite(x), message: "s0 must be a finite real" },
  },
  second_order: {
    zeta: { check: (x) => x > 0, message: "zeta must be > 0" },
    omega: { check: (x) => x > 0, message: "omega must be > 0" },
    tau: { check: (x) => x > 0, message: "tau must be > 0" },
  },
  wind_tunnel: {
    kappa: { check: (x) => x > 0, message: "kappa must be > 0" },
    k_gain: { check: (x) => x < 0, message: "k_gain must be < 0" },
    tau0: { check: (x) => x > 0, message: "tau0 must be > 0" },
    tau1: { check: (x) => x > 0, message: "tau1 must be > 0" },
  },
};

const NUMBER_TOKEN = /^-?(?:0|[1-9]\d*)(?:\.\d+)?(?:[eE][+-]?\d+)?$/;

export function defaultView(s0: number, tau: number): ViewRect {
  return {
    reMin: s0 - 20 / tau,
    reMax: s0 + 5 / tau,
    imMin: -40 / tau,
    imMax: 40 / tau,
  };
}

export class DesignSession {
  mode: Mode = "raw";
  readonly params = new Map<string, string>();
  readonly fieldErrors = new Map<string, string>();

  lastGains: RawJson | null = null;
  lastSpectrum: RawJson | null = null;
  lastTrace: RawJson | null = null;
  /** view rectangle; null means "derive the default from s0 and tau" */
  view: ViewRect | null = null;

  /** sequence number of the newest committed chain */
  applied = 0;
  private seq = 0;
  private readonly debounceMs: number;
  private readonly timers: Timers;
  private pending: unknown = null;
  private inflight: Promise<void> = Promise.resolve();

  constructor(private readonly opts: SessionOptions) {
    this.debounceMs = opts.debounceMs ?? 250;
    this.timers = opts.timers ?? REAL_TIMERS;
  }

  setMode(mode: Mode): void {
    if (mode !== this.mode) {
      this.mode = mode;
      this.params.clear();
      this.fieldErrors.clear();
    }
  }

  /** Validate and store a field edit; schedules a debounced refresh. */
  onParameterChange(field: string, value: string): void {
    const rule = FIELD_RULES[this.mode][field];
    if (rule === undefined) {
      this.fieldErrors.set(field, `unknown field ${field} in ${this.mode} mode`);
      return;
    }
    const x = Number(value.trim());
    if (value.trim() === "" || Number.isNaN(x) || !rule.check(x)) {
      this.fieldErrors.set(field, rule.message);
      return;
    }
    this.fieldErrors.delete(field);
    // keep the user's token when it is already a valid JSON number
    this.params.set(field, NUMBER_TOKEN.test(value.trim()) ? value.trim() : String(x));
    this.schedule();
  }

  /** Pan the spectrum view; schedules a refresh with the new rectangle. */
  pan(dRe: number, dIm: number, s0: number, tau: number): void {
    const base = this.view ?? defaultView(s0, tau);
    this.view = {
      reMin: base.reMin + dRe,
      reMax: base.reMax + dRe,
      imMin: base.imMin + dIm,
      imMax: base.imMax + dIm,
    };
    this.schedule();
  }

  /** True once every field of the current mode has a valid value. */
  complete(): boolean {
    return Object.keys(FIELD_RULES[this.mode]).every((f) => this.params.has(f));
  }

  private schedule(): void {
    if (!this.complete()) return;
    if (this.pending !== null) this.timers.clear(this.pending);
    this.pending = this.timers.set(() => {
      this.pending = null;
      this.inflight = this.run(++this.seq);
    }, this.debounceMs);
  }

  /** Run a refresh immediately, bypassing the debounce timer. */
  refreshNow(): Promise<void> {
    if (this.pending !== null) {
      this.timers.clear(this.pending);
      this.pending = null;
    }
    this.inflight = this.run(++this.seq);
    return this.inflight;
  }

  /** Resolves after the most recently started chain settles. */
  settled(): Promise<void> {
    return this.inflight;
  }

  private param(field: string): RawJson {
    const token = this.params.get(field);
    if (token === undefined) throw new RangeError(`missing parameter ${field}`);
    return rawNumber(token);
  }

  private async fetchGains(): Promise<RawJson> {
    const api = this.opts.api;
    switch (this.mode) {
      case "raw":
        return api.synthesize(
          rawObject([
            ["n", this.param("n")],
            ["tau", this.param("tau")],
            ["s0", this.param("s0")],
          ])
        );
      case "second_order":
        return api.designSecondOrder(
          rawObject([
            ["zeta", this.param("zeta")],
            ["omega", this.param("omega")],
            ["tau", this.param("tau")],
          ])
        );
      case "wind_tunnel":
        return api.designWindTunnel(
          rawObject([
            ["kappa", this.param("kappa")],
            ["k_gain", this.param("k_gain")],
            ["tau0", this.param("tau0")],
            ["tau1", this.param("tau1")],
          ])
        );
    }
  }

  /** The quasipolynomial fragment of a gains response, tokens intact. */
  static closedLoopOf(mode: Mode, gains: RawJson): RawJson {
    if (mode === "raw") {
      return rawObject([
        ["n", get(gains, "n")],
        ["tau", get(gains, "tau")],
        ["a", get(gains, "a")],
        ["alpha", get(gains, "alpha")],
      ]);
    }
    return get(gains, "closed_loop");
  }

  private async run(seq: number): Promise<void> {
    try {
      const gains = await this.fetchGains();
      const qp = DesignSession.closedLoopOf(this.mode, gains);
      const s0 = toNumber(get(gains, "s0"));
      const tau = toNumber(get(qp, "tau"));

      const view = this.view ?? defaultView(s0, tau);
      const spectrum = await this.opts.api.roots(
        rawObject([
          ["qp", qp],
          [
            "rect",
            rawObject([
              ["re_min", rawFromNumber(view.reMin)],
              ["re_max", rawFromNumber(view.reMax)],
              ["im_min", rawFromNumber(view.imMin)],
              ["im_max", rawFromNumber(view.imMax)],
            ]),
          ],
        ])
      );

      const trace = await this.opts.api.simulate(
        rawObject([["spec", simulationSpec(qp, s0)]])
      );

      if (seq > this.applied) {
        this.applied = seq;
        this.lastGains = gains;
        this.lastSpectrum = spectrum;
        this.lastTrace = trace;
        this.opts.onUpdate?.(this);
      }
    } catch (err) {
      if (seq > this.applied) {
        const msg =
          err instanceof ApiError
            ? `server error${err.code !== null ? ` (code ${err.code})` : ""}: ${err.message}`
            : `request failed: ${String(err)}`;
        this.opts.onToast?.(msg);
      }
    }
  }
}

/**
 * Build a SimulationSpec request body: unit deviation on the first state,
 * horizon 4/|s0| (ten decades of the dominant mode), 200 output samples,
 * and an RK step dividing the delay at least 20 times.
 */
export function simulationSpec(qp: RawJson, s0: number): RawJson {
  const n = toNumber(get(qp, "n"));
  const tau = toNumber(get(qp, "tau"));
  const tEnd = s0 !== 0 ? 4 / Math.abs(s0) : 10;
  const dt = tEnd / 200;
  // +1 keeps rk_dt strictly below dt even when tau/dt rounds down
  const rkDt = tau / Math.max(20, Math.ceil(tau / dt) + 1);
  const history: RawJson[] = [];
  for (let i = 0; i < n; i += 1) {
    history.push(rawArray([rawFromNumber(i === 0 ? 1 : 0)]));
  }
  return rawObject([
    ["qp", qp],
    ["history", rawArray(history)],
    ["t_end", rawFromNumber(tEnd)],
    ["dt", rawFromNumber(dt)],
    ["rk_dt", rawFromNumber(rkDt)],
  ]);
}

/** Human-readable chain description for error toasts and tests. */
export function describeChain(mode: Mode): string[] {
  const first =
    mode === "raw"
      ? "/api/synthesize"
      : mode === "second_order"
        ? "/api/design/second-order"
        : "/api/design/wind-tunnel";
  return [first, "/api/roots", "/api/simulate"];
}

export { numToken, rawString };
