/**
 * Golden round-trip: drive a DesignSession through each bundled study with
 * the server mocked by fixture files captured verbatim from the backend CLI
 * (`scripts/generate_fixtures.py`).  Every number the panels render must be
 * byte-for-byte a token of the corresponding CLI JSON document, proving the
 * UI performs no local numerics on displayed values.
 */

import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { renderGains, renderSpectrum, renderTrace } from "../src/render.js";
import { get, items, numToken, parseRaw, stringifyRaw } from "../src/rawjson.js";
import { DesignSession, Mode, Timers } from "../src/session.js";
import { collectByClass, textOf, VNode } from "../src/vdom.js";
import { fixture, makeMockFetch } from "./helpers.js";

const IMMEDIATE: Timers = { set: (fn) => (fn(), 0), clear: () => {} };

interface Study {
  scenario: string;
  mode: Mode;
  designPath: string;
  params: [string, string][];
}

const STUDIES: Study[] = [
  {
    scenario: "second_order_velocity_delay",
    mode: "second_order",
    designPath: "/api/design/second-order",
    params: [
      ["zeta", "0.2"],
      ["omega", "6"],
      ["tau", "0.5"],
    ],
  },
  {
    scenario: "wind_tunnel_row1",
    mode: "wind_tunnel",
    designPath: "/api/design/wind-tunnel",
    params: [
      ["kappa", "1.964"],
      ["k_gain", "-0.67036"],
      ["tau0", "0.33"],
      ["tau1", "0.33"],
    ],
  },
  {
    scenario: "wind_tunnel_row2",
    mode: "wind_tunnel",
    designPath: "/api/design/wind-tunnel",
    params: [
      ["kappa", "1.964"],
      ["k_gain", "-0.67036"],
      ["tau0", "0.33"],
      ["tau1", "0.7"],
    ],
  },
];

function tokensOf(panel: VNode, cls: string): string[] {
  return collectByClass(panel, cls).map(textOf);
}

describe.each(STUDIES)("$scenario", ({ scenario, mode, designPath, params }) => {
  const designText = fixture(scenario, "design.json").trim();
  const rootsText = fixture(scenario, "roots.json").trim();
  const traceText = fixture(scenario, "trace.json").trim();
  const manifest = JSON.parse(fixture(scenario, "manifest.json")) as {
    rect: Record<string, number>;
    sim: Record<string, number>;
  };

  async function drive() {
    const mock = makeMockFetch({
      [designPath]: { reply: designText },
      "/api/roots": { reply: rootsText },
      "/api/simulate": { reply: traceText },
    });
    const session = new DesignSession({
      api: new ApiClient("", mock.fetchFn),
      timers: IMMEDIATE,
      debounceMs: 0,
    });
    session.setMode(mode);
    for (const [field, value] of params) session.onParameterChange(field, value);
    await session.settled();
    expect(session.lastGains).not.toBeNull();
    return { session, mock };
  }

  it("issues the documented request chain with the fixture's parameters", async () => {
    const { mock } = await drive();
    expect(mock.requests.map((r) => r.url)).toEqual([
      designPath,
      "/api/roots",
      "/api/simulate",
    ]);
    // the quasipolynomial is forwarded token-for-token from the response
    const closedLoop = stringifyRaw(get(parseRaw(designText), "closed_loop"));
    expect(mock.requests[1].body).toContain(`"qp":${closedLoop}`);
    expect(mock.requests[2].body).toContain(`"qp":${closedLoop}`);
    // derived request parameters match the values the fixtures were built with
    const rect = get(parseRaw(mock.requests[1].body), "rect");
    for (const key of ["re_min", "re_max", "im_min", "im_max"]) {
      expect(Number(numToken(get(rect, key)))).toBe(manifest.rect[key]);
    }
    const spec = get(parseRaw(mock.requests[2].body), "spec");
    for (const key of ["t_end", "dt", "rk_dt"]) {
      expect(Number(numToken(get(spec, key)))).toBe(manifest.sim[key]);
    }
  });

  it("renders the gains panel byte-for-byte from the CLI JSON", async () => {
    const { session } = await drive();
    const panel = renderGains(mode, session.lastGains!);
    const rendered = collectByClass(panel, "num").map(textOf);
    expect(rendered.length).toBeGreaterThan(5);
    for (const token of rendered) {
      expect(designText).toContain(token);
    }
    const design = parseRaw(designText);
    expect(tokensOf(panel, "gain-s0")).toEqual([numToken(get(design, "s0"))]);
    expect(tokensOf(panel, "banner-atop")).toEqual([
      numToken(items(get(get(design, "closed_loop"), "a")).at(-1)!),
    ]);
  });

  it("renders the spectrum panel byte-for-byte from the CLI JSON", async () => {
    const { session } = await drive();
    const panel = renderSpectrum(session.lastSpectrum);
    for (const token of collectByClass(panel, "num").map(textOf)) {
      expect(rootsText).toContain(token);
    }
    const report = parseRaw(rootsText);
    const roots = items(get(report, "roots"));
    expect(tokensOf(panel, "root-re")).toEqual(roots.map((r) => numToken(get(r, "re"))));
    expect(tokensOf(panel, "root-im")).toEqual(roots.map((r) => numToken(get(r, "im"))));
    expect(tokensOf(panel, "root-residual")).toEqual(
      roots.map((r) => numToken(get(r, "residual")))
    );
    expect(tokensOf(panel, "root-count")).toEqual([numToken(get(report, "total_count"))]);
    const bound = get(report, "strip_bound");
    expect(tokensOf(panel, "band-lower")).toEqual([numToken(get(bound, "lower"))]);
    expect(tokensOf(panel, "band-upper")).toEqual([numToken(get(bound, "upper"))]);
    // the placed root is highlighted with its multiplicity
    const dominantRows = collectByClass(panel, "root-row").filter((r) =>
      (r.attrs["class"] ?? "").includes("dominant")
    );
    expect(dominantRows).toHaveLength(1);
  });

  it("renders the trace panel byte-for-byte from the CLI JSON", async () => {
    const { session } = await drive();
    const panel = renderTrace(session.lastTrace);
    const rendered = collectByClass(panel, "num").map(textOf);
    expect(rendered.length).toBeGreaterThan(20);
    for (const token of rendered) {
      expect(traceText).toContain(token);
    }
    // first table row is the exact initial sample
    const trace = parseRaw(traceText);
    const t0 = numToken(items(get(trace, "times"))[0]);
    expect(tokensOf(panel, "sample-t")[0]).toBe(t0);
    const y0 = items(get(trace, "y_full")).map((col) => numToken(items(col)[0]));
    expect(tokensOf(panel, "sample-y").slice(0, y0.length)).toEqual(y0);
  });
});
