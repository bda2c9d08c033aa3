/**
 * Panel renderers.  Every displayed number is a raw JSON token from a server
 * response (class "num"), so the rendered digits are byte-for-byte the
 * backend's 17-significant-digit encoding.  Parsed values are used only for
 * plot geometry.
 */

import {
  bool,
  get,
  has,
  isNull,
  items,
  numToken,
  RawJson,
  str,
  toNumber,
} from "./rawjson.js";
import { Mode } from "./session.js";
import { h, VNode } from "./vdom.js";

const W = 560;
const HGT = 360;

function num(token: string, extraClass = ""): VNode {
  return h("span", { class: ("num " + extraClass).trim() }, token);
}

function row(label: string, value: VNode | string, cls = ""): VNode {
  return h(
    "tr",
    cls === "" ? {} : { class: cls },
    h("th", {}, label),
    h("td", {}, value)
  );
}

const GAIN_FIELDS: Record<Mode, string[]> = {
  raw: ["n", "tau", "s0"],
  second_order: ["zeta", "omega", "tau", "s0", "a0", "alpha1", "alpha0"],
  wind_tunnel: [
    "kappa",
    "k_gain",
    "tau0",
    "tau1",
    "tau",
    "s0",
    "zeta",
    "omega",
    "beta0",
    "beta1",
    "beta2",
  ],
};

/** Gains panel: scalar fields, coefficient vectors, stability banner. */
export function renderGains(mode: Mode, gains: RawJson): VNode {
  const rows: VNode[] = [];
  for (const field of GAIN_FIELDS[mode]) {
    if (!has(gains, field)) continue;
    const v = get(gains, field);
    let label = field;
    if (mode === "wind_tunnel" && has(gains, "units")) {
      const unit = str(get(get(gains, "units"), field));
      if (unit !== "1") label = `${field} [${unit}]`;
    }
    rows.push(row(label, num(numToken(v), `gain-${field}`)));
  }
  const qp = mode === "raw" ? gains : get(gains, "closed_loop");
  for (const vec of ["a", "alpha"]) {
    const cells = items(get(qp, vec)).map((v) => num(numToken(v)));
    const joined: (VNode | string)[] = [];
    cells.forEach((c, i) => {
      if (i > 0) joined.push(", ");
      joined.push(c);
    });
    rows.push(row(vec, h("span", { class: `vector vector-${vec}` }, ...joined)));
  }
  return h(
    "div",
    { class: "panel gains-panel" },
    h("table", { class: "gains-table" }, ...rows),
    renderStabilityBanner(mode, gains)
  );
}

/**
 * Stability banner: the rightmost root s0 is negative exactly when
 * a_{n-1} > -n^2/tau; the verdict and every token come from the server
 * (the sign is read off the s0 token, not recomputed).
 */
export function renderStabilityBanner(mode: Mode, gains: RawJson): VNode {
  const qp = mode === "raw" ? gains : get(gains, "closed_loop");
  const nTok = numToken(get(qp, "n"));
  const tauTok = numToken(get(qp, "tau"));
  const a = items(get(qp, "a"));
  const aTop = numToken(a[a.length - 1]);
  const stable = has(gains, "stable")
    ? bool(get(gains, "stable"))
    : numToken(get(gains, "s0")).startsWith("-");
  return h(
    "div",
    { class: `banner ${stable ? "stable" : "unstable"}` },
    stable ? "stable: " : "unstable: ",
    h(
      "span",
      { class: "inequality" },
      "a_{n-1} = ",
      num(aTop, "banner-atop"),
      stable ? " > " : " <= ",
      "-(",
      num(nTok, "banner-n"),
      ")²/",
      num(tauTok, "banner-tau")
    )
  );
}

/** Scale mapping a point of the rectangle to plot pixels. */
function scales(reMin: number, reMax: number, imMin: number, imMax: number) {
  const sx = (x: number): number => ((x - reMin) / (reMax - reMin)) * W;
  const sy = (y: number): number => HGT - ((y - imMin) / (imMax - imMin)) * HGT;
  return { sx, sy };
}

export interface SpectrumOptions {
  /** second report drawn hollow, e.g. the open-loop spectrum */
  overlay?: RawJson;
  overlayLabel?: string;
}

/**
 * Spectrum panel: SVG scatter (marker radius grows with multiplicity, the
 * rightmost root highlighted and annotated) above a table of the exact
 * server tokens, plus the count badge with the strip density band.
 */
export function renderSpectrum(report: RawJson | null, opts: SpectrumOptions = {}): VNode {
  if (report === null || items(get(report, "roots")).length === 0) {
    return h(
      "div",
      { class: "panel spectrum-panel empty" },
      h("p", { class: "placeholder" }, "no roots in view")
    );
  }
  const rect = get(report, "rectangle");
  const reMin = toNumber(get(rect, "re_min"));
  const reMax = toNumber(get(rect, "re_max"));
  const imMin = toNumber(get(rect, "im_min"));
  const imMax = toNumber(get(rect, "im_max"));
  const { sx, sy } = scales(reMin, reMax, imMin, imMax);

  const roots = items(get(report, "roots"));
  let dominantIdx = 0;
  roots.forEach((r, i) => {
    if (toNumber(get(r, "re")) > toNumber(get(roots[dominantIdx], "re"))) dominantIdx = i;
  });

  const markers: VNode[] = [];
  const axisX = sx(0);
  if (axisX >= 0 && axisX <= W) {
    markers.push(
      h("line", { x1: String(axisX), y1: "0", x2: String(axisX), y2: String(HGT), class: "axis" })
    );
  }
  roots.forEach((r, i) => {
    const mult = toNumber(get(r, "multiplicity"));
    const cx = sx(toNumber(get(r, "re")));
    const cy = sy(toNumber(get(r, "im")));
    markers.push(
      h("circle", {
        cx: String(cx),
        cy: String(cy),
        r: String(3 + 2 * (mult - 1)),
        class: i === dominantIdx ? "root dominant" : "root",
      })
    );
    if (i === dominantIdx) {
      markers.push(
        h(
          "text",
          { x: String(cx + 8), y: String(cy - 8), class: "dominant-label" },
          "multiplicity ",
          numToken(get(r, "multiplicity"))
        )
      );
    }
  });
  if (opts.overlay !== undefined) {
    for (const r of items(get(opts.overlay, "roots"))) {
      markers.push(
        h("circle", {
          cx: String(sx(toNumber(get(r, "re")))),
          cy: String(sy(toNumber(get(r, "im")))),
          r: "4",
          class: "root overlay",
        })
      );
    }
  }

  const bound = get(report, "strip_bound");
  const badge = h(
    "p",
    { class: "count-badge" },
    num(numToken(get(report, "total_count")), "root-count"),
    " roots in view (strip density band ",
    num(numToken(get(bound, "lower")), "band-lower"),
    " to ",
    num(numToken(get(bound, "upper")), "band-upper"),
    ")"
  );

  const tableRows = roots.map((r, i) =>
    h(
      "tr",
      { class: i === dominantIdx ? "root-row dominant" : "root-row" },
      h("td", {}, num(numToken(get(r, "re")), "root-re")),
      h("td", {}, num(numToken(get(r, "im")), "root-im")),
      h("td", {}, num(numToken(get(r, "multiplicity")), "root-mult")),
      h("td", {}, num(numToken(get(r, "residual")), "root-residual"))
    )
  );
  const table = h(
    "table",
    { class: "roots-table" },
    h(
      "tr",
      {},
      h("th", {}, "re"),
      h("th", {}, "im"),
      h("th", {}, "multiplicity"),
      h("th", {}, "residual")
    ),
    ...tableRows
  );

  return h(
    "div",
    { class: "panel spectrum-panel" },
    h("svg", { viewBox: `0 0 ${W} ${HGT}`, class: "spectrum-plot" }, ...markers),
    badge,
    table
  );
}

export interface TraceOptions {
  /** overlay trace drawn dashed, e.g. the open-loop response */
  overlay?: RawJson;
  overlayLabel?: string;
  /** max table rows (the plot always uses every sample) */
  tableRows?: number;
}

/**
 * Trace panel: polyline of y0 over time, optional open-loop overlay, and a
 * downsampled readout table of exact server tokens.
 */
export function renderTrace(trace: RawJson | null, opts: TraceOptions = {}): VNode {
  if (trace === null) {
    return h(
      "div",
      { class: "panel trace-panel empty" },
      h("p", { class: "placeholder" }, "no simulation yet")
    );
  }
  const times = items(get(trace, "times"));
  const yFull = items(get(trace, "y_full")).map((r) => items(r));
  const tVals = times.map(toNumber);
  const tMin = Math.min(...tVals);
  const tMax = Math.max(...tVals);
  const series: RawJson[][] = [yFull[0] ?? []];
  if (opts.overlay !== undefined) series.push(items(get(opts.overlay, "y")));
  const yVals = series.flat().map(toNumber);
  const yMin = Math.min(...yVals, 0);
  const yMax = Math.max(...yVals, 0);
  const px = (t: number): number => ((t - tMin) / (tMax - tMin || 1)) * W;
  const py = (y: number): number => HGT - ((y - yMin) / (yMax - yMin || 1)) * HGT;

  const lines: VNode[] = [
    h("polyline", {
      points: tVals.map((t, j) => `${px(t)},${py(toNumber(yFull[0][j]))}`).join(" "),
      class: "trace closed",
      fill: "none",
    }),
  ];
  if (opts.overlay !== undefined) {
    const oT = items(get(opts.overlay, "times")).map(toNumber);
    const oY = items(get(opts.overlay, "y"));
    lines.push(
      h("polyline", {
        points: oT.map((t, j) => `${px(t)},${py(toNumber(oY[j]))}`).join(" "),
        class: "trace overlay",
        fill: "none",
      })
    );
  }

  const badges: (VNode | string)[] = [];
  if (has(trace, "fitted_rate") && !isNull(get(trace, "fitted_rate"))) {
    badges.push("fitted decay rate ", num(numToken(get(trace, "fitted_rate")), "fitted-rate"));
  }
  if (has(trace, "truncated") && bool(get(trace, "truncated"))) {
    badges.push(h("span", { class: "truncated-badge" }, " (truncated: blow-up)"));
  }

  const maxRows = opts.tableRows ?? 21;
  const stride = Math.max(1, Math.ceil(times.length / maxRows));
  const header = h(
    "tr",
    {},
    h("th", {}, "t"),
    ...yFull.map((_, k) => h("th", {}, `y${k}`))
  );
  const rows: VNode[] = [];
  for (let j = 0; j < times.length; j += stride) {
    rows.push(
      h(
        "tr",
        { class: "sample-row" },
        h("td", {}, num(numToken(times[j]), "sample-t")),
        ...yFull.map((col) => h("td", {}, num(numToken(col[j]), "sample-y")))
      )
    );
  }

  return h(
    "div",
    { class: "panel trace-panel" },
    h("svg", { viewBox: `0 0 ${W} ${HGT}`, class: "trace-plot" }, ...lines),
    h("p", { class: "trace-badges" }, ...badges),
    h("table", { class: "samples-table" }, header, ...rows)
  );
}
