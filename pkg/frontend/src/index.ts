export { ApiClient, ApiError } from "./api.js";
export type { FetchLike, FetchResponse } from "./api.js";
export {
  parseRaw,
  stringifyRaw,
  rawNumber,
  rawString,
  rawObject,
  rawArray,
  rawFromNumber,
  get,
  has,
  items,
  numToken,
  toNumber,
  str,
  bool,
  isNull,
} from "./rawjson.js";
export type { RawJson } from "./rawjson.js";
export { DesignSession, defaultView, simulationSpec, describeChain } from "./session.js";
export type { Mode, SessionOptions, Timers, ViewRect } from "./session.js";
export {
  renderGains,
  renderSpectrum,
  renderStabilityBanner,
  renderTrace,
} from "./render.js";
export type { SpectrumOptions, TraceOptions } from "./render.js";
export { h, mount, replaceChildren, collectText, collectByClass, textOf } from "./vdom.js";
export type { VNode } from "./vdom.js";
