/** Browser entry point: wires form inputs to a DesignSession and mounts the
 * three panels.  Expects the backend started with `midpole serve`. */

import { ApiClient } from "./api.js";
import { renderGains, renderSpectrum, renderTrace } from "./render.js";
import { DesignSession, Mode } from "./session.js";
import { h, replaceChildren } from "./vdom.js";

const MODE_FIELDS: Record<Mode, string[]> = {
  raw: ["n", "tau", "s0"],
  second_order: ["zeta", "omega", "tau"],
  wind_tunnel: ["kappa", "k_gain", "tau0", "tau1"],
};

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing #${id}`);
  return node;
}

function toast(message: string): void {
  const box = el("toast");
  box.textContent = message;
  box.classList.add("visible");
  setTimeout(() => box.classList.remove("visible"), 4000);
}

function renderForm(session: DesignSession): void {
  const form = el("params");
  form.textContent = "";
  for (const field of MODE_FIELDS[session.mode]) {
    const input = document.createElement("input");
    input.id = `field-${field}`;
    input.value = session.params.get(field) ?? "";
    input.addEventListener("input", () => {
      session.onParameterChange(field, input.value);
      const err = session.fieldErrors.get(field);
      el("field-errors").textContent = err ?? "";
    });
    const label = document.createElement("label");
    label.textContent = field;
    label.appendChild(input);
    form.appendChild(label);
  }
}

function renderPanels(session: DesignSession): void {
  if (session.lastGains !== null) {
    replaceChildren(renderGains(session.mode, session.lastGains), el("gains"));
  }
  replaceChildren(renderSpectrum(session.lastSpectrum), el("spectrum"));
  replaceChildren(renderTrace(session.lastTrace), el("trace"));
}

function start(): void {
  const api = new ApiClient("");
  const session = new DesignSession({
    api,
    onUpdate: renderPanels,
    onToast: toast,
  });

  const select = el("mode") as HTMLSelectElement;
  select.addEventListener("change", () => {
    session.setMode(select.value as Mode);
    renderForm(session);
  });
  renderForm(session);

  for (const [dir, dRe, dIm] of [
    ["pan-left", -1, 0],
    ["pan-right", 1, 0],
    ["pan-up", 0, 1],
    ["pan-down", 0, -1],
  ] as const) {
    el(dir).addEventListener("click", () => {
      const gains = session.lastGains;
      if (gains === null) return;
      // pan by a fifth of the current width/height
      const v = session.view;
      const stepRe = v === null ? 5 : (v.reMax - v.reMin) / 5;
      const stepIm = v === null ? 16 : (v.imMax - v.imMin) / 5;
      session.pan(dRe * stepRe, dIm * stepIm, 0, 1);
    });
  }

  replaceChildren(h("p", { class: "placeholder" }, "enter parameters to design"), el("gains"));
  renderPanels(session);
}

if (typeof document !== "undefined") {
  start();
}
