/**
 * Minimal virtual-DOM nodes.  Panels build VNode trees; in the browser
 * `mount` realizes them with document.createElement, and in tests the
 * trees are inspected directly (no DOM emulation needed).
 */

export interface VNode {
  tag: string;
  attrs: Record<string, string>;
  children: (VNode | string)[];
}

export function h(
  tag: string,
  attrs: Record<string, string> = {},
  ...children: (VNode | string)[]
): VNode {
  return { tag, attrs, children };
}

const SVG_TAGS = new Set(["svg", "circle", "polyline", "line", "text", "g", "rect", "path"]);
const SVG_NS = "http://www.w3.org/2000/svg";

export function mount(node: VNode, parent: Element): Element {
  const el = SVG_TAGS.has(node.tag)
    ? document.createElementNS(SVG_NS, node.tag)
    : document.createElement(node.tag);
  for (const [k, v] of Object.entries(node.attrs)) el.setAttribute(k, v);
  for (const child of node.children) {
    if (typeof child === "string") {
      el.appendChild(document.createTextNode(child));
    } else {
      mount(child, el);
    }
  }
  parent.appendChild(el);
  return el;
}

export function replaceChildren(node: VNode, parent: Element): void {
  parent.textContent = "";
  mount(node, parent);
}

/** All text content, depth first. */
export function collectText(node: VNode): string[] {
  const out: string[] = [];
  const walk = (n: VNode): void => {
    for (const c of n.children) {
      if (typeof c === "string") out.push(c);
      else walk(c);
    }
  };
  walk(node);
  return out;
}

/** All descendant elements whose class attribute contains `cls`. */
export function collectByClass(node: VNode, cls: string): VNode[] {
  const out: VNode[] = [];
  const walk = (n: VNode): void => {
    const classes = (n.attrs["class"] ?? "").split(/\s+/);
    if (classes.includes(cls)) out.push(n);
    for (const c of n.children) if (typeof c !== "string") walk(c);
  };
  walk(node);
  return out;
}

export function textOf(node: VNode): string {
  return collectText(node).join("");
}
