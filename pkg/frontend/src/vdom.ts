/**
 * Minimal virtual-node layer. Views build plain trees that tests can
 * inspect without a browser; `mount` materializes them into real DOM.
 */

export type Handler = (event: Event) => void;

export interface VNode {
  tag: string;
  attrs: Record<string, string>;
  on: Record<string, Handler>;
  children: VNode[];
  text: string | null;
}

export function h(
  tag: string,
  attrs: Record<string, string> = {},
  children: (VNode | string)[] = [],
  on: Record<string, Handler> = {},
): VNode {
  const nodes: VNode[] = [];
  let text: string | null = null;
  for (const child of children) {
    if (typeof child === "string") {
      nodes.push({ tag: "#text", attrs: {}, on: {}, children: [], text: child });
    } else {
      nodes.push(child);
    }
  }
  return { tag, attrs, on, children: nodes, text };
}

const SVG_NS = "http://www.w3.org/2000/svg";
const SVG_TAGS = new Set([
  "svg", "g", "path", "rect", "circle", "line", "text", "title",
  "defs", "pattern", "tspan",
]);

export function mount(node: VNode, parent: Element): Node {
  if (node.tag === "#text") {
    const textNode = parent.ownerDocument.createTextNode(node.text ?? "");
    parent.appendChild(textNode);
    return textNode;
  }
  const doc = parent.ownerDocument;
  const el = SVG_TAGS.has(node.tag)
    ? doc.createElementNS(SVG_NS, node.tag)
    : doc.createElement(node.tag);
  for (const [key, value] of Object.entries(node.attrs)) {
    el.setAttribute(key, value);
  }
  for (const [name, handler] of Object.entries(node.on)) {
    el.addEventListener(name, handler);
  }
  for (const child of node.children) {
    mount(child, el);
  }
  parent.appendChild(el);
  return el;
}

export function replaceChildren(parent: Element, node: VNode): void {
  parent.textContent = "";
  mount(node, parent);
}

/** Depth-first walk over a tree, visiting every node. */
export function walk(node: VNode, visit: (node: VNode) => void): void {
  visit(node);
  for (const child of node.children) {
    walk(child, visit);
  }
}

/** All text fragments in a tree, in document order. */
export function collectText(node: VNode): string[] {
  const out: string[] = [];
  walk(node, (n) => {
    if (n.tag === "#text" && n.text !== null && n.text.trim() !== "") {
      out.push(n.text);
    }
  });
  return out;
}
