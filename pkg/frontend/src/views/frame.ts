/**
 * Frame View: chord diagram for the current frame. Arc spans, segment
 * intervals, ribbon anchors, and hierarchy rings all come pre-computed
 * from the API; this module only turns angles into SVG paths.
 */

import { Arc, ChordResponse, RibbonShape } from "../api.js";
import { Store } from "../state.js";
import { h, VNode } from "../vdom.js";

const SIZE = 480;
const CENTER = SIZE / 2;
const OUTER = SIZE * 0.42;
const INNER = SIZE * 0.36;
const RING_GAP = 6;
const RING_WIDTH = 8;

function point(angle: number, radius: number): [number, number] {
  return [CENTER + radius * Math.cos(angle), CENTER + radius * Math.sin(angle)];
}

function arcPath(start: number, end: number, rOuter: number, rInner: number): string {
  const large = end - start > Math.PI ? 1 : 0;
  const [x0, y0] = point(start, rOuter);
  const [x1, y1] = point(end, rOuter);
  const [x2, y2] = point(end, rInner);
  const [x3, y3] = point(start, rInner);
  return [
    `M ${x0.toFixed(3)} ${y0.toFixed(3)}`,
    `A ${rOuter.toFixed(3)} ${rOuter.toFixed(3)} 0 ${large} 1 ${x1.toFixed(3)} ${y1.toFixed(3)}`,
    `L ${x2.toFixed(3)} ${y2.toFixed(3)}`,
    `A ${rInner.toFixed(3)} ${rInner.toFixed(3)} 0 ${large} 0 ${x3.toFixed(3)} ${y3.toFixed(3)}`,
    "Z",
  ].join(" ");
}

function ribbonPath(ribbon: RibbonShape): string {
  const r = INNER - 1;
  const [sx0, sy0] = point(ribbon.src_start, r);
  const [sx1, sy1] = point(ribbon.src_end, r);
  const [dx0, dy0] = point(ribbon.dst_start, r);
  const [dx1, dy1] = point(ribbon.dst_end, r);
  const largeSrc = ribbon.src_end - ribbon.src_start > Math.PI ? 1 : 0;
  const largeDst = ribbon.dst_end - ribbon.dst_start > Math.PI ? 1 : 0;
  return [
    `M ${sx0.toFixed(3)} ${sy0.toFixed(3)}`,
    `A ${r.toFixed(3)} ${r.toFixed(3)} 0 ${largeSrc} 1 ${sx1.toFixed(3)} ${sy1.toFixed(3)}`,
    `Q ${CENTER} ${CENTER} ${dx0.toFixed(3)} ${dy0.toFixed(3)}`,
    `A ${r.toFixed(3)} ${r.toFixed(3)} 0 ${largeDst} 1 ${dx1.toFixed(3)} ${dy1.toFixed(3)}`,
    `Q ${CENTER} ${CENTER} ${sx0.toFixed(3)} ${sy0.toFixed(3)}`,
    "Z",
  ].join(" ");
}

function segmentNodes(arc: Arc, color: string): VNode[] {
  const out: VNode[] = [];
  const segments: [string, number, number, string][] = [
    // Self-loop traffic is drawn thicker than the in/out bands.
    ["self", arc.self_start, arc.self_end, "segment-self"],
    ["in", arc.in_start, arc.in_end, "segment-in"],
    ["out", arc.out_start, arc.out_end, "segment-out"],
  ];
  for (const [name, start, end, cls] of segments) {
    if (end - start <= 0) {
      continue;
    }
    const extra = name === "self" ? 4 : 0;
    const fill = name === "in" ? `url(#hatch-${arc.unit})` : color;
    out.push(h("path", {
      class: `arc-segment ${cls}`,
      "data-unit": arc.unit,
      d: arcPath(start, end, OUTER + extra, INNER),
      fill,
      stroke: "#222222",
      "stroke-width": "0.5",
    }));
  }
  return out;
}

function hatchDefs(colors: Record<string, string>): VNode {
  const patterns = Object.entries(colors).map(([unit, color]) =>
    h("pattern", {
      id: `hatch-${unit}`,
      width: "6",
      height: "6",
      patternUnits: "userSpaceOnUse",
      patternTransform: "rotate(45)",
    }, [
      h("rect", { width: "6", height: "6", fill: color, "fill-opacity": "0.55" }),
      h("line", { x1: "0", y1: "0", x2: "0", y2: "6", stroke: "#000000", "stroke-width": "2", "stroke-opacity": "0.35" }),
    ]));
  return h("defs", {}, patterns);
}

export function renderFrameView(store: Store, chord: ChordResponse): VNode {
  const state = store.state;
  const body: VNode[] = [hatchDefs(chord.colors)];

  let ringRadius = OUTER + RING_GAP + 4;
  for (const level of ["host", "rack"]) {
    const bands = chord.rings.filter((b) => b.level === level);
    if (bands.length === 0) {
      continue;
    }
    for (const band of bands) {
      body.push(h("path", {
        class: `ring ring-${band.level}`,
        "data-label": band.label,
        d: arcPath(band.start, band.end, ringRadius + RING_WIDTH, ringRadius),
        fill: "#888888",
        "fill-opacity": level === "host" ? "0.45" : "0.25",
      }, [
        h("title", {}, [band.label]),
      ]));
    }
    ringRadius += RING_WIDTH + RING_GAP;
  }

  for (const arc of chord.arcs) {
    const color = chord.colors[arc.unit] ?? "#999999";
    if (chord.degenerate) {
      body.push(h("path", {
        class: "arc-segment segment-empty",
        "data-unit": arc.unit,
        d: arcPath(arc.start, arc.end, OUTER, INNER),
        fill: color,
        "fill-opacity": "0.3",
      }));
    } else {
      body.push(...segmentNodes(arc, color));
    }
  }

  for (const ribbon of chord.ribbons) {
    body.push(h("path", {
      class: "ribbon",
      "data-src": ribbon.src,
      "data-dst": ribbon.dst,
      "data-weight": String(ribbon.weight),
      d: ribbonPath(ribbon),
      fill: chord.colors[ribbon.src] ?? "#999999",
      "fill-opacity": "0.6",
    }, [
      h("title", {}, [`${ribbon.src} -> ${ribbon.dst}: ${ribbon.weight} ${chord.kind}`]),
    ]));
  }

  const notice = chord.degenerate
    ? [h("p", { class: "degenerate-notice" }, ["no traffic in this frame"])]
    : [];

  return h("section", {
    class: "frame-view",
    "data-state": store.sharedTuple(),
    "data-unit-order": chord.units.join(","),
  }, [
    h("h2", {}, [`Frame ${state.frameCursor}`]),
    ...notice,
    h("svg", {
      viewBox: `0 0 ${SIZE} ${SIZE}`,
      width: String(SIZE),
      height: String(SIZE),
    }, body),
  ]);
}

/**
 * Linear interpolation between two chord layouts over the same unit
 * order, used for the 300 ms ribbon-width transition between frames.
 * Ribbons present on only one side collapse to a zero-width anchor.
 */
export function interpolateChord(from: ChordResponse, to: ChordResponse, t: number): ChordResponse {
  if (t >= 1 || from.units.join() !== to.units.join() || from.degenerate || to.degenerate) {
    return to;
  }
  const mix = (a: number, b: number) => a + (b - a) * t;
  const fromArcs = new Map(from.arcs.map((a) => [a.unit, a]));
  const arcs = to.arcs.map((arc) => {
    const prev = fromArcs.get(arc.unit);
    if (!prev) {
      return arc;
    }
    return {
      ...arc,
      start: mix(prev.start, arc.start),
      end: mix(prev.end, arc.end),
      self_start: mix(prev.self_start, arc.self_start),
      self_end: mix(prev.self_end, arc.self_end),
      in_start: mix(prev.in_start, arc.in_start),
      in_end: mix(prev.in_end, arc.in_end),
      out_start: mix(prev.out_start, arc.out_start),
      out_end: mix(prev.out_end, arc.out_end),
    };
  });
  const fromRibbons = new Map(from.ribbons.map((r) => [`${r.src}|${r.dst}`, r]));
  const ribbons = to.ribbons.map((ribbon) => {
    const prev = fromRibbons.get(`${ribbon.src}|${ribbon.dst}`);
    if (!prev) {
      const collapse = (lo: number) => lo;
      return {
        ...ribbon,
        src_start: mix(collapse(ribbon.src_start), ribbon.src_start),
        src_end: mix(collapse(ribbon.src_start), ribbon.src_end),
        dst_start: mix(collapse(ribbon.dst_start), ribbon.dst_start),
        dst_end: mix(collapse(ribbon.dst_start), ribbon.dst_end),
      };
    }
    return {
      ...ribbon,
      src_start: mix(prev.src_start, ribbon.src_start),
      src_end: mix(prev.src_end, ribbon.src_end),
      dst_start: mix(prev.dst_start, ribbon.dst_start),
      dst_end: mix(prev.dst_end, ribbon.dst_end),
    };
  });
  return { ...to, arcs, ribbons };
}
