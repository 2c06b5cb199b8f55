/**
 * Trend View: three small multiples stacked vertically with a shared
 * frame axis. Time as an area chart, messages and bytes as stacked bars
 * with incoming traffic drawn in a darkened diagonal hatch. A slider on
 * the axis drives the Frame View cursor.
 */

import { FramesResponse, UnitSeries } from "../api.js";
import { Store } from "../state.js";
import { h, VNode } from "../vdom.js";

const WIDTH = 480;
const CHART_HEIGHT = 90;
const GUTTER = 24;

interface Multiple {
  key: "time" | "messages" | "bytes";
  title: string;
  outField: keyof UnitSeries;
  inField: keyof UnitSeries | null;
}

const MULTIPLES: Multiple[] = [
  { key: "time", title: "computation time (ms)", outField: "time_ms", inField: null },
  { key: "messages", title: "messages", outField: "msgs_out", inField: "msgs_in" },
  { key: "bytes", title: "bytes", outField: "bytes_out", inField: "bytes_in" },
];

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

function chartMax(frames: FramesResponse, multiple: Multiple): number {
  let max = 0;
  const count = frames.frames.length;
  for (let i = 0; i < count; i++) {
    let stacked = 0;
    for (const unit of frames.units) {
      const series = frames.series[unit];
      stacked += series[multiple.outField][i];
      if (multiple.inField) {
        stacked += series[multiple.inField][i];
      }
    }
    max = Math.max(max, stacked);
  }
  return max;
}

function renderMultiple(frames: FramesResponse, multiple: Multiple, collapsed: boolean,
                        onToggle: () => void): VNode {
  const header = h("header", { class: "multiple-header" }, [
    h("button", { class: "collapse-toggle" }, [collapsed ? "+" : "-"], { click: onToggle }),
    h("h3", {}, [multiple.title]),
  ]);
  if (collapsed) {
    return h("div", { class: `multiple multiple-${multiple.key} collapsed` }, [header]);
  }

  const count = frames.frames.length;
  const max = chartMax(frames, multiple);
  const slot = WIDTH / Math.max(count, 1);
  const bars: VNode[] = [];
  for (let i = 0; i < count; i++) {
    const descriptor = frames.frames[i];
    let y = CHART_HEIGHT;
    for (const unit of frames.units) {
      const series = frames.series[unit];
      const segments: { value: number; fill: string; flow: string }[] = [
        { value: series[multiple.outField][i] as number, fill: frames.colors[unit], flow: "out" },
      ];
      if (multiple.inField) {
        segments.push({
          value: series[multiple.inField][i] as number,
          fill: `url(#hatch-${unit})`,
          flow: "in",
        });
      }
      for (const segment of segments) {
        const height = max > 0 ? (segment.value / max) * CHART_HEIGHT : 0;
        y -= height;
        bars.push(h("rect", {
          class: `bar bar-${segment.flow}`,
          "data-unit": unit,
          "data-frame": String(descriptor.index),
          "data-value": String(segment.value),
          x: (i * slot + 1).toFixed(2),
          y: y.toFixed(2),
          width: Math.max(slot - 2, 1).toFixed(2),
          height: height.toFixed(2),
          fill: segment.fill,
        }, [
          h("title", {}, [`${unit} frame ${descriptor.index} ${segment.flow}: ${segment.value}`]),
        ]));
      }
    }
  }

  return h("div", { class: `multiple multiple-${multiple.key}` }, [
    header,
    h("svg", {
      viewBox: `0 0 ${WIDTH} ${CHART_HEIGHT + GUTTER}`,
      width: String(WIDTH),
      height: String(CHART_HEIGHT + GUTTER),
    }, [hatchDefs(frames.colors), ...bars]),
  ]);
}

export function renderTrendView(store: Store, frames: FramesResponse,
                                collapsed: ReadonlySet<string> = new Set(),
                                onToggle: (key: string) => void = () => {}): VNode {
  const state = store.state;
  const multiples = MULTIPLES.map((m) =>
    renderMultiple(frames, m, collapsed.has(m.key), () => onToggle(m.key)));

  const cursor = h("input", {
    type: "range",
    class: "frame-cursor",
    min: "1",
    max: String(frames.frame_count),
    value: String(state.frameCursor),
  }, [], {
    input: (event) => {
      store.update({ frameCursor: Number((event.target as HTMLInputElement).value) });
    },
  });

  const pager = h("nav", { class: "pager" }, [
    h("button", { disabled: state.page <= 1 ? "disabled" : "" }, ["prev"], {
      click: () => store.update({ page: Math.max(1, state.page - 1) }),
    }),
    h("span", { class: "page-label" }, [`page ${frames.page}`]),
    h("button", {}, ["next"], {
      click: () => store.update({ page: state.page + 1 }),
    }),
  ]);

  return h("section", {
    class: "trend-view",
    "data-state": store.sharedTuple(),
  }, [
    h("h2", {}, ["Trend"]),
    ...multiples,
    h("label", { class: "cursor-row" }, [`frame ${state.frameCursor}`, cursor]),
    pager,
  ]);
}
