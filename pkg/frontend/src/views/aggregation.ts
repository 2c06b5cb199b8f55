/**
 * Aggregation Panel: frame-size slider, worker/host/rack switch, weight
 * kind switch, minimum-traffic filter, and a stats readout echoing the
 * /stats payload.
 */

import { JobStats } from "../api.js";
import { h, VNode } from "../vdom.js";
import { Level, Store, WeightKind, frameCount } from "../state.js";

const LEVELS: Level[] = ["worker", "host", "rack"];
const KINDS: WeightKind[] = ["messages", "bytes"];

const STAT_LABELS: [keyof JobStats, string][] = [
  ["superstep_count", "supersteps"],
  ["total_runtime_ms", "runtime (ms)"],
  ["total_messages", "messages"],
  ["total_bytes", "bytes"],
];

export function renderAggregationPanel(store: Store, stats: JobStats): VNode {
  const state = store.state;
  const k = state.superstepCount;

  const slider = h("input", {
    type: "range",
    min: "1",
    max: String(k),
    value: String(state.frameSize),
    class: "frame-size-slider",
  }, [], {
    input: (event) => {
      const value = Number((event.target as HTMLInputElement).value);
      store.update({ frameSize: value, page: 1 });
    },
  });

  const levelSwitch = h("div", { class: "level-switch", role: "group" },
    LEVELS.map((level) =>
      h("button", {
        class: state.level === level ? "active" : "",
        "data-level": level,
      }, [level], {
        click: () => store.update({ level }),
      })));

  const kindSwitch = h("div", { class: "kind-switch", role: "group" },
    KINDS.map((kind) =>
      h("button", {
        class: state.kind === kind ? "active" : "",
        "data-kind": kind,
      }, [kind], {
        click: () => store.update({ kind }),
      })));

  const minMsgs = h("input", {
    type: "number",
    min: "0",
    value: String(state.minMsgs),
    class: "min-msgs",
  }, [], {
    change: (event) => {
      const value = Math.max(0, Number((event.target as HTMLInputElement).value));
      store.update({ minMsgs: value });
    },
  });

  const statRows = STAT_LABELS.map(([key, label]) =>
    h("tr", {}, [
      h("th", {}, [label]),
      h("td", { "data-stat": key }, [String(stats[key])]),
    ]));

  return h("section", {
    class: "aggregation-panel",
    "data-state": store.sharedTuple(),
  }, [
    h("h2", {}, ["Aggregation"]),
    h("label", {}, [
      `frame size ${state.frameSize} (${frameCount(k, state.frameSize)} frames)`,
      slider,
    ]),
    h("label", {}, ["granularity", levelSwitch]),
    h("label", {}, ["weight", kindSwitch]),
    h("label", {}, ["min messages", minMsgs]),
    h("table", { class: "stats" }, statRows),
  ]);
}
