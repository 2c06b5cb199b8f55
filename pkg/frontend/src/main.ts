/**
 * Application wiring: one Store drives four views. Every state change
 * re-fetches the affected payloads through a RequestGate so a slow stale
 * response can never overwrite a newer one.
 */

import { ApiClient, ChordResponse, JobStats, RequestGate, TreeResponse } from "./api.js";
import { initialState, Store, ViewState } from "./state.js";
import { h, replaceChildren } from "./vdom.js";
import { renderAggregationPanel } from "./views/aggregation.js";
import { renderClusterView } from "./views/cluster.js";
import { interpolateChord, renderFrameView } from "./views/frame.js";
import { renderTrendView } from "./views/trend.js";

const ANIMATION_MS = 300;

function container(id: string): Element {
  const el = document.getElementById(id);
  if (!el) {
    throw new Error(`missing container #${id}`);
  }
  return el;
}

class App {
  private readonly gate = new RequestGate();
  private stats!: JobStats;
  private tree!: TreeResponse;
  private lastChord: ChordResponse | null = null;
  private collapsed = new Set<string>();

  constructor(private readonly api: ApiClient, private readonly store: Store) {}

  async start(): Promise<void> {
    const state = this.store.state;
    this.stats = await this.api.stats(state.jobId);
    this.tree = await this.api.tree(state.jobId);
    this.store.rememberColors(
      Object.fromEntries(this.tree.workers.map((w) => [w.worker, w.color])));
    this.store.subscribe((next) => this.refresh(next));
    this.refresh(this.store.state);
  }

  private query(state: ViewState) {
    return {
      frame_size: state.frameSize,
      level: state.level,
      kind: state.kind,
      exclude: [...state.excluded].sort(),
      min_msgs: state.minMsgs,
    };
  }

  private refresh(state: ViewState): void {
    replaceChildren(container("aggregation"),
      renderAggregationPanel(this.store, this.stats));
    replaceChildren(container("cluster"),
      renderClusterView(this.store, this.tree));
    void this.refreshTrend(state);
    void this.refreshFrame(state);
  }

  private async refreshTrend(state: ViewState): Promise<void> {
    const token = this.gate.issue("trend");
    try {
      const frames = await this.api.frames(state.jobId, {
        ...this.query(state),
        page: state.page,
      });
      if (!this.gate.isCurrent("trend", token)) {
        return;
      }
      this.store.rememberColors(frames.colors);
      replaceChildren(container("trend"),
        renderTrendView(this.store, frames, this.collapsed, (key) => {
          if (this.collapsed.has(key)) {
            this.collapsed.delete(key);
          } else {
            this.collapsed.add(key);
          }
          this.refresh(this.store.state);
        }));
    } catch (err) {
      if (this.gate.isCurrent("trend", token)) {
        replaceChildren(container("trend"),
          h("p", { class: "error" }, [String(err)]));
      }
    }
  }

  private async refreshFrame(state: ViewState): Promise<void> {
    const token = this.gate.issue("frame");
    try {
      const chord = await this.api.chord(
        state.jobId, state.frameCursor, this.query(state));
      if (!this.gate.isCurrent("frame", token)) {
        return;
      }
      this.animateTo(chord, token);
    } catch (err) {
      if (this.gate.isCurrent("frame", token)) {
        replaceChildren(container("frame"),
          h("p", { class: "error" }, [String(err)]));
      }
    }
  }

  private animateTo(chord: ChordResponse, token: number): void {
    const target = container("frame");
    const previous = this.lastChord;
    this.lastChord = chord;
    const raf = typeof requestAnimationFrame === "function"
      ? requestAnimationFrame
      : null;
    if (!previous || !raf) {
      replaceChildren(target, renderFrameView(this.store, chord));
      return;
    }
    const startedAt = performance.now();
    const step = (now: number) => {
      if (!this.gate.isCurrent("frame", token)) {
        return;
      }
      const t = Math.min(1, (now - startedAt) / ANIMATION_MS);
      const eased = t * (2 - t);
      replaceChildren(target,
        renderFrameView(this.store, interpolateChord(previous, chord, eased)));
      if (t < 1) {
        raf(step);
      }
    };
    raf(step);
  }
}

async function boot(): Promise<void> {
  const api = new ApiClient("");
  const jobs = await api.jobs();
  if (jobs.jobs.length === 0) {
    replaceChildren(container("aggregation"),
      h("p", { class: "error" }, ["no jobs ingested yet"]));
    return;
  }
  const first = jobs.jobs[0];
  const store = new Store(initialState(first.job_id, first.stats.superstep_count));
  await new App(api, store).start();
}

if (typeof document !== "undefined" && document.getElementById("aggregation")) {
  void boot();
}
