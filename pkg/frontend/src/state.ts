/**
 * Shared view state. Every view renders from this single object, so a
 * change to any field is reflected in all four views on the next render.
 */

export type Level = "worker" | "host" | "rack";
export type WeightKind = "messages" | "bytes";

export interface ViewState {
  jobId: string;
  superstepCount: number;
  frameSize: number;
  level: Level;
  kind: WeightKind;
  excluded: ReadonlySet<string>;
  minMsgs: number;
  frameCursor: number;
  page: number;
  colors: Readonly<Record<string, string>>;
}

export type Listener = (state: ViewState) => void;

export function initialState(jobId: string, supersteps: number): ViewState {
  return {
    jobId,
    superstepCount: supersteps,
    frameSize: 1,
    level: "worker",
    kind: "messages",
    excluded: new Set(),
    minMsgs: 0,
    frameCursor: 1,
    page: 1,
    colors: {},
  };
}

export class Store {
  private listeners: Listener[] = [];

  constructor(private current: ViewState) {}

  get state(): ViewState {
    return this.current;
  }

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  update(patch: Partial<ViewState>): void {
    this.current = { ...this.current, ...patch };
    // A shrunk frame count or a level change can strand the cursor/page;
    // clamp instead of surfacing a 404 to the user.
    const frames = frameCount(this.current.superstepCount, this.current.frameSize);
    if (this.current.frameCursor > frames) {
      this.current = { ...this.current, frameCursor: frames };
    }
    if (this.current.frameCursor < 1) {
      this.current = { ...this.current, frameCursor: 1 };
    }
    for (const listener of this.listeners) {
      listener(this.current);
    }
  }

  toggleExcluded(label: string): void {
    const next = new Set(this.current.excluded);
    if (next.has(label)) {
      next.delete(label);
    } else {
      next.add(label);
    }
    this.update({ excluded: next });
  }

  /** Colors are assigned once per session and then never reshuffled. */
  rememberColors(colors: Record<string, string>): void {
    const merged: Record<string, string> = { ...this.current.colors };
    let changed = false;
    for (const [unit, color] of Object.entries(colors)) {
      if (!(unit in merged)) {
        merged[unit] = color;
        changed = true;
      }
    }
    if (changed) {
      this.current = { ...this.current, colors: merged };
    }
  }

  /**
   * The coordination tuple every view must agree on. Rendered views stamp
   * this onto their root so agreement is checkable from the outside.
   */
  sharedTuple(): string {
    const s = this.current;
    const excluded = [...s.excluded].sort().join("+");
    return [
      s.jobId, s.frameSize, s.level, s.kind, excluded, s.minMsgs,
      s.frameCursor, s.page,
    ].join("|");
  }
}

export function frameCount(supersteps: number, frameSize: number): number {
  return Math.max(1, Math.ceil(supersteps / frameSize));
}
