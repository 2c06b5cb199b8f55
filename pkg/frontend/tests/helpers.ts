import { readFileSync } from "node:fs";

import { ChordResponse, FramesResponse, JobsResponse, JobStats, TreeResponse } from "../src/api.js";

function load<T>(name: string): T {
  const url = new URL(`./fixtures/${name}`, import.meta.url);
  return JSON.parse(readFileSync(url, "utf-8")) as T;
}

export const fixtures = {
  jobs: () => load<JobsResponse>("jobs.json"),
  stats: () => load<JobStats>("stats.json"),
  tree: () => load<TreeResponse>("tree.json"),
  framesWorker: () => load<FramesResponse>("frames_worker.json"),
  framesHost: () => load<FramesResponse>("frames_host.json"),
  chord1: () => load<ChordResponse>("chord1.json"),
  chord2: () => load<ChordResponse>("chord2.json"),
  chordHost: () => load<ChordResponse>("chord_host.json"),
};

/** Every primitive value in a payload, stringified, for verbatim checks. */
export function primitiveStrings(value: unknown, out = new Set<string>()): Set<string> {
  if (value === null || value === undefined) {
    return out;
  }
  if (typeof value === "object") {
    for (const v of Object.values(value as Record<string, unknown>)) {
      primitiveStrings(v, out);
    }
  } else {
    out.add(String(value));
  }
  return out;
}
