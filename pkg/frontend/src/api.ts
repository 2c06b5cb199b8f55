/**
 * Typed client for the profiling service. The UI performs no aggregation
 * arithmetic: every number it shows comes verbatim from these payloads.
 */

export interface JobStats {
  total_runtime_ms: number;
  superstep_count: number;
  total_messages: number;
  total_bytes: number;
}

export interface JobSummary {
  job_id: string;
  metadata: Record<string, string>;
  stats: JobStats;
}

export interface JobsResponse {
  jobs: JobSummary[];
}

export interface TreemapNode {
  label: string;
  level: string;
  weight: number;
  children: TreemapNode[];
}

export interface WorkerRow {
  rack: string;
  host: string;
  worker: string;
  vertices: number;
  color: string;
}

export interface TreeResponse {
  workers: WorkerRow[];
  treemap: TreemapNode;
}

export interface UnitSeries {
  time_ms: number[];
  msgs_in: number[];
  msgs_out: number[];
  bytes_in: number[];
  bytes_out: number[];
}

export interface FrameDescriptor {
  index: number;
  first: number;
  last: number;
  start: number;
}

export interface FramesResponse {
  job_id: string;
  frame_size: number;
  level: string;
  kind: string;
  page: number;
  per_page: number;
  frame_count: number;
  frames: FrameDescriptor[];
  units: string[];
  colors: Record<string, string>;
  series: Record<string, UnitSeries>;
}

export interface Arc {
  unit: string;
  start: number;
  end: number;
  self_start: number;
  self_end: number;
  in_start: number;
  in_end: number;
  out_start: number;
  out_end: number;
}

export interface RibbonShape {
  src: string;
  dst: string;
  weight: number;
  src_start: number;
  src_end: number;
  dst_start: number;
  dst_end: number;
}

export interface RingBand {
  level: string;
  label: string;
  start: number;
  end: number;
}

export interface ChordResponse {
  level: string;
  kind: string;
  degenerate: boolean;
  units: string[];
  colors: Record<string, string>;
  arcs: Arc[];
  ribbons: RibbonShape[];
  rings: RingBand[];
}

export interface FrameQuery {
  frame_size: number;
  level: string;
  kind: string;
  page?: number;
  per_page?: number;
  exclude?: string[];
  min_msgs?: number;
}

function queryString(query: FrameQuery): string {
  const params = new URLSearchParams();
  params.set("frame_size", String(query.frame_size));
  params.set("level", query.level);
  params.set("kind", query.kind);
  if (query.page !== undefined) params.set("page", String(query.page));
  if (query.per_page !== undefined) params.set("per_page", String(query.per_page));
  if (query.exclude && query.exclude.length > 0) {
    params.set("exclude", query.exclude.join(","));
  }
  if (query.min_msgs) params.set("min_msgs", String(query.min_msgs));
  return params.toString();
}

export type FetchJson = (url: string) => Promise<unknown>;

const defaultFetch: FetchJson = async (url) => {
  const resp = await fetch(url);
  if (!resp.ok) {
    throw new Error(`GET ${url} failed with ${resp.status}`);
  }
  return resp.json();
};

/**
 * Discards out-of-order responses. Each logical channel (one per view
 * data source) hands out monotonically increasing tokens; a response is
 * applied only if its token is still the newest for that channel.
 */
export class RequestGate {
  private latest = new Map<string, number>();
  private counter = 0;

  issue(channel: string): number {
    const token = ++this.counter;
    this.latest.set(channel, token);
    return token;
  }

  isCurrent(channel: string, token: number): boolean {
    return this.latest.get(channel) === token;
  }
}

export class ApiClient {
  constructor(
    private readonly base: string = "",
    private readonly fetchJson: FetchJson = defaultFetch,
  ) {}

  async jobs(): Promise<JobsResponse> {
    return (await this.fetchJson(`${this.base}/jobs`)) as JobsResponse;
  }

  async stats(jobId: string): Promise<JobStats> {
    return (await this.fetchJson(`${this.base}/jobs/${jobId}/stats`)) as JobStats;
  }

  async tree(jobId: string): Promise<TreeResponse> {
    return (await this.fetchJson(`${this.base}/jobs/${jobId}/tree`)) as TreeResponse;
  }

  async frames(jobId: string, query: FrameQuery): Promise<FramesResponse> {
    const url = `${this.base}/jobs/${jobId}/frames?${queryString(query)}`;
    return (await this.fetchJson(url)) as FramesResponse;
  }

  async chord(jobId: string, frame: number, query: FrameQuery): Promise<ChordResponse> {
    const url = `${this.base}/jobs/${jobId}/frame/${frame}/chord?${queryString(query)}`;
    return (await this.fetchJson(url)) as ChordResponse;
  }
}
