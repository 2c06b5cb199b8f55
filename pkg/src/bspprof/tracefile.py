"""Line-oriented trace file format (UTF-8 JSONL), with a canonical form.

Two files describe a job:

* ``topology.jsonl`` — one record per worker:
  ``{"rack": R, "host": H, "worker": W, "vertices": N}``
  Canonical order: sorted by (rack, host, worker).

* ``trace.jsonl`` — two record kinds:
  ``{"kind":"time","superstep":i,"start":s_i,"worker":W,"ms":t}``
  ``{"kind":"msg","superstep":i,"src":W1,"dst":W2,"count":m,"bytes":b}``
  Canonical order: sorted by (superstep, kind with "time" first, worker or
  (src, dst) lexicographic).  Every "time" record of a superstep carries the
  superstep's start instant and all of them must agree.

Serialization is bit-exact: fixed key order, compact separators, one record
per line, trailing newline.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable

from .model import InclusionTree, SuperstepGraph, TraceJob

TOPOLOGY_FILENAME = "topology.jsonl"
TRACE_FILENAME = "trace.jsonl"


class TraceParseError(ValueError):
    """A malformed trace or topology line; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def _dumps(obj: dict) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


# Topology ----------------------------------------------------------------

def serialize_topology(tree: InclusionTree) -> str:
    rows = []
    for worker in tree.workers():
        host = tree.host_of(worker)
        rows.append((tree.rack_of_host(host), host, worker, tree.vertex_counts[worker]))
    rows.sort()
    return "".join(
        _dumps({"rack": r, "host": h, "worker": w, "vertices": n}) + "\n"
        for r, h, w, n in rows
    )


def parse_topology(text: str) -> InclusionTree:
    rows: list[tuple[str, str, str, int]] = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise TraceParseError(line_no, f"invalid JSON: {exc.msg}") from exc
        try:
            rack, host, worker = rec["rack"], rec["host"], rec["worker"]
            vertices = rec["vertices"]
        except (KeyError, TypeError) as exc:
            raise TraceParseError(line_no, f"missing topology field: {exc}") from exc
        if not isinstance(vertices, int) or isinstance(vertices, bool):
            raise TraceParseError(line_no, "vertices must be an integer")
        rows.append((str(rack), str(host), str(worker), vertices))
    try:
        return InclusionTree.build(rows)
    except ValueError as exc:
        raise TraceParseError(len(text.splitlines()) or 1, str(exc)) from exc


# Trace -------------------------------------------------------------------

def serialize_trace(supersteps: Iterable[SuperstepGraph]) -> str:
    lines: list[str] = []
    for g in supersteps:
        for w in sorted(g.vertex_weights):
            lines.append(_dumps({"kind": "time", "superstep": g.index,
                                 "start": g.start, "worker": w,
                                 "ms": g.vertex_weights[w]}))
        for (u, v) in sorted(g.edge_weights):
            m, b = g.edge_weights[(u, v)]
            lines.append(_dumps({"kind": "msg", "superstep": g.index,
                                 "src": u, "dst": v, "count": m, "bytes": b}))
    return "".join(line + "\n" for line in lines)


def serialize_job(job: TraceJob) -> tuple[str, str]:
    """(topology text, trace text) in canonical form."""
    return serialize_topology(job.tree), serialize_trace(job.supersteps)


def parse_trace(text: str) -> tuple[SuperstepGraph, ...]:
    """Parse trace records into superstep graphs, in any record order.

    Duplicate time/msg keys within a superstep and disagreeing start
    instants are parse errors; everything else is left to validate_trace.
    """
    starts: dict[int, int] = {}
    times: dict[int, dict[str, int]] = {}
    edges: dict[int, dict[tuple[str, str], tuple[int, int]]] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise TraceParseError(line_no, f"invalid JSON: {exc.msg}") from exc
        kind = rec.get("kind")
        try:
            i = int(rec["superstep"])
        except (KeyError, TypeError, ValueError) as exc:
            raise TraceParseError(line_no, "missing or bad superstep index") from exc
        if kind == "time":
            try:
                start, worker, ms = int(rec["start"]), str(rec["worker"]), int(rec["ms"])
            except (KeyError, TypeError, ValueError) as exc:
                raise TraceParseError(line_no, f"bad time record: {exc}") from exc
            if i in starts and starts[i] != start:
                raise TraceParseError(line_no,
                                      f"superstep {i} start {start} disagrees with {starts[i]}")
            starts[i] = start
            bucket = times.setdefault(i, {})
            if worker in bucket:
                raise TraceParseError(line_no, f"duplicate time record for {worker!r} in superstep {i}")
            bucket[worker] = ms
        elif kind == "msg":
            try:
                key = (str(rec["src"]), str(rec["dst"]))
                m, b = int(rec["count"]), int(rec["bytes"])
            except (KeyError, TypeError, ValueError) as exc:
                raise TraceParseError(line_no, f"bad msg record: {exc}") from exc
            bucket_e = edges.setdefault(i, {})
            if key in bucket_e:
                raise TraceParseError(line_no,
                                      f"duplicate msg record for {key[0]}->{key[1]} in superstep {i}")
            bucket_e[key] = (m, b)
        else:
            raise TraceParseError(line_no, f"unknown record kind {kind!r}")
    indices = sorted(set(times) | set(edges))
    out = []
    for i in indices:
        if i not in starts:
            first_bad = min(edges.get(i, {}), default=None)
            raise TraceParseError(1, f"superstep {i} has msg records but no time record"
                                     f" (first edge {first_bad}); start instant unknown")
        out.append(SuperstepGraph(index=i, start=starts[i],
                                  vertex_weights=times.get(i, {}),
                                  edge_weights=edges.get(i, {})))
    return tuple(out)


# Whole-job convenience ---------------------------------------------------

def load_job(directory: str | Path, job_id: str = "",
             metadata: dict[str, str] | None = None) -> TraceJob:
    directory = Path(directory)
    tree = parse_topology((directory / TOPOLOGY_FILENAME).read_text(encoding="utf-8"))
    supersteps = parse_trace((directory / TRACE_FILENAME).read_text(encoding="utf-8"))
    return TraceJob(job_id=job_id or directory.name, tree=tree,
                    supersteps=supersteps, metadata=metadata or {})


def write_job(job: TraceJob, directory: str | Path) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    topo, trace = serialize_job(job)
    (directory / TOPOLOGY_FILENAME).write_text(topo, encoding="utf-8")
    (directory / TRACE_FILENAME).write_text(trace, encoding="utf-8")
