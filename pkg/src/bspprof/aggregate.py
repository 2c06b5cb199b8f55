"""Temporal and hierarchy aggregation, unit filtering, and derived series.

Frames sum the underlying superstep weights, so the frame time at host or
rack level is the *sum* of member-worker times; the wall-clock reading is
lost above worker level and the trend charts document it as total compute
time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .model import InclusionTree, Level, TraceJob


@dataclass(frozen=True)
class FrameGraph:
    """Aggregated weighted digraph for supersteps ``first..last`` at ``level``."""

    first: int
    last: int
    level: Level
    units: tuple[str, ...]
    times: Mapping[str, int]
    edges: Mapping[tuple[str, str], tuple[int, int]]
    start: int = 0

    def time_of(self, u: str) -> int:
        return self.times.get(u, 0)

    def msgs_out(self, u: str) -> int:
        return sum(m for (a, _), (m, _) in self.edges.items() if a == u)

    def msgs_in(self, u: str) -> int:
        return sum(m for (_, b), (m, _) in self.edges.items() if b == u)

    def bytes_out(self, u: str) -> int:
        return sum(b for (a, _), (_, b) in self.edges.items() if a == u)

    def bytes_in(self, u: str) -> int:
        return sum(b for (_, v), (_, b) in self.edges.items() if v == u)

    def total_messages(self) -> int:
        return sum(m for m, _ in self.edges.values())

    def total_bytes(self) -> int:
        return sum(b for _, b in self.edges.values())


@dataclass(frozen=True)
class FilterSpec:
    """Excluded units (any level, applied with downward closure through the
    tree) plus a minimum whole-job message total per displayed unit."""

    excluded: frozenset[str] = frozenset()
    min_total_messages: int = 0


@dataclass(frozen=True)
class TrendSeries:
    units: tuple[str, ...]
    frames: tuple[tuple[int, int], ...]          # (first, last) per frame
    starts: tuple[int, ...]
    time_ms: Mapping[str, tuple[int, ...]]
    msgs_in: Mapping[str, tuple[int, ...]]
    msgs_out: Mapping[str, tuple[int, ...]]
    bytes_in: Mapping[str, tuple[int, ...]]
    bytes_out: Mapping[str, tuple[int, ...]]


def frame_count(k: int, frame_size: int) -> int:
    return -(-k // frame_size)


def temporal_aggregate(job: TraceJob, frame_size: int) -> list[FrameGraph]:
    """Group consecutive supersteps into frames of ``frame_size`` (the last
    frame takes the remainder) and sum all weights, at worker level."""
    k = job.superstep_count
    if frame_size < 1 or frame_size > k:
        raise ValueError(f"frame_size must be in 1..{k}, got {frame_size}")
    workers = job.tree.workers()
    frames: list[FrameGraph] = []
    for lo in range(0, k, frame_size):
        chunk = job.supersteps[lo:lo + frame_size]
        times: dict[str, int] = {}
        edges: dict[tuple[str, str], tuple[int, int]] = {}
        for g in chunk:
            for w, t in g.vertex_weights.items():
                times[w] = times.get(w, 0) + t
            for key, (m, b) in g.edge_weights.items():
                pm, pb = edges.get(key, (0, 0))
                edges[key] = (pm + m, pb + b)
        frames.append(FrameGraph(first=chunk[0].index, last=chunk[-1].index,
                                 level=Level.WORKER, units=workers,
                                 times=times, edges=edges, start=chunk[0].start))
    return frames


def hierarchy_aggregate(frame: FrameGraph, level: Level,
                        tree: InclusionTree) -> FrameGraph:
    """Merge worker-level data up to ``level``; intra-unit edges become
    self-loops.  Worker level is the identity."""
    if frame.level is not Level.WORKER:
        raise ValueError("hierarchy_aggregate expects a worker-level frame")
    if level is Level.WORKER:
        return frame
    for w in frame.units:
        if not tree.has_worker(w):
            raise ValueError(f"unit {w!r} missing from tree")

    def up(worker: str) -> str:
        return tree.unit_of_worker(worker, level)

    units = tuple(sorted({up(w) for w in frame.units}))
    times: dict[str, int] = {}
    for w, t in frame.times.items():
        times[up(w)] = times.get(up(w), 0) + t
    edges: dict[tuple[str, str], tuple[int, int]] = {}
    for (a, b), (m, bb) in frame.edges.items():
        key = (up(a), up(b))
        pm, pb = edges.get(key, (0, 0))
        edges[key] = (pm + m, pb + bb)
    return FrameGraph(first=frame.first, last=frame.last, level=level,
                      units=units, times=times, edges=edges, start=frame.start)


def excluded_units(spec: FilterSpec, tree: InclusionTree, level: Level) -> set[str]:
    """Units at ``level`` removed by ``spec``'s exclusions, applying downward
    closure (excluding a host excludes its workers, etc.)."""
    out: set[str] = set()
    for label in tree.units(level):
        chain = {label}
        if level is Level.WORKER:
            chain.add(tree.host_of(label))
            chain.add(tree.rack_of_worker(label))
        elif level is Level.HOST:
            chain.add(tree.rack_of_host(label))
        if chain & spec.excluded:
            out.add(label)
    return out


def job_unit_totals(job: TraceJob, level: Level) -> dict[str, int]:
    """Whole-job in+out message totals per unit at ``level`` (self-loop
    traffic counts once on each side), used by threshold filtering."""
    whole = hierarchy_aggregate(
        temporal_aggregate(job, job.superstep_count)[0], level, job.tree)
    return {u: whole.msgs_in(u) + whole.msgs_out(u) for u in whole.units}


def apply_filter(frame: FrameGraph, spec: FilterSpec, tree: InclusionTree,
                 job_totals: Mapping[str, int] | None = None) -> FrameGraph:
    """Drop excluded and below-threshold units and their incident edges.

    ``job_totals`` are the whole-job per-unit message totals at the frame's
    level; omit them to skip threshold filtering.
    """
    removed = excluded_units(spec, tree, frame.level)
    if spec.min_total_messages > 0 and job_totals is not None:
        removed |= {u for u in frame.units
                    if job_totals.get(u, 0) < spec.min_total_messages}
    if not removed:
        return frame
    units = tuple(u for u in frame.units if u not in removed)
    times = {u: t for u, t in frame.times.items() if u not in removed}
    edges = {(a, b): w for (a, b), w in frame.edges.items()
             if a not in removed and b not in removed}
    return FrameGraph(first=frame.first, last=frame.last, level=frame.level,
                      units=units, times=times, edges=edges, start=frame.start)


def trend_series(frames: Sequence[FrameGraph]) -> TrendSeries:
    """Per-unit, per-frame time and in/out message and byte series.

    Self-loop traffic counts as both incoming and outgoing for its unit.
    All frames must share level and unit set.
    """
    if not frames:
        raise ValueError("no frames")
    units = frames[0].units
    for f in frames[1:]:
        if f.level is not frames[0].level or f.units != units:
            raise ValueError("frames disagree on level or unit set")
    return TrendSeries(
        units=units,
        frames=tuple((f.first, f.last) for f in frames),
        starts=tuple(f.start for f in frames),
        time_ms={u: tuple(f.time_of(u) for f in frames) for u in units},
        msgs_in={u: tuple(f.msgs_in(u) for f in frames) for u in units},
        msgs_out={u: tuple(f.msgs_out(u) for f in frames) for u in units},
        bytes_in={u: tuple(f.bytes_in(u) for f in frames) for u in units},
        bytes_out={u: tuple(f.bytes_out(u) for f in frames) for u in units},
    )


@dataclass(frozen=True)
class WeightNode:
    label: str
    level: str
    weight: int
    children: tuple["WeightNode", ...] = ()

    def as_dict(self) -> dict:
        return {"label": self.label, "level": self.level, "weight": self.weight,
                "children": [c.as_dict() for c in self.children]}


def treemap_weights(tree: InclusionTree) -> WeightNode:
    """Nested vertex-count weights: leaves are workers, internal nodes sum
    their children.  Feeds the squarified treemap in the UI."""
    host_workers = dict(tree.hosts)
    racks = []
    for rack, hosts in tree.racks:
        host_nodes = []
        for h in hosts:
            leaves = tuple(WeightNode(w, "worker", tree.vertex_counts[w])
                           for w in host_workers[h])
            host_nodes.append(WeightNode(h, "host", sum(n.weight for n in leaves), leaves))
        racks.append(WeightNode(rack, "rack", sum(n.weight for n in host_nodes),
                                tuple(host_nodes)))
    return WeightNode("cluster", "root", sum(r.weight for r in racks), tuple(racks))
