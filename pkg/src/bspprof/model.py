"""Canonical data model for a profiled BSP job.

A job is described by a static rack/host/worker inclusion tree plus one
weighted digraph per superstep: per-worker compute times and per-ordered-pair
message/byte counts.  All instants and durations are integer milliseconds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Mapping


class Level(str, Enum):
    WORKER = "worker"
    HOST = "host"
    RACK = "rack"


LEVELS = (Level.WORKER, Level.HOST, Level.RACK)


@dataclass(frozen=True)
class UnitId:
    """Identifier of a computing unit at some hierarchy level."""

    level: Level
    rack: str
    host: str | None = None
    worker: str | None = None

    def __post_init__(self) -> None:
        if self.level is Level.WORKER and (not self.host or not self.worker):
            raise ValueError("worker-level id needs rack, host and worker labels")
        if self.level is Level.HOST and (not self.host or self.worker):
            raise ValueError("host-level id needs rack and host labels only")
        if self.level is Level.RACK and (self.host or self.worker):
            raise ValueError("rack-level id needs the rack label only")
        for label in (self.rack, self.host, self.worker):
            if label is None:
                continue
            if not label or "/" in label or "\n" in label:
                raise ValueError(f"bad unit label: {label!r}")

    @property
    def label(self) -> str:
        if self.level is Level.WORKER:
            assert self.worker is not None
            return self.worker
        if self.level is Level.HOST:
            assert self.host is not None
            return self.host
        return self.rack


@dataclass(frozen=True)
class InclusionTree:
    """Static rack -> host -> worker hierarchy with per-worker vertex counts.

    ``racks`` maps rack label -> host labels, ``hosts`` maps host label ->
    worker labels, ``vertex_counts`` maps worker label -> number of input
    vertices assigned to it.  Construction validates the structural
    invariants (unique workers, non-empty, well-formed labels).
    """

    racks: tuple[tuple[str, tuple[str, ...]], ...]
    hosts: tuple[tuple[str, tuple[str, ...]], ...]
    vertex_counts: Mapping[str, int]

    def __post_init__(self) -> None:
        host_to_rack: dict[str, str] = {}
        for rack, hosts in self.racks:
            _check_label(rack)
            for h in hosts:
                if h in host_to_rack:
                    raise ValueError(f"host {h!r} listed under two racks")
                host_to_rack[h] = rack
        worker_to_host: dict[str, str] = {}
        for host, workers in self.hosts:
            _check_label(host)
            if host not in host_to_rack:
                raise ValueError(f"host {host!r} not listed under any rack")
            for w in workers:
                _check_label(w)
                if w in worker_to_host:
                    raise ValueError(f"worker {w!r} listed under two hosts")
                worker_to_host[w] = host
        if set(host_to_rack) != {h for h, _ in self.hosts}:
            raise ValueError("rack/host listings disagree")
        if not worker_to_host:
            raise ValueError("tree has no workers")
        if set(self.vertex_counts) != set(worker_to_host):
            raise ValueError("vertex counts do not cover exactly the workers")
        for w, n in self.vertex_counts.items():
            if n < 0:
                raise ValueError(f"negative vertex count for worker {w!r}")
        object.__setattr__(self, "_host_of", worker_to_host)
        object.__setattr__(self, "_rack_of_host", host_to_rack)

    @staticmethod
    def build(assignments: Iterator[tuple[str, str, str, int]] | list[tuple[str, str, str, int]]) -> "InclusionTree":
        """Build a tree from (rack, host, worker, vertex_count) rows."""
        racks: dict[str, dict[str, None]] = {}
        hosts: dict[str, dict[str, None]] = {}
        counts: dict[str, int] = {}
        for rack, host, worker, n in assignments:
            racks.setdefault(rack, {}).setdefault(host, None)
            hosts.setdefault(host, {}).setdefault(worker, None)
            if worker in counts:
                raise ValueError(f"duplicate worker {worker!r}")
            counts[worker] = n
        return InclusionTree(
            racks=tuple((r, tuple(hs)) for r, hs in sorted(racks.items())),
            hosts=tuple((h, tuple(sorted(ws))) for h, ws in sorted(hosts.items())),
            vertex_counts=counts,
        )

    # Lookup helpers -------------------------------------------------

    def workers(self) -> tuple[str, ...]:
        return tuple(sorted(self._host_of))  # type: ignore[attr-defined]

    def host_of(self, worker: str) -> str:
        return self._host_of[worker]  # type: ignore[attr-defined]

    def rack_of_host(self, host: str) -> str:
        return self._rack_of_host[host]  # type: ignore[attr-defined]

    def rack_of_worker(self, worker: str) -> str:
        return self.rack_of_host(self.host_of(worker))

    def has_worker(self, worker: str) -> bool:
        return worker in self._host_of  # type: ignore[attr-defined]

    def units(self, level: Level) -> tuple[str, ...]:
        if level is Level.WORKER:
            return self.workers()
        if level is Level.HOST:
            return tuple(sorted(h for h, _ in self.hosts))
        return tuple(sorted(r for r, _ in self.racks))

    def unit_of_worker(self, worker: str, level: Level) -> str:
        if level is Level.WORKER:
            return worker
        if level is Level.HOST:
            return self.host_of(worker)
        return self.rack_of_worker(worker)

    def members(self, level: Level, label: str) -> tuple[str, ...]:
        """Workers contained in the unit ``label`` at ``level``."""
        return tuple(w for w in self.workers() if self.unit_of_worker(w, level) == label)


def _check_label(label: str) -> None:
    if not label or "/" in label or "\n" in label:
        raise ValueError(f"bad label: {label!r}")


@dataclass(frozen=True)
class SuperstepGraph:
    """One superstep's weighted digraph over workers.

    ``vertex_weights`` maps worker -> compute time in ms; workers omitted
    were idle (t = 0).  ``edge_weights`` maps (src, dst) -> (messages, bytes).
    Self-loops are allowed (intra-worker messaging).
    """

    index: int
    start: int
    vertex_weights: Mapping[str, int]
    edge_weights: Mapping[tuple[str, str], tuple[int, int]]

    def max_time(self) -> int:
        return max(self.vertex_weights.values(), default=0)

    def total_messages(self) -> int:
        return sum(m for m, _ in self.edge_weights.values())

    def total_bytes(self) -> int:
        return sum(b for _, b in self.edge_weights.values())


@dataclass(frozen=True)
class TraceJob:
    """A complete profiled job: tree, ordered supersteps, metadata."""

    job_id: str
    tree: InclusionTree
    supersteps: tuple[SuperstepGraph, ...]
    metadata: Mapping[str, str] = field(default_factory=dict)

    @property
    def superstep_count(self) -> int:
        return len(self.supersteps)


@dataclass(frozen=True)
class JobStats:
    total_runtime_ms: int
    superstep_count: int
    total_messages: int
    total_bytes: int

    def as_dict(self) -> dict[str, int]:
        return {
            "total_runtime_ms": self.total_runtime_ms,
            "superstep_count": self.superstep_count,
            "total_messages": self.total_messages,
            "total_bytes": self.total_bytes,
        }


@dataclass(frozen=True)
class Violation:
    code: str
    superstep: int | None
    subject: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    def __bool__(self) -> bool:  # truthy when there are violations
        return bool(self.violations)

    @property
    def ok(self) -> bool:
        return not self.violations


class InvalidJobError(ValueError):
    """Raised when an operation requiring a valid job receives a bad one."""

    def __init__(self, report: ValidationReport):
        super().__init__(f"job fails validation with {len(report.violations)} violation(s)")
        self.report = report


def validate_trace(job: TraceJob) -> ValidationReport:
    """Check a parsed job against the structural invariants.

    Violations are data, not errors: the report lists each one with the
    superstep index and the offending unit or edge.
    """
    out: list[Violation] = []
    tree = job.tree
    for pos, g in enumerate(job.supersteps, start=1):
        if g.index != pos:
            out.append(Violation("index", g.index, str(g.index),
                                 f"superstep indices must be consecutive from 1, got {g.index} at position {pos}"))
    if job.supersteps and job.supersteps[0].start < 0:
        out.append(Violation("start", 1, str(job.supersteps[0].start),
                             "first superstep starts before instant 0"))
    for g in job.supersteps:
        for w, t in g.vertex_weights.items():
            if not tree.has_worker(w):
                out.append(Violation("membership", g.index, w,
                                     f"worker {w!r} not in the inclusion tree"))
            if t < 0:
                out.append(Violation("negative_time", g.index, w,
                                     f"t({w}) = {t} < 0"))
        for (u, v), (m, b) in g.edge_weights.items():
            for w in {u, v}:
                if not tree.has_worker(w):
                    out.append(Violation("membership", g.index, w,
                                         f"worker {w!r} not in the inclusion tree"))
            if m < 0 or b < 0:
                out.append(Violation("negative_traffic", g.index, f"{u}->{v}",
                                     f"m={m}, b={b}"))
            elif (m == 0) != (b == 0):
                out.append(Violation("zero_mismatch", g.index, f"{u}->{v}",
                                     f"m={m} and b={b} must be zero together"))
    for prev, nxt in zip(job.supersteps, job.supersteps[1:]):
        if prev.start + prev.max_time() > nxt.start:
            out.append(Violation("barrier", prev.index, str(nxt.start),
                                 f"s_{prev.index} + max t = {prev.start + prev.max_time()}"
                                 f" > s_{nxt.index} = {nxt.start}"))
    return ValidationReport(tuple(out))


def job_stats(job: TraceJob) -> JobStats:
    """Exact whole-job totals.  Rejects jobs that fail validation."""
    report = validate_trace(job)
    if not report.ok:
        raise InvalidJobError(report)
    last = job.supersteps[-1] if job.supersteps else None
    runtime = last.start + last.max_time() if last else 0
    return JobStats(
        total_runtime_ms=runtime,
        superstep_count=len(job.supersteps),
        total_messages=sum(g.total_messages() for g in job.supersteps),
        total_bytes=sum(g.total_bytes() for g in job.supersteps),
    )
