"""Persistent job registry: a keyed document store over a directory.

Each ingested job lives under ``<root>/jobs/<job_id>/`` as the canonical
topology and trace files plus a ``record.json`` with metadata, precomputed
stats, and the worker-level circular orders for both weight kinds.
"""

from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import dataclass
from pathlib import Path

from . import tracefile
from .aggregate import hierarchy_aggregate, temporal_aggregate
from .layout import CircularOrder, WeightKind, circular_order, group_keys
from .model import (InvalidJobError, JobStats, Level, TraceJob, job_stats,
                    validate_trace)

RECORD_FILENAME = "record.json"


class IngestError(ValueError):
    pass


class DuplicateJobError(IngestError):
    """Same job_id re-ingested with different content."""


@dataclass(frozen=True)
class JobRecord:
    job_id: str
    metadata: dict[str, str]
    stats: JobStats
    content_hash: str
    orders: dict[str, tuple[str, ...]]  # weight kind -> worker order

    def as_dict(self) -> dict:
        return {
            "job_id": self.job_id,
            "metadata": self.metadata,
            "stats": self.stats.as_dict(),
            "content_hash": self.content_hash,
            "orders": {k: list(v) for k, v in self.orders.items()},
        }


class JobStore:
    """Filesystem-backed store; safe for concurrent reads, ingest is
    serialized per store."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        (self.root / "jobs").mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    def _job_dir(self, job_id: str) -> Path:
        if not job_id or "/" in job_id or job_id.startswith("."):
            raise IngestError(f"bad job id {job_id!r}")
        return self.root / "jobs" / job_id

    def list_jobs(self) -> list[JobRecord]:
        out = []
        for record_path in sorted(self.root.glob("jobs/*/record.json")):
            out.append(self._read_record(record_path))
        return out

    def get_record(self, job_id: str) -> JobRecord | None:
        path = self._job_dir(job_id) / RECORD_FILENAME
        if not path.exists():
            return None
        return self._read_record(path)

    def load_job(self, job_id: str) -> TraceJob:
        record = self.get_record(job_id)
        if record is None:
            raise KeyError(job_id)
        return tracefile.load_job(self._job_dir(job_id), job_id=job_id,
                                  metadata=record.metadata)

    @staticmethod
    def _read_record(path: Path) -> JobRecord:
        raw = json.loads(path.read_text(encoding="utf-8"))
        return JobRecord(
            job_id=raw["job_id"],
            metadata=raw["metadata"],
            stats=JobStats(**raw["stats"]),
            content_hash=raw["content_hash"],
            orders={k: tuple(v) for k, v in raw["orders"].items()},
        )

    # Ingest --------------------------------------------------------

    def ingest(self, topology_text: str, trace_text: str,
               job_id: str = "", metadata: dict[str, str] | None = None) -> JobRecord:
        """Validate, canonicalize, and persist a job.

        Idempotent per content hash: re-ingesting identical content returns
        the stored record; the same job_id with different content is an
        error.  Stats and both circular orders are computed here so reads
        never recompute them.
        """
        tree = tracefile.parse_topology(topology_text)
        supersteps = tracefile.parse_trace(trace_text)
        job = TraceJob(job_id=job_id or "pending", tree=tree,
                       supersteps=supersteps, metadata=metadata or {})
        report = validate_trace(job)
        if not report.ok:
            raise InvalidJobError(report)

        canon_topo, canon_trace = tracefile.serialize_job(job)
        digest = hashlib.sha256(
            canon_topo.encode() + b"\x00" + canon_trace.encode()).hexdigest()
        if not job_id:
            job_id = f"job-{digest[:12]}"

        with self._lock:
            existing = self.get_record(job_id)
            if existing is not None:
                if existing.content_hash == digest:
                    return existing
                raise DuplicateJobError(
                    f"job {job_id!r} already stored with different content")

            stats = job_stats(job)
            whole = temporal_aggregate(job, job.superstep_count)[0]
            orders = {
                kind.value: circular_order(whole, tree, kind).units
                for kind in WeightKind
            }
            record = JobRecord(job_id=job_id, metadata=dict(metadata or {}),
                               stats=stats, content_hash=digest, orders=orders)
            job_dir = self._job_dir(job_id)
            job_dir.mkdir(parents=True, exist_ok=True)
            (job_dir / tracefile.TOPOLOGY_FILENAME).write_text(canon_topo, encoding="utf-8")
            (job_dir / tracefile.TRACE_FILENAME).write_text(canon_trace, encoding="utf-8")
            (job_dir / RECORD_FILENAME).write_text(
                json.dumps(record.as_dict(), indent=2, sort_keys=True) + "\n",
                encoding="utf-8")
            return record

    def worker_order(self, job_id: str, kind: WeightKind) -> CircularOrder:
        """Rehydrate the precomputed worker-level order for a job."""
        record = self.get_record(job_id)
        if record is None:
            raise KeyError(job_id)
        job = self.load_job(job_id)
        return CircularOrder(level=Level.WORKER,
                             units=record.orders[kind.value],
                             groups=group_keys(job.tree, Level.WORKER))
