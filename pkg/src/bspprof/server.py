"""HTTP/JSON query service over the job store.

All GET endpoints are pure functions of the stored trace and the query
string: identical queries return byte-identical bodies.  Frame indices in
URLs are 1-based.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, Form, HTTPException, Response, UploadFile
from fastapi.staticfiles import StaticFiles

from .aggregate import (FilterSpec, FrameGraph, apply_filter, frame_count,
                        hierarchy_aggregate, job_unit_totals, temporal_aggregate,
                        treemap_weights, trend_series)
from .layout import ChordLayout, WeightKind, chord_geometry, circular_order
from .model import InvalidJobError, Level, TraceJob
from .store import DuplicateJobError, IngestError, JobStore
from .svgexport import unit_color
from .tracefile import TraceParseError

DEFAULT_PER_PAGE = 20
MAX_PER_PAGE = 50


def _json_response(payload: dict, status_code: int = 200) -> Response:
    body = json.dumps(payload, separators=(",", ":"), ensure_ascii=False)
    return Response(content=body, media_type="application/json",
                    status_code=status_code)


@dataclass(frozen=True)
class QueryParams:
    frame_size: int
    level: Level
    kind: WeightKind
    filter_spec: FilterSpec
    page: int
    per_page: int

    @property
    def cache_key(self) -> tuple:
        return (self.frame_size, self.level.value, self.kind.value,
                tuple(sorted(self.filter_spec.excluded)),
                self.filter_spec.min_total_messages)


def _parse_params(job: TraceJob, frame_size: int, level: str, kind: str,
                  page: int, per_page: int, exclude: str, min_msgs: int) -> QueryParams:
    k = job.superstep_count
    if frame_size < 1 or frame_size > k:
        raise HTTPException(400, f"frame_size must be in 1..{k}")
    try:
        lvl = Level(level)
    except ValueError:
        raise HTTPException(400, f"unknown level {level!r}")
    try:
        wk = WeightKind(kind)
    except ValueError:
        raise HTTPException(400, f"unknown weight kind {kind!r}")
    if page < 1:
        raise HTTPException(400, "page must be >= 1")
    if per_page < 1 or per_page > MAX_PER_PAGE:
        raise HTTPException(400, f"per_page must be in 1..{MAX_PER_PAGE}")
    if min_msgs < 0:
        raise HTTPException(400, "min_msgs must be >= 0")
    excluded = frozenset(x for x in exclude.split(",") if x) if exclude else frozenset()
    return QueryParams(frame_size=frame_size, level=lvl, kind=wk,
                       filter_spec=FilterSpec(excluded=excluded,
                                              min_total_messages=min_msgs),
                       page=page, per_page=per_page)


class _Engine:
    """Aggregation/layout pipeline with per-job caches."""

    def __init__(self, store: JobStore):
        self.store = store
        self._lock = threading.Lock()
        self._jobs: dict[str, TraceJob] = {}
        self._orders: dict[tuple, tuple[str, ...]] = {}
        self._chords: dict[tuple, bytes] = {}

    def job(self, job_id: str) -> TraceJob:
        with self._lock:
            cached = self._jobs.get(job_id)
        if cached is not None:
            return cached
        try:
            job = self.store.load_job(job_id)
        except KeyError:
            raise HTTPException(404, f"unknown job {job_id!r}")
        with self._lock:
            self._jobs[job_id] = job
        return job

    def frames(self, job: TraceJob, params: QueryParams) -> list[FrameGraph]:
        worker_frames = temporal_aggregate(job, params.frame_size)
        leveled = [hierarchy_aggregate(f, params.level, job.tree)
                   for f in worker_frames]
        totals = job_unit_totals(job, params.level)
        return [apply_filter(f, params.filter_spec, job.tree, totals)
                for f in leveled]

    def order_units(self, job: TraceJob, level: Level, kind: WeightKind) -> tuple[str, ...]:
        key = (job.job_id, level.value, kind.value)
        with self._lock:
            cached = self._orders.get(key)
        if cached is not None:
            return cached
        record = self.store.get_record(job.job_id)
        if level is Level.WORKER and record is not None:
            units = record.orders[kind.value]
        else:
            whole = hierarchy_aggregate(
                temporal_aggregate(job, job.superstep_count)[0], level, job.tree)
            units = circular_order(whole, job.tree, kind).units
        with self._lock:
            self._orders[key] = units
        return units

    def chord_bytes(self, job: TraceJob, params: QueryParams, frame_no: int) -> bytes:
        key = (job.job_id, frame_no) + params.cache_key
        with self._lock:
            cached = self._chords.get(key)
        if cached is not None:
            return cached
        layout = self.chord_layout(job, params, frame_no)
        body = json.dumps(_chord_payload(layout), separators=(",", ":")).encode()
        with self._lock:
            self._chords[key] = body
        return body

    def chord_layout(self, job: TraceJob, params: QueryParams, frame_no: int) -> ChordLayout:
        frames = self.frames(job, params)
        if frame_no < 1 or frame_no > len(frames):
            raise HTTPException(404, f"frame {frame_no} out of 1..{len(frames)}")
        from .layout import CircularOrder, group_keys
        order = CircularOrder(level=params.level,
                              units=self.order_units(job, params.level, params.kind),
                              groups=group_keys(job.tree, params.level))
        return chord_geometry(frames[frame_no - 1], order, params.kind)


def _chord_payload(layout: ChordLayout) -> dict:
    return {
        "level": layout.level.value,
        "kind": layout.kind.value,
        "degenerate": layout.degenerate,
        "units": list(layout.units),
        "colors": {u: unit_color(u) for u in layout.units},
        "arcs": [
            {"unit": a.unit, "start": a.start, "end": a.end,
             "self_start": a.self_start, "self_end": a.self_end,
             "in_start": a.in_start, "in_end": a.in_end,
             "out_start": a.out_start, "out_end": a.out_end}
            for a in layout.arcs
        ],
        "ribbons": [
            {"src": r.src, "dst": r.dst, "weight": r.weight,
             "src_start": r.src_start, "src_end": r.src_end,
             "dst_start": r.dst_start, "dst_end": r.dst_end}
            for r in layout.ribbons
        ],
        "rings": [
            {"level": b.level.value, "label": b.label,
             "start": b.start, "end": b.end}
            for b in layout.rings
        ],
    }


def create_app(store_root: str | Path, static_dir: str | Path | None = None) -> FastAPI:
    store = JobStore(store_root)
    engine = _Engine(store)
    app = FastAPI(title="bspprof", docs_url=None, redoc_url=None)

    @app.get("/jobs")
    def list_jobs() -> Response:
        return _json_response({
            "jobs": [
                {"job_id": r.job_id, "metadata": r.metadata,
                 "stats": r.stats.as_dict()}
                for r in store.list_jobs()
            ]
        })

    @app.get("/jobs/{job_id}/stats")
    def get_stats(job_id: str) -> Response:
        record = store.get_record(job_id)
        if record is None:
            raise HTTPException(404, f"unknown job {job_id!r}")
        return _json_response(record.stats.as_dict())

    @app.get("/jobs/{job_id}/tree")
    def get_tree(job_id: str) -> Response:
        job = engine.job(job_id)
        tree = job.tree
        return _json_response({
            "workers": [
                {"rack": tree.rack_of_worker(w), "host": tree.host_of(w),
                 "worker": w, "vertices": tree.vertex_counts[w],
                 "color": unit_color(w)}
                for w in tree.workers()
            ],
            "treemap": treemap_weights(tree).as_dict(),
        })

    @app.get("/jobs/{job_id}/frames")
    def get_frames(job_id: str, frame_size: int = 1, level: str = "worker",
                   kind: str = "messages", page: int = 1,
                   per_page: int = DEFAULT_PER_PAGE, exclude: str = "",
                   min_msgs: int = 0) -> Response:
        job = engine.job(job_id)
        params = _parse_params(job, frame_size, level, kind, page, per_page,
                               exclude, min_msgs)
        frames = engine.frames(job, params)
        lo = (params.page - 1) * params.per_page
        page_frames = frames[lo:lo + params.per_page]
        series = trend_series(frames) if frames else None
        sl = slice(lo, lo + params.per_page)
        payload = {
            "job_id": job_id,
            "frame_size": params.frame_size,
            "level": params.level.value,
            "kind": params.kind.value,
            "page": params.page,
            "per_page": params.per_page,
            "frame_count": frame_count(job.superstep_count, params.frame_size),
            "frames": [
                {"index": lo + i + 1, "first": f.first, "last": f.last,
                 "start": f.start}
                for i, f in enumerate(page_frames)
            ],
            "units": list(series.units) if series else [],
            "colors": {u: unit_color(u) for u in (series.units if series else ())},
            "series": {
                u: {
                    "time_ms": list(series.time_ms[u][sl]),
                    "msgs_in": list(series.msgs_in[u][sl]),
                    "msgs_out": list(series.msgs_out[u][sl]),
                    "bytes_in": list(series.bytes_in[u][sl]),
                    "bytes_out": list(series.bytes_out[u][sl]),
                }
                for u in (series.units if series else ())
            },
        }
        return _json_response(payload)

    @app.get("/jobs/{job_id}/frame/{frame_no}/chord")
    def get_chord(job_id: str, frame_no: int, frame_size: int = 1,
                  level: str = "worker", kind: str = "messages",
                  exclude: str = "", min_msgs: int = 0) -> Response:
        job = engine.job(job_id)
        params = _parse_params(job, frame_size, level, kind, 1,
                               DEFAULT_PER_PAGE, exclude, min_msgs)
        body = engine.chord_bytes(job, params, frame_no)
        return Response(content=body, media_type="application/json")

    @app.post("/jobs", status_code=201)
    def post_job(topology: UploadFile, trace: UploadFile,
                 job_id: str = Form(""), algorithm: str = Form(""),
                 input_graph: str = Form("")) -> Response:
        metadata = {}
        if algorithm:
            metadata["algorithm"] = algorithm
        if input_graph:
            metadata["input_graph"] = input_graph
        try:
            record = store.ingest(topology.file.read().decode("utf-8"),
                                  trace.file.read().decode("utf-8"),
                                  job_id=job_id, metadata=metadata)
        except TraceParseError as exc:
            raise HTTPException(422, f"parse failure: {exc}")
        except InvalidJobError as exc:
            raise HTTPException(422, {
                "message": "validation failed",
                "violations": [
                    {"code": v.code, "superstep": v.superstep,
                     "subject": v.subject, "message": v.message}
                    for v in exc.report.violations
                ],
            })
        except DuplicateJobError as exc:
            raise HTTPException(409, str(exc))
        except IngestError as exc:
            raise HTTPException(400, str(exc))
        return _json_response(record.as_dict(), status_code=201)

    if static_dir is not None:
        app.mount("/ui", StaticFiles(directory=str(static_dir), html=True),
                  name="ui")

    return app
