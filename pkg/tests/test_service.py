"""Store ingest and the HTTP query API."""

from __future__ import annotations

import json

import pytest
from fastapi.testclient import TestClient

from bspprof import graphio, tracefile
from bspprof.model import job_stats
from bspprof.partition import hash_partition
from bspprof.programs import pagerank_program, sssp_program
from bspprof.server import create_app
from bspprof.simulate import SimConfig, TreeShape, run_job
from bspprof.store import DuplicateJobError, JobStore
from bspprof.model import InvalidJobError


def make_job(program=None, graph=None, shape=None, job_id="job1"):
    graph = graph or graphio.grid_graph(4, 4)
    shape = shape or TreeShape(1, 2, 2)
    part = hash_partition(graph, shape.worker_labels())
    return run_job(graph, program or pagerank_program(6), part,
                   SimConfig(tree=shape), job_id=job_id)


def ingest_job(store: JobStore, job, job_id="job1"):
    topo, trace = tracefile.serialize_job(job)
    return store.ingest(topo, trace, job_id=job_id,
                        metadata=dict(job.metadata))


class TestIngest:
    def test_record_matches_stats_oracle(self, tmp_path):
        job = make_job()
        record = ingest_job(JobStore(tmp_path), job)
        assert record.stats == job_stats(job)
        assert set(record.orders) == {"messages", "bytes"}

    def test_idempotent(self, tmp_path):
        store = JobStore(tmp_path)
        job = make_job()
        r1 = ingest_job(store, job)
        r2 = ingest_job(store, job)
        assert r1.content_hash == r2.content_hash
        assert len(store.list_jobs()) == 1

    def test_same_id_different_content_rejected(self, tmp_path):
        store = JobStore(tmp_path)
        ingest_job(store, make_job())
        other = make_job(program=sssp_program(0), job_id="job1")
        with pytest.raises(DuplicateJobError):
            ingest_job(store, other)

    def test_barrier_violation_rejected(self, tmp_path):
        job = make_job()
        topo, trace = tracefile.serialize_job(job)
        # Pull the second superstep's start back before the first finishes.
        bad_lines = []
        for line in trace.splitlines():
            rec = json.loads(line)
            if rec.get("kind") == "time" and rec["superstep"] == 2:
                rec["start"] -= 1
            bad_lines.append(json.dumps(rec, separators=(",", ":")))
        with pytest.raises(InvalidJobError) as err:
            JobStore(tmp_path).ingest(topo, "\n".join(bad_lines) + "\n",
                                      job_id="bad")
        codes = [v.code for v in err.value.report.violations]
        assert codes == ["barrier"]
        assert err.value.report.violations[0].superstep == 1


@pytest.fixture()
def client(tmp_path):
    store = JobStore(tmp_path)
    ingest_job(store, make_job())
    app = create_app(tmp_path)
    return TestClient(app)


class TestEndpoints:
    def test_job_list(self, client):
        body = client.get("/jobs").json()
        assert [j["job_id"] for j in body["jobs"]] == ["job1"]
        assert body["jobs"][0]["stats"]["superstep_count"] == 6

    def test_stats(self, client):
        body = client.get("/jobs/job1/stats").json()
        assert body["superstep_count"] == 6
        assert body["total_messages"] == 6 * graphio.grid_graph(4, 4).num_edges

    def test_tree_and_treemap(self, client):
        body = client.get("/jobs/job1/tree").json()
        assert len(body["workers"]) == 4
        total = sum(w["vertices"] for w in body["workers"])
        assert body["treemap"]["weight"] == total == 16

    def test_frames_whole_job_single_frame(self, client):
        body = client.get("/jobs/job1/frames", params={"frame_size": 6}).json()
        assert body["frame_count"] == 1
        for series in body["series"].values():
            assert len(series["msgs_out"]) == 1

    def test_pagerank_host_msgs_constant(self, client):
        body = client.get("/jobs/job1/frames",
                          params={"frame_size": 1, "level": "host"}).json()
        for unit in body["units"]:
            outs = body["series"][unit]["msgs_out"]
            assert len(set(outs)) == 1

    def test_chord_basic(self, client):
        body = client.get("/jobs/job1/frame/1/chord",
                          params={"level": "host"}).json()
        assert not body["degenerate"]
        assert sorted(body["units"]) == ["r0h0", "r0h1"]
        assert body["ribbons"]

    def test_chord_exclude_everything_degenerate(self, client):
        body = client.get("/jobs/job1/frame/1/chord",
                          params={"exclude": "r0"}).json()
        assert body["degenerate"]
        assert body["arcs"] == []

    def test_get_purity(self, client):
        paths = ["/jobs", "/jobs/job1/stats",
                 "/jobs/job1/frames?frame_size=2&level=host",
                 "/jobs/job1/frame/2/chord?frame_size=2&level=host"]
        for path in paths:
            assert client.get(path).content == client.get(path).content

    def test_errors(self, client):
        assert client.get("/jobs/nope/stats").status_code == 404
        assert client.get("/jobs/job1/frames", params={"frame_size": 0}).status_code == 400
        assert client.get("/jobs/job1/frames", params={"level": "pod"}).status_code == 400
        assert client.get("/jobs/job1/frame/99/chord").status_code == 404

    def test_multipart_ingest_and_validation_error(self, client):
        job = make_job(program=sssp_program(0), job_id="job2")
        topo, trace = tracefile.serialize_job(job)
        resp = client.post("/jobs", files={
            "topology": ("topology.jsonl", topo),
            "trace": ("trace.jsonl", trace),
        }, data={"job_id": "job2", "algorithm": "sssp"})
        assert resp.status_code == 201
        assert resp.json()["job_id"] == "job2"
        assert client.get("/jobs/job2/stats").status_code == 200

        resp = client.post("/jobs", files={
            "topology": ("topology.jsonl", topo),
            "trace": ("trace.jsonl", "garbage\n"),
        }, data={"job_id": "job3"})
        assert resp.status_code == 422

    def test_frames_numbers_reproducible_from_engine(self, client, tmp_path):
        """Every served aggregate equals a direct aggregation call."""
        from bspprof.aggregate import hierarchy_aggregate, temporal_aggregate, trend_series
        from bspprof.model import Level
        job = make_job()
        frames = [hierarchy_aggregate(f, Level.HOST, job.tree)
                  for f in temporal_aggregate(job, 2)]
        series = trend_series(frames)
        body = client.get("/jobs/job1/frames",
                          params={"frame_size": 2, "level": "host"}).json()
        for unit in body["units"]:
            assert tuple(body["series"][unit]["msgs_out"]) == series.msgs_out[unit]
            assert tuple(body["series"][unit]["time_ms"]) == series.time_ms[unit]
