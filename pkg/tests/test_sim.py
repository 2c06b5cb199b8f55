"""Simulator semantics, workload programs, and partitioners.

Oracles here are deliberately independent of the engine: BFS relaxation
counting for shortest paths, dense power iteration for ranks, adjacency
matrix powers for flood walk counts.
"""

from __future__ import annotations

import math
from collections import deque

import numpy as np
import pytest

from bspprof import graphio, tracefile
from bspprof.model import validate_trace
from bspprof.partition import (Partition, cut_edges, hash_partition,
                               locality_partition, vertex_hash)
from bspprof.programs import (khop_broadcast_program, pagerank_program,
                              sssp_program)
from bspprof.simulate import (MessageCapExceeded, SimConfig, SimulationError,
                              TreeShape, run_job)


def one_worker_config() -> tuple[SimConfig, list[str]]:
    shape = TreeShape(1, 1, 1)
    return SimConfig(tree=shape), shape.worker_labels()


def run(graph, program, workers=None, config=None, partitioner=hash_partition):
    if config is None:
        config, labels = one_worker_config()
        workers = workers or labels
    part = partitioner(graph, workers)
    return run_job(graph, program, part, config)


def msgs_per_superstep(job) -> list[int]:
    return [g.total_messages() for g in job.supersteps]


# Independent oracles -----------------------------------------------------

def bfs_relaxation_oracle(graph, source) -> tuple[dict[int, int], int]:
    """(distances, total messages) for unit-weight SSSP: each reachable
    vertex relaxes exactly once and sends deg_out messages."""
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in graph.out_neighbors(u):
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist, sum(len(graph.out_neighbors(v)) for v in dist)


def power_iteration_oracle(graph, supersteps: int) -> np.ndarray:
    """Dense matrix replay of damped rank propagation, dangling mass dropped.
    One update per superstep after the first."""
    n = graph.n
    transfer = np.zeros((n, n))
    for u in graph.vertices():
        nbrs = graph.out_neighbors(u)
        for v in nbrs:
            transfer[v, u] = 1.0 / len(nbrs)
    r = np.full(n, 1.0 / n)
    for _ in range(supersteps - 1):
        r = 0.15 / n + 0.85 * (transfer @ r)
    return r


def walk_count_oracle(graph, length: int) -> int:
    """Number of directed walks of the given length (adjacency power sum)."""
    a = np.zeros((graph.n, graph.n), dtype=np.int64)
    for u in graph.vertices():
        for v in graph.out_neighbors(u):
            a[u, v] = 1
    return int(np.linalg.matrix_power(a, length).sum())


# SSSP --------------------------------------------------------------------

class TestSSSP:
    def test_p3_hand_simulation(self):
        job = run(graphio.path_graph(3), sssp_program(0))
        assert msgs_per_superstep(job) == [1, 1, 0]
        assert job.superstep_count == 3

    def test_total_messages_match_bfs_oracle(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            n = int(rng.integers(2, 15))
            edges = {(int(u), int(v)) for u, v in rng.integers(0, n, (3 * n, 2))
                     if u != v}
            graph = graphio.from_edges(sorted(edges), n=n)
            _, expected = bfs_relaxation_oracle(graph, 0)
            job = run(graph, sssp_program(0))
            assert sum(msgs_per_superstep(job)) == expected

    def test_buggy_p3_flat_growth(self):
        job = run(graphio.path_graph(3), sssp_program(0, buggy=True, max_supersteps=6))
        assert msgs_per_superstep(job) == [1, 2, 2, 2, 2, 2]

    def test_modes_agree_on_distances(self):
        graph = graphio.from_edges([(0, 1), (1, 2), (0, 2), (2, 3)], n=5)
        expected, _ = bfs_relaxation_oracle(graph, 0)

        def final_distances(buggy):
            seen: dict[int, float] = {}
            base = sssp_program(0, buggy=buggy, max_supersteps=10)

            def recording(vid, value, inbox, superstep, g):
                result = base.compute(vid, value, inbox, superstep, g)
                seen[vid] = result.value
                return result

            program = base.__class__(name=base.name,
                                     payload_bytes=base.payload_bytes,
                                     initial_value=base.initial_value,
                                     compute=recording,
                                     max_supersteps=base.max_supersteps)
            run(graph, program)
            return {v: d for v, d in seen.items() if math.isfinite(d)}

        assert final_distances(False) == expected
        assert final_distances(True) == expected

    def test_isolated_source_halts_without_messages(self):
        graph = graphio.from_edges([(1, 2)], n=3)  # source 0 has no out-edges
        job = run(graph, sssp_program(0))
        assert sum(msgs_per_superstep(job)) == 0
        assert job.superstep_count == 1


# PageRank ----------------------------------------------------------------

class TestPageRank:
    def test_two_cycle_symmetric(self):
        graph = graphio.cycle_graph(2)
        job = run(graph, pagerank_program(3))
        assert msgs_per_superstep(job) == [2, 2, 2]

    def test_message_count_equals_edges_every_superstep(self):
        graph = graphio.from_edges([(0, 1), (0, 2), (1, 2), (2, 0), (3, 0)], n=4)
        job = run(graph, pagerank_program(5))
        assert msgs_per_superstep(job) == [graph.num_edges] * 5

    def test_star_ranks_match_power_iteration(self):
        graph = graphio.star_graph(3, inward=True)
        iterations = 10
        expected = power_iteration_oracle(graph, iterations)

        # Re-run the simulator but capture final values through a wrapper
        # program that records them.
        seen: dict[int, float] = {}
        base = pagerank_program(iterations)

        def recording_compute(vid, value, inbox, superstep, g):
            result = base.compute(vid, value, inbox, superstep, g)
            seen[vid] = result.value
            return result

        program = base.__class__(name=base.name, payload_bytes=base.payload_bytes,
                                 initial_value=base.initial_value,
                                 compute=recording_compute,
                                 max_supersteps=base.max_supersteps)
        run(graph, program)
        for v in graph.vertices():
            assert seen[v] == pytest.approx(expected[v], abs=1e-9)


# k-hop broadcast ---------------------------------------------------------

class TestKhopBroadcast:
    def test_one_hop_is_full_broadcast(self):
        graph = graphio.from_edges([(0, 1), (1, 2), (2, 0), (0, 2)], n=3)
        job = run(graph, khop_broadcast_program(1, 3))
        assert msgs_per_superstep(job) == [graph.num_edges] * 3

    def test_p3_two_hop_pattern(self):
        job = run(graphio.path_graph(3), khop_broadcast_program(2, 2))
        assert msgs_per_superstep(job) == [2, 1, 2, 1]

    def test_single_round_matches_walk_oracle(self):
        graph = graphio.from_edges([(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)], n=4)
        k = 3
        job = run(graph, khop_broadcast_program(k, 1))
        expected = [walk_count_oracle(graph, j) for j in range(1, k + 1)]
        assert msgs_per_superstep(job) == expected


# Engine-level behavior ---------------------------------------------------

class TestEngine:
    def test_host_slowdown_is_multiplicative(self):
        graph = graphio.cycle_graph(8)
        shape = TreeShape(1, 2, 1)
        workers = shape.worker_labels()
        part = locality_partition(graph, workers)
        base = run_job(graph, pagerank_program(4), part, SimConfig(tree=shape))
        slowed = run_job(graph, pagerank_program(4), part,
                         SimConfig(tree=shape, host_slowdown={"r0h1": 3.0}))
        for g_base, g_slow in zip(base.supersteps, slowed.supersteps):
            assert g_slow.vertex_weights["r0h1w0"] == 3 * g_base.vertex_weights["r0h1w0"]
            assert g_slow.vertex_weights["r0h0w0"] == g_base.vertex_weights["r0h0w0"]

    def test_determinism_byte_identical(self):
        graph = graphio.grid_graph(4, 4)
        shape = TreeShape(1, 2, 2)

        def trace_bytes():
            part = hash_partition(graph, shape.worker_labels())
            job = run_job(graph, khop_broadcast_program(2, 3), part,
                          SimConfig(tree=shape, seed=42))
            return tracefile.serialize_job(job)

        assert trace_bytes() == trace_bytes()

    def test_tight_barriers(self):
        graph = graphio.grid_graph(3, 3)
        job = run(graph, pagerank_program(4))
        for prev, nxt in zip(job.supersteps, job.supersteps[1:]):
            assert nxt.start - prev.start == prev.max_time()

    def test_output_validates_clean(self):
        graph = graphio.grid_graph(3, 4)
        shape = TreeShape(2, 2, 1)
        part = hash_partition(graph, shape.worker_labels())
        job = run_job(graph, sssp_program(0), part, SimConfig(tree=shape))
        assert validate_trace(job).ok

    def test_partition_gap_rejected(self):
        graph = graphio.path_graph(3)
        part = Partition(assignment={0: "r0h0w0"}, workers=("r0h0w0",))
        with pytest.raises(SimulationError, match="gap"):
            run_job(graph, sssp_program(0), part, SimConfig(tree=TreeShape(1, 1, 1)))

    def test_message_cap(self):
        graph = graphio.complete_graph(6, directed_pairs=True)
        config = SimConfig(tree=TreeShape(1, 1, 1), message_cap=50)
        part = hash_partition(graph, config.tree.worker_labels())
        with pytest.raises(MessageCapExceeded):
            run_job(graph, pagerank_program(10), part, config)


# Partitioners ------------------------------------------------------------

class TestPartitioners:
    def test_single_worker_gets_everything(self):
        graph = graphio.path_graph(5)
        part = hash_partition(graph, ["w0"])
        assert set(part.assignment.values()) == {"w0"}
        assert cut_edges(graph, locality_partition(graph, ["w0"])) == 0

    def test_hash_is_deterministic(self):
        graph = graphio.grid_graph(5, 5)
        workers = [f"w{i}" for i in range(4)]
        assert hash_partition(graph, workers) == hash_partition(graph, workers)

    def test_hash_matches_reimplementation(self):
        graph = graphio.from_edges([], n=1000)
        workers = [f"w{i}" for i in range(10)]
        part = hash_partition(graph, workers)
        expected_loads = {w: 0 for w in workers}
        for v in range(1000):
            expected_loads[workers[((v * 2654435761) % 2 ** 32) % 10]] += 1
        assert part.loads() == expected_loads
        assert vertex_hash(3) == (3 * 2654435761) % 2 ** 32

    def test_locality_path_contiguous_halves(self):
        graph = graphio.path_graph(10)
        part = locality_partition(graph, ["a", "b"])
        assert [part.worker_of(v) for v in range(10)] == ["a"] * 5 + ["b"] * 5
        assert cut_edges(graph, part) == 1

    def test_k4_any_balanced_split_cuts_four(self):
        graph = graphio.complete_graph(4)  # one directed arc per pair
        for partitioner in (hash_partition, locality_partition):
            part = partitioner(graph, ["a", "b"])
            if sorted(part.loads().values()) == [2, 2]:
                assert cut_edges(graph, part) == 4

    def test_totality(self):
        graph = graphio.grid_graph(4, 5)
        for partitioner in (hash_partition, locality_partition):
            part = partitioner(graph, ["a", "b", "c"])
            assert set(part.assignment) == set(graph.vertices())
