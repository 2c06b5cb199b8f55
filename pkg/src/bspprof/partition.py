"""Vertex-to-worker partitioners.

The cut convention used throughout: a cut edge is a *directed* edge whose
endpoints are assigned to different workers; each directed edge is counted
once.
"""

from __future__ import annotations

from dataclasses import dataclass
from collections import deque

from .graphio import InputGraph

# Knuth's multiplicative hash constant (2^32 / golden ratio).
_HASH_MULT = 2654435761
_HASH_MOD = 2 ** 32


def vertex_hash(v: int) -> int:
    """The documented, stable integer hash: (v * 2654435761) mod 2^32."""
    return (v * _HASH_MULT) % _HASH_MOD


@dataclass(frozen=True)
class Partition:
    assignment: dict[int, str]
    workers: tuple[str, ...]

    def __post_init__(self) -> None:
        unknown = set(self.assignment.values()) - set(self.workers)
        if unknown:
            raise ValueError(f"assignment references unlisted workers: {sorted(unknown)}")

    def worker_of(self, v: int) -> str:
        return self.assignment[v]

    def loads(self) -> dict[str, int]:
        out = {w: 0 for w in self.workers}
        for w in self.assignment.values():
            out[w] += 1
        return out


def hash_partition(graph: InputGraph, workers: list[str] | tuple[str, ...]) -> Partition:
    """Deterministic hash-based assignment: workers[vertex_hash(v) mod W]."""
    if not workers:
        raise ValueError("need at least one worker")
    workers = tuple(workers)
    assignment = {v: workers[vertex_hash(v) % len(workers)] for v in graph.vertices()}
    return Partition(assignment=assignment, workers=workers)


def locality_partition(graph: InputGraph, workers: list[str] | tuple[str, ...],
                       seed: int = 0) -> Partition:
    """Greedy BFS chunking: grow connected chunks of ~n/W vertices each.

    Chunks start from the lowest-id unvisited vertex and expand over the
    undirected neighborhood in ascending id order, so the result is fully
    deterministic; ``seed`` is accepted for interface symmetry with the
    simulator config but does not influence the chunking.
    """
    if not workers:
        raise ValueError("need at least one worker")
    workers = tuple(workers)
    n = graph.n
    target = -(-n // len(workers))  # ceil

    undirected: list[set[int]] = [set() for _ in range(n)]
    for u in graph.vertices():
        for v in graph.out_neighbors(u):
            undirected[u].add(v)
            undirected[v].add(u)

    assignment: dict[int, str] = {}
    unvisited = set(graph.vertices())
    chunk_idx = 0
    while unvisited:
        worker = workers[min(chunk_idx, len(workers) - 1)]
        size = 0
        queue: deque[int] = deque([min(unvisited)])
        while queue and size < target:
            u = queue.popleft()
            if u not in unvisited:
                continue
            unvisited.discard(u)
            assignment[u] = worker
            size += 1
            for v in sorted(undirected[u]):
                if v in unvisited:
                    queue.append(v)
        if size:
            chunk_idx += 1
    return Partition(assignment=assignment, workers=workers)


def cut_edges(graph: InputGraph, partition: Partition) -> int:
    return sum(
        1
        for u in graph.vertices()
        for v in graph.out_neighbors(u)
        if partition.worker_of(u) != partition.worker_of(v)
    )
