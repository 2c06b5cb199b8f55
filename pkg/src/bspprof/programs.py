"""Vertex programs for the BSP simulator.

A program follows Pregel activation semantics: a vertex is invoked while it
has not voted to halt or whenever its inbox is non-empty; messages sent in
superstep i are delivered at i+1.  ``compute`` returns the new vertex value,
outbound (target, payload) messages, and the halt vote.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable, Sequence

from .graphio import InputGraph


@dataclass(frozen=True)
class ComputeResult:
    value: Any
    messages: tuple[tuple[int, Any], ...]
    halt: bool


@dataclass(frozen=True)
class VertexProgram:
    name: str
    payload_bytes: int
    initial_value: Callable[[int, InputGraph], Any]
    compute: Callable[[int, Any, Sequence[Any], int, InputGraph], ComputeResult]
    max_supersteps: int | None = None


def sssp_program(source: int, buggy: bool = False,
                 max_supersteps: int | None = None) -> VertexProgram:
    """Single-source shortest paths, 8-byte messages.

    Correct mode relays the distance only on a strict improvement and votes
    to halt every superstep.  Buggy mode re-sends the current distance on
    every invocation and stays active while the distance is finite, so it
    floods forever; cap it with ``max_supersteps`` (default 20 when buggy).
    Final distances are identical in both modes.
    """
    if buggy and max_supersteps is None:
        max_supersteps = 20

    def initial(vid: int, graph: InputGraph) -> float:
        return math.inf

    def compute(vid: int, value: float, inbox: Sequence[float],
                superstep: int, graph: InputGraph) -> ComputeResult:
        candidate = min(inbox, default=math.inf)
        if superstep == 1 and vid == source:
            candidate = 0.0
        new = min(value, candidate)
        improved = new < value
        if buggy:
            if math.isfinite(new):
                msgs = tuple((v, new + graph.edge_weight(vid, v))
                             for v in graph.out_neighbors(vid))
                return ComputeResult(new, msgs, halt=False)
            return ComputeResult(new, (), halt=True)
        if improved:
            msgs = tuple((v, new + graph.edge_weight(vid, v))
                         for v in graph.out_neighbors(vid))
            return ComputeResult(new, msgs, halt=True)
        return ComputeResult(new, (), halt=True)

    name = "sssp-buggy" if buggy else "sssp"
    return VertexProgram(name=name, payload_bytes=8, initial_value=initial,
                         compute=compute, max_supersteps=max_supersteps)


PAGERANK_DAMPING = 0.85


def pagerank_program(iterations: int) -> VertexProgram:
    """Vertex-centric PageRank with damping 0.85, 8-byte messages.

    Runs exactly ``iterations`` supersteps (engine cap); every vertex sends
    rank/deg_out to all out-neighbors every superstep, so the per-superstep
    message count equals |E|.  Dangling mass is dropped, matching the
    classic vertex-centric formulation.
    """
    if iterations < 1:
        raise ValueError("iterations must be positive")

    def initial(vid: int, graph: InputGraph) -> float:
        return 1.0 / graph.n

    def compute(vid: int, value: float, inbox: Sequence[float],
                superstep: int, graph: InputGraph) -> ComputeResult:
        if superstep > 1:
            value = (1 - PAGERANK_DAMPING) / graph.n + PAGERANK_DAMPING * sum(inbox)
        nbrs = graph.out_neighbors(vid)
        msgs = tuple((v, value / len(nbrs)) for v in nbrs) if nbrs else ()
        return ComputeResult(value, msgs, halt=False)

    return VertexProgram(name="pagerank", payload_bytes=8, initial_value=initial,
                         compute=compute, max_supersteps=iterations)


def khop_broadcast_program(k: int, rounds: int) -> VertexProgram:
    """Periodic controlled flooding, 4-byte messages.

    Each period spans k supersteps: at the period's first superstep every
    vertex emits a token with k-1 remaining hops; holders forward positive-
    hop tokens, decremented, to all out-neighbors.  Tokens are not
    deduplicated, so the count at period offset j is the number of directed
    walks of length j.  Runs rounds*k supersteps (engine cap).
    """
    if k < 1 or rounds < 1:
        raise ValueError("k and rounds must be >= 1")

    def initial(vid: int, graph: InputGraph) -> None:
        return None

    def compute(vid: int, value: None, inbox: Sequence[int],
                superstep: int, graph: InputGraph) -> ComputeResult:
        nbrs = graph.out_neighbors(vid)
        msgs: list[tuple[int, int]] = []
        for ttl in inbox:
            if ttl > 0:
                msgs.extend((v, ttl - 1) for v in nbrs)
        if (superstep - 1) % k == 0:
            msgs.extend((v, k - 1) for v in nbrs)
        return ComputeResult(None, tuple(msgs), halt=False)

    return VertexProgram(name=f"khop[k={k}]", payload_bytes=4, initial_value=initial,
                         compute=compute, max_supersteps=k * rounds)
