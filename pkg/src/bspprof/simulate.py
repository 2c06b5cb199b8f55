"""Deterministic Pregel-semantics simulator producing trace jobs.

Per superstep i and worker w the recorded compute time is
``round(slowdown(host(w)) * (alpha*active + beta*sent + gamma*received))``
in ms, and barriers are tight: ``s_1 = 0`` and ``s_{i+1} = s_i + max_w t_i(w)``.
Workers are evaluated in label order and vertices in ascending id, which
fixes every observable output for a given input.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graphio import InputGraph
from .model import InclusionTree, SuperstepGraph, TraceJob
from .partition import Partition
from .programs import VertexProgram


class SimulationError(ValueError):
    pass


class MessageCapExceeded(SimulationError):
    """The job sent more messages than the configured safety cap."""


@dataclass(frozen=True)
class TreeShape:
    """racks x hosts-per-rack x workers-per-host cluster shape.

    Labels are generated as r{i}, r{i}h{j}, r{i}h{j}w{l}.
    """

    racks: int
    hosts_per_rack: int
    workers_per_host: int

    def __post_init__(self) -> None:
        if min(self.racks, self.hosts_per_rack, self.workers_per_host) < 1:
            raise ValueError("tree shape dimensions must be >= 1")

    @staticmethod
    def parse(spec: str) -> "TreeShape":
        """Parse an 'R:H:W' spec string."""
        parts = spec.split(":")
        if len(parts) != 3:
            raise ValueError(f"tree shape must be R:H:W, got {spec!r}")
        return TreeShape(*(int(p) for p in parts))

    def rows(self) -> list[tuple[str, str, str]]:
        out = []
        for r in range(self.racks):
            for h in range(self.hosts_per_rack):
                for w in range(self.workers_per_host):
                    out.append((f"r{r}", f"r{r}h{h}", f"r{r}h{h}w{w}"))
        return out

    def worker_labels(self) -> list[str]:
        return [w for _, _, w in self.rows()]

    def host_labels(self) -> list[str]:
        return sorted({h for _, h, _ in self.rows()})


@dataclass(frozen=True)
class SimConfig:
    tree: TreeShape
    alpha: float = 1.0    # ms per active vertex
    beta: float = 0.01    # ms per sent message
    gamma: float = 0.01   # ms per received message
    host_slowdown: dict[str, float] = field(default_factory=dict)
    seed: int = 0
    message_cap: int = 10 ** 8

    def __post_init__(self) -> None:
        if min(self.alpha, self.beta, self.gamma) < 0:
            raise ValueError("cost coefficients must be non-negative")
        for host, factor in self.host_slowdown.items():
            if factor < 1:
                raise ValueError(f"slowdown for {host!r} must be >= 1")

    def slowdown(self, host: str) -> float:
        return self.host_slowdown.get(host, 1.0)


def run_job(graph: InputGraph, program: VertexProgram, partition: Partition,
            config: SimConfig, job_id: str = "", input_name: str = "") -> TraceJob:
    """Execute a vertex program under BSP semantics and record the trace.

    Halts when every vertex has voted and no messages are in flight, or when
    the program's superstep cap is reached.
    """
    if graph.n < 1:
        raise SimulationError("empty input graph")
    missing = [v for v in graph.vertices() if v not in partition.assignment]
    if missing:
        raise SimulationError(f"partition gap: vertices {missing[:5]} unassigned")
    shape_workers = set(config.tree.worker_labels())
    unknown = set(partition.workers) - shape_workers
    if unknown:
        raise SimulationError(f"partition workers not in tree: {sorted(unknown)}")

    rows = config.tree.rows()
    host_of = {w: h for _, h, w in rows}
    loads = partition.loads()
    tree = InclusionTree.build([(r, h, w, loads.get(w, 0)) for r, h, w in rows])

    by_worker: dict[str, list[int]] = {w: [] for w in sorted(shape_workers)}
    for v in graph.vertices():
        by_worker[partition.worker_of(v)].append(v)
    for vs in by_worker.values():
        vs.sort()

    values = {v: program.initial_value(v, graph) for v in graph.vertices()}
    halted = {v: False for v in graph.vertices()}
    inbox: dict[int, list] = {}
    total_sent = 0
    supersteps: list[SuperstepGraph] = []
    start = 0
    index = 0

    while True:
        index += 1
        next_inbox: dict[int, list] = {}
        edge_msgs: dict[tuple[str, str], int] = {}
        active_count = {w: 0 for w in by_worker}
        sent_count = {w: 0 for w in by_worker}
        recv_count = {w: 0 for w in by_worker}
        any_invoked = False

        for w in sorted(by_worker):
            for v in by_worker[w]:
                messages = inbox.get(v, [])
                if halted[v] and not messages:
                    continue
                any_invoked = True
                active_count[w] += 1
                recv_count[w] += len(messages)
                result = program.compute(v, values[v], messages, index, graph)
                values[v] = result.value
                halted[v] = result.halt
                sent_count[w] += len(result.messages)
                total_sent += len(result.messages)
                if total_sent > config.message_cap:
                    raise MessageCapExceeded(
                        f"more than {config.message_cap} messages sent; "
                        "runaway computation")
                for target, payload in result.messages:
                    next_inbox.setdefault(target, []).append(payload)
                    key = (w, partition.worker_of(target))
                    edge_msgs[key] = edge_msgs.get(key, 0) + 1

        if not any_invoked:
            index -= 1
            break

        times = {
            w: round(config.slowdown(host_of[w])
                     * (config.alpha * active_count[w]
                        + config.beta * sent_count[w]
                        + config.gamma * recv_count[w]))
            for w in by_worker
        }
        edges = {
            key: (m, m * program.payload_bytes)
            for key, m in sorted(edge_msgs.items())
        }
        supersteps.append(SuperstepGraph(index=index, start=start,
                                         vertex_weights=times, edge_weights=edges))
        start += max(times.values(), default=0)
        inbox = next_inbox

        if program.max_supersteps is not None and index >= program.max_supersteps:
            break
        if not inbox and all(halted.values()):
            break

    meta = {
        "algorithm": program.name,
        "input_graph": input_name or f"n={graph.n},m={graph.num_edges}",
        "alpha": repr(config.alpha),
        "beta": repr(config.beta),
        "gamma": repr(config.gamma),
        "seed": str(config.seed),
    }
    if config.host_slowdown:
        meta["slowdown"] = ",".join(
            f"{h}={f}" for h, f in sorted(config.host_slowdown.items()))
    return TraceJob(job_id=job_id or f"{program.name}-job", tree=tree,
                    supersteps=tuple(supersteps), metadata=meta)
