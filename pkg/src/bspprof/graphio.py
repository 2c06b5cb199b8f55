"""Input graphs for the simulator: directed adjacency with optional weights.

Vertex ids are dense integers 0..n-1.  The edge-list file format is one
``u v [w]`` triple per line; ``#`` starts a comment.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path


@dataclass(frozen=True)
class InputGraph:
    n: int
    adjacency: tuple[tuple[int, ...], ...]
    weights: dict[tuple[int, int], float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("graph needs at least one vertex")
        if len(self.adjacency) != self.n:
            raise ValueError("adjacency length must equal vertex count")
        for u, nbrs in enumerate(self.adjacency):
            if len(set(nbrs)) != len(nbrs):
                raise ValueError(f"duplicate edges out of vertex {u}")
            for v in nbrs:
                if not 0 <= v < self.n:
                    raise ValueError(f"edge {u}->{v} out of range")

    def out_neighbors(self, u: int) -> tuple[int, ...]:
        return self.adjacency[u]

    def edge_weight(self, u: int, v: int) -> float:
        return self.weights.get((u, v), 1.0)

    @property
    def num_edges(self) -> int:
        return sum(len(a) for a in self.adjacency)

    def vertices(self) -> range:
        return range(self.n)


def from_edges(edges: list[tuple[int, int]] | list[tuple[int, int, float]],
               n: int | None = None) -> InputGraph:
    adj: dict[int, list[int]] = {}
    weights: dict[tuple[int, int], float] = {}
    max_id = -1
    for e in edges:
        u, v = int(e[0]), int(e[1])
        adj.setdefault(u, []).append(v)
        if len(e) == 3:
            weights[(u, v)] = float(e[2])
        max_id = max(max_id, u, v)
    count = n if n is not None else max_id + 1
    adjacency = tuple(tuple(sorted(adj.get(u, ()))) for u in range(count))
    return InputGraph(n=count, adjacency=adjacency, weights=weights)


def load_edge_list(path: str | Path, n: int | None = None) -> InputGraph:
    edges: list[tuple[int, int, float]] = []
    for line_no, line in enumerate(Path(path).read_text().splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        parts = body.split()
        if len(parts) not in (2, 3):
            raise ValueError(f"{path}:{line_no}: expected 'u v [w]', got {line!r}")
        u, v = int(parts[0]), int(parts[1])
        w = float(parts[2]) if len(parts) == 3 else 1.0
        edges.append((u, v, w))
    if not edges and n is None:
        raise ValueError(f"{path}: no edges and no explicit vertex count")
    return from_edges(edges, n=n)


# Generators used by tests and the acceptance corpus ----------------------

def path_graph(n: int) -> InputGraph:
    return from_edges([(i, i + 1) for i in range(n - 1)], n=n)


def cycle_graph(n: int) -> InputGraph:
    return from_edges([(i, (i + 1) % n) for i in range(n)], n=n)


def complete_graph(n: int, directed_pairs: bool = False) -> InputGraph:
    """K_n; with ``directed_pairs`` every unordered pair gets both arcs,
    otherwise only the u < v arc (one chord per pair)."""
    edges = []
    for u in range(n):
        for v in range(n):
            if u == v:
                continue
            if directed_pairs or u < v:
                edges.append((u, v))
    return from_edges(edges, n=n)


def star_graph(leaves: int, inward: bool = True) -> InputGraph:
    """Hub is vertex 0; ``inward`` points all edges at the hub."""
    edges = [(i, 0) if inward else (0, i) for i in range(1, leaves + 1)]
    return from_edges(edges, n=leaves + 1)


def grid_graph(rows: int, cols: int) -> InputGraph:
    """2D grid with bidirected 4-neighbor edges."""
    def vid(r: int, c: int) -> int:
        return r * cols + c

    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((vid(r, c), vid(r, c + 1)))
                edges.append((vid(r, c + 1), vid(r, c)))
            if r + 1 < rows:
                edges.append((vid(r, c), vid(r + 1, c)))
                edges.append((vid(r + 1, c), vid(r, c)))
    return from_edges(edges, n=rows * cols)
