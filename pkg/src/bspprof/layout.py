"""Chord-diagram layout: crossing-weighted circular ordering and geometry.

A single hierarchy-contiguous circular order is computed once from the
whole-job graph and reused for every frame, preserving the user's mental
map.  Workers of a host stay consecutive, hosts of a rack stay consecutive;
the order is found with a greedy insertion (fewest unplaced neighbors
first, front or back of the host's subsequence) followed by sifting passes
constrained to each unit's host subsequence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .aggregate import FrameGraph
from .model import InclusionTree, Level


class WeightKind(str, Enum):
    MESSAGES = "messages"
    BYTES = "bytes"


def edge_weight(frame: FrameGraph, key: tuple[str, str], kind: WeightKind) -> int:
    m, b = frame.edges.get(key, (0, 0))
    return m if kind is WeightKind.MESSAGES else b


@dataclass(frozen=True)
class CircularOrder:
    level: Level
    units: tuple[str, ...]
    # group key per unit: (rack, host) for workers, (rack,) for hosts, () for racks
    groups: dict[str, tuple[str, ...]] = field(default_factory=dict)

    def positions(self) -> dict[str, int]:
        return {u: i for i, u in enumerate(self.units)}

    def is_hierarchy_contiguous(self) -> bool:
        """Every group prefix of the group keys forms contiguous blocks."""
        depth = max((len(g) for g in self.groups.values()), default=0)
        for d in range(1, depth + 1):
            seen: set[tuple[str, ...]] = set()
            prev: tuple[str, ...] | None = None
            for u in self.units:
                key = self.groups.get(u, ())[:d]
                if key != prev:
                    if key in seen:
                        return False
                    seen.add(key)
                    prev = key
        return True


def group_keys(tree: InclusionTree, level: Level) -> dict[str, tuple[str, ...]]:
    out: dict[str, tuple[str, ...]] = {}
    for u in tree.units(level):
        if level is Level.WORKER:
            out[u] = (tree.rack_of_worker(u), tree.host_of(u))
        elif level is Level.HOST:
            out[u] = (tree.rack_of_host(u),)
        else:
            out[u] = ()
    return out


# Crossings ---------------------------------------------------------------

def _chords(frame: FrameGraph, kind: WeightKind) -> list[tuple[str, str, int]]:
    out = []
    for (a, b), _ in frame.edges.items():
        if a == b:
            continue  # self-loops are arc thickenings, not chords
        w = edge_weight(frame, (a, b), kind)
        out.append((a, b, w))
    return out


def _crosses(pa: int, pb: int, pc: int, pd: int, n: int) -> bool:
    """Chords {a,b}, {c,d} on distinct endpoints cross iff exactly one of
    c, d lies strictly between a and b in circular order."""
    lo = (pb - pa) % n
    c_in = 0 < (pc - pa) % n < lo
    d_in = 0 < (pd - pa) % n < lo
    return c_in != d_in


def weighted_crossings(order: CircularOrder | list[str] | tuple[str, ...],
                       frame: FrameGraph, kind: WeightKind) -> int:
    """Sum of w(e) + w(f) over all crossing chord pairs e, f."""
    units = order.units if isinstance(order, CircularOrder) else tuple(order)
    pos = {u: i for i, u in enumerate(units)}
    n = len(units)
    chords = _chords(frame, kind)
    total = 0
    for i in range(len(chords)):
        a, b, wi = chords[i]
        pa, pb = pos[a], pos[b]
        for j in range(i + 1, len(chords)):
            c, d, wj = chords[j]
            if a == c or a == d or b == c or b == d:
                continue
            if _crosses(pa, pb, pos[c], pos[d], n):
                total += wi + wj
    return total


def _vertex_crossing_cost(units: list[str], pos: dict[str, int],
                          chords: list[tuple[str, str, int]], v: str) -> int:
    """Weighted crossings between chords incident to v and the rest.

    Crossings among chords not touching v do not depend on v's position, so
    this is the only part that changes when v moves.
    """
    n = len(units)
    mine = [(a, b, w) for a, b, w in chords if (a == v or b == v) and a in pos and b in pos]
    others = [(a, b, w) for a, b, w in chords
              if a != v and b != v and a in pos and b in pos]
    total = 0
    for a, b, wi in mine:
        pa, pb = pos[a], pos[b]
        for c, d, wj in others:
            if a == c or a == d or b == c or b == d:
                continue
            if _crosses(pa, pb, pos[c], pos[d], n):
                total += wi + wj
    return total


# Order construction ------------------------------------------------------

def circular_order(g_whole: FrameGraph, tree: InclusionTree,
                   kind: WeightKind,
                   pass_objectives: list[int] | None = None) -> CircularOrder:
    """Hierarchy-contiguous circular order minimizing weighted crossings.

    Greedy phase: repeatedly place the unit with the fewest unplaced
    neighbors (ties by label) at the front or back of its host subsequence,
    whichever adds less crossing weight.  Host blocks of a rack stay
    consecutive, in order of first placement; racks go around the circle by
    descending total traffic, then label.  Sifting phase: each unit is
    tried at every position inside its host subsequence and kept at the
    strictly best one, repeated until a full pass improves nothing.
    """
    level = g_whole.level
    units = list(g_whole.units)
    if not units:
        raise ValueError("cannot order an empty graph")
    groups = group_keys(tree, level)
    groups = {u: groups[u] for u in units}
    chords = _chords(g_whole, kind)

    neighbors: dict[str, set[str]] = {u: set() for u in units}
    for a, b, _ in chords:
        neighbors[a].add(b)
        neighbors[b].add(a)

    rack_of = {u: (groups[u][0] if groups[u] else "") for u in units}
    traffic: dict[str, int] = {}
    for (a, b), _ in g_whole.edges.items():
        w = edge_weight(g_whole, (a, b), kind)
        traffic[rack_of[a]] = traffic.get(rack_of[a], 0) + w
        traffic[rack_of[b]] = traffic.get(rack_of[b], 0) + w
    rack_order = sorted({rack_of[u] for u in units},
                        key=lambda r: (-traffic.get(r, 0), r))

    block_of = {u: groups[u] for u in units}  # host key: full group tuple
    rack_blocks: dict[str, list[tuple[str, ...]]] = {r: [] for r in rack_order}
    blocks: dict[tuple[str, ...], list[str]] = {}

    def flatten() -> list[str]:
        seq: list[str] = []
        for r in rack_order:
            for key in rack_blocks[r]:
                seq.extend(blocks[key])
        return seq

    unplaced = set(units)
    while unplaced:
        pick = min(unplaced,
                   key=lambda u: (len(neighbors[u] & unplaced), u))
        unplaced.discard(pick)
        key = block_of[pick]
        if key not in blocks:
            blocks[key] = [pick]
            rack_blocks[rack_of[pick]].append(key)
            continue
        block = blocks[key]
        best_seq = None
        best_cost = None
        for insert_front in (True, False):
            candidate = [pick] + block if insert_front else block + [pick]
            blocks[key] = candidate
            seq = flatten()
            pos = {u: i for i, u in enumerate(seq)}
            cost = _vertex_crossing_cost(seq, pos, chords, pick)
            if best_cost is None or cost < best_cost:
                best_cost, best_seq = cost, candidate
        blocks[key] = best_seq  # front wins ties (tried first)

    # Constrained sifting: move each unit within its host block only.
    if pass_objectives is not None:
        pass_objectives.append(weighted_crossings(flatten(), g_whole, kind))
    improved = True
    while improved:
        improved = False
        for v in sorted(units):
            key = block_of[v]
            block = blocks[key]
            if len(block) < 2:
                continue
            current_idx = block.index(v)
            rest = [u for u in block if u != v]
            best_idx, best_cost = current_idx, None
            for idx in range(len(block)):
                blocks[key] = rest[:idx] + [v] + rest[idx:]
                seq = flatten()
                pos = {u: i for i, u in enumerate(seq)}
                cost = _vertex_crossing_cost(seq, pos, chords, v)
                if idx == current_idx:
                    current_cost = cost
                if best_cost is None or cost < best_cost:
                    best_cost, best_idx = cost, idx
            if best_cost < current_cost:
                blocks[key] = rest[:best_idx] + [v] + rest[best_idx:]
                improved = True
            else:
                blocks[key] = rest[:current_idx] + [v] + rest[current_idx:]
        if pass_objectives is not None:
            pass_objectives.append(weighted_crossings(flatten(), g_whole, kind))

    return CircularOrder(level=level, units=tuple(flatten()), groups=groups)


def layout_stability(orders: list[CircularOrder | tuple[str, ...]]) -> list[str]:
    """Check that one order is used for every frame; returns violations."""
    if not orders:
        return []

    def units(o) -> tuple[str, ...]:
        return o.units if isinstance(o, CircularOrder) else tuple(o)

    reference = units(orders[0])
    out = []
    for i, o in enumerate(orders[1:], start=1):
        if units(o) != reference:
            out.append(f"frame {i}: order {units(o)} differs from {reference}")
    return out


def preserves_relative_order(full: tuple[str, ...], sub: tuple[str, ...]) -> bool:
    """True when ``sub`` is ``full`` with some units dropped (filtering)."""
    it = iter(full)
    return all(u in it for u in sub)


# Geometry ----------------------------------------------------------------

TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class GapConfig:
    """Angular gaps between adjacent arcs, as fractions of the full circle;
    a boundary takes the largest applicable gap."""

    unit: float = 0.005
    host: float = 0.015
    rack: float = 0.025


@dataclass(frozen=True)
class ArcGeometry:
    unit: str
    start: float
    end: float
    self_start: float
    self_end: float
    in_start: float
    in_end: float
    out_start: float
    out_end: float


@dataclass(frozen=True)
class Ribbon:
    src: str
    dst: str
    weight: int
    src_start: float
    src_end: float
    dst_start: float
    dst_end: float


@dataclass(frozen=True)
class RingBand:
    level: Level
    label: str
    start: float
    end: float


@dataclass(frozen=True)
class ChordLayout:
    level: Level
    kind: WeightKind
    units: tuple[str, ...]
    arcs: tuple[ArcGeometry, ...]
    ribbons: tuple[Ribbon, ...]
    rings: tuple[RingBand, ...]
    degenerate: bool


def chord_geometry(frame: FrameGraph, order: CircularOrder, kind: WeightKind,
                   gaps: GapConfig = GapConfig()) -> ChordLayout:
    """Arc, interval and ribbon angles for one frame under a fixed order.

    Each unit's arc span is proportional to in + out + self weight (self
    counted once, as an arc thickening); within the arc, clockwise: the
    self-loop extent, then the incoming interval, then the outgoing one.
    Units present in the order but filtered from the frame are dropped,
    keeping relative positions.  Angles grow clockwise from 0.
    """
    present = set(frame.units)
    units = tuple(u for u in order.units if u in present)
    if not units:
        return ChordLayout(level=frame.level, kind=kind, units=(),
                           arcs=(), ribbons=(), rings=(), degenerate=True)
    n = len(units)
    groups = order.groups

    def totals(u: str) -> tuple[int, int, int]:
        self_w = edge_weight(frame, (u, u), kind)
        inc = sum(edge_weight(frame, (v, u), kind) for v in units if v != u)
        out = sum(edge_weight(frame, (u, v), kind) for v in units if v != u)
        return inc, out, self_w

    weights = {u: totals(u) for u in units}
    grand = sum(sum(w) for w in weights.values())
    degenerate = grand == 0

    def boundary_gap(a: str, b: str) -> float:
        ga, gb = groups.get(a, ()), groups.get(b, ())
        if n == 1:
            return 0.0
        if ga[:1] != gb[:1]:
            return gaps.rack
        if ga != gb:
            return gaps.host
        return gaps.unit

    gap_after = [boundary_gap(units[i], units[(i + 1) % n]) for i in range(n)]
    available = TWO_PI * (1 - sum(gap_after))
    if available <= 0:
        raise ValueError("gaps exceed the full circle")

    arcs: list[ArcGeometry] = []
    angle = 0.0
    arc_by_unit: dict[str, ArcGeometry] = {}
    for i, u in enumerate(units):
        inc, out, self_w = weights[u]
        total = inc + out + self_w
        span = available / n if degenerate else available * total / grand
        s = angle
        if degenerate or total == 0:
            self_span = in_span = out_span = 0.0
        else:
            self_span = span * self_w / total
            in_span = span * inc / total
            out_span = span * out / total
        arc = ArcGeometry(
            unit=u, start=s, end=s + span,
            self_start=s, self_end=s + self_span,
            in_start=s + self_span, in_end=s + self_span + in_span,
            out_start=s + self_span + in_span, out_end=s + span,
        )
        arcs.append(arc)
        arc_by_unit[u] = arc
        angle = s + span + TWO_PI * gap_after[i]

    pos = {u: i for i, u in enumerate(units)}
    ribbons: list[Ribbon] = []
    if not degenerate:
        # Anchor order within each interval: by circular position of the
        # opposite endpoint, starting just after the owning unit.
        out_anchor: dict[tuple[str, str], tuple[float, float]] = {}
        in_anchor: dict[tuple[str, str], tuple[float, float]] = {}
        for u in units:
            inc, out, _ = weights[u]
            if out:
                arc = arc_by_unit[u]
                cursor = arc.out_start
                out_span = arc.out_end - arc.out_start
                targets = sorted((v for v in units if v != u
                                  and edge_weight(frame, (u, v), kind) > 0),
                                 key=lambda v: (pos[v] - pos[u]) % n)
                for v in targets:
                    w = edge_weight(frame, (u, v), kind)
                    width = out_span * w / out
                    out_anchor[(u, v)] = (cursor, cursor + width)
                    cursor += width
            if inc:
                arc = arc_by_unit[u]
                cursor = arc.in_start
                in_span = arc.in_end - arc.in_start
                sources = sorted((v for v in units if v != u
                                  and edge_weight(frame, (v, u), kind) > 0),
                                 key=lambda v: (pos[v] - pos[u]) % n)
                for v in sources:
                    w = edge_weight(frame, (v, u), kind)
                    width = in_span * w / inc
                    in_anchor[(v, u)] = (cursor, cursor + width)
                    cursor += width
        for (u, v), src in out_anchor.items():
            dst = in_anchor[(u, v)]
            ribbons.append(Ribbon(src=u, dst=v,
                                  weight=edge_weight(frame, (u, v), kind),
                                  src_start=src[0], src_end=src[1],
                                  dst_start=dst[0], dst_end=dst[1]))

    rings: list[RingBand] = []
    depth = 2 if frame.level is Level.WORKER else (1 if frame.level is Level.HOST else 0)
    for d in range(depth):
        # d=0: innermost grouping ring (hosts for worker level), d=1: racks.
        keylen = len(groups.get(units[0], ())) - d
        ring_level = Level.HOST if (frame.level is Level.WORKER and d == 0) else Level.RACK
        current: tuple[str, ...] | None = None
        band_start = 0.0
        for i, u in enumerate(units):
            key = groups.get(u, ())[:keylen]
            if key != current:
                if current is not None:
                    rings.append(RingBand(ring_level, current[-1], band_start,
                                          arcs[i - 1].end))
                current = key
                band_start = arcs[i].start
        if current is not None:
            rings.append(RingBand(ring_level, current[-1], band_start, arcs[-1].end))

    return ChordLayout(level=frame.level, kind=kind, units=units,
                       arcs=tuple(arcs), ribbons=tuple(ribbons),
                       rings=tuple(rings), degenerate=degenerate)
