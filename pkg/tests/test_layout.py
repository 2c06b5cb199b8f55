"""Circular ordering, weighted crossings, and chord geometry."""

from __future__ import annotations

import itertools
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from bspprof.aggregate import FrameGraph
from bspprof.layout import (ChordLayout, CircularOrder, GapConfig, TWO_PI,
                            WeightKind, chord_geometry, circular_order,
                            group_keys, layout_stability,
                            preserves_relative_order, weighted_crossings)
from bspprof.model import InclusionTree, Level

MSG = WeightKind.MESSAGES


def frame_from_edges(units, edges, level=Level.HOST) -> FrameGraph:
    """edges: {(a, b): m} with bytes fixed at 8 per message."""
    full = {k: (m, 8 * m) for k, m in edges.items()}
    return FrameGraph(1, 1, level, tuple(units), {}, full)


def single_rack_tree(hosts: dict[str, list[str]]) -> InclusionTree:
    rows = []
    for host, workers in hosts.items():
        for w in workers:
            rows.append(("rack1", host, w, 1))
    return InclusionTree.build(rows)


# Weighted crossings ------------------------------------------------------

class TestWeightedCrossings:
    def test_triangle_has_none(self):
        units = ["a", "b", "c"]
        frame = frame_from_edges(units, {("a", "b"): 1, ("b", "c"): 1, ("a", "c"): 1})
        for perm in itertools.permutations(units):
            assert weighted_crossings(list(perm), frame, MSG) == 0

    def test_star_has_none(self):
        units = ["hub", "x", "y", "z"]
        frame = frame_from_edges(units, {("hub", "x"): 5, ("hub", "y"): 2,
                                         ("z", "hub"): 9})
        assert weighted_crossings(units, frame, MSG) == 0

    def test_k5_unit_weight(self):
        units = [f"u{i}" for i in range(5)]
        edges = {(units[i], units[j]): 1
                 for i in range(5) for j in range(i + 1, 5)}
        frame = frame_from_edges(units, edges)
        rng = random.Random(0)
        for _ in range(10):
            order = units[:]
            rng.shuffle(order)
            # Every 4-subset in convex position contributes one crossing of
            # weight 1 + 1.
            assert weighted_crossings(order, frame, MSG) == 10

    def test_weighted_pair(self):
        units = ["a", "b", "c", "d"]
        frame = frame_from_edges(units, {("a", "c"): 3, ("b", "d"): 4})
        assert weighted_crossings(units, frame, MSG) == 7
        assert weighted_crossings(["a", "c", "b", "d"], frame, MSG) == 0

    def test_self_loops_never_cross(self):
        units = ["a", "b", "c", "d"]
        frame = frame_from_edges(units, {("a", "a"): 99, ("a", "c"): 1,
                                         ("b", "d"): 1})
        assert weighted_crossings(units, frame, MSG) == 2

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 5), st.booleans(), st.integers(0, 2 ** 16))
    def test_rotation_reflection_invariance(self, shift, reflect, seed):
        rng = random.Random(seed)
        units = [f"u{i}" for i in range(6)]
        edges = {}
        for a in units:
            for b in units:
                if a < b and rng.random() < 0.5:
                    edges[(a, b)] = rng.randint(1, 9)
        frame = frame_from_edges(units, edges)
        base = weighted_crossings(units, frame, MSG)
        moved = units[shift:] + units[:shift]
        if reflect:
            moved = moved[::-1]
        assert weighted_crossings(moved, frame, MSG) == base


# Circular order ----------------------------------------------------------

def brute_force_optimum(frame: FrameGraph, tree: InclusionTree) -> int:
    """Exhaustive minimum over hierarchy-feasible circular orders."""
    hosts = [list(ws) for _, ws in tree.hosts]
    best = None
    for host_perm in itertools.permutations(hosts):
        for inner in itertools.product(*(itertools.permutations(h) for h in host_perm)):
            order = [w for block in inner for w in block]
            value = weighted_crossings(order, frame, MSG)
            if best is None or value < best:
                best = value
    return best


class TestCircularOrder:
    def test_single_host_triangle(self):
        tree = single_rack_tree({"h1": ["w1", "w2", "w3"]})
        frame = frame_from_edges(["w1", "w2", "w3"],
                                 {("w1", "w2"): 1, ("w2", "w3"): 1, ("w3", "w1"): 1},
                                 level=Level.WORKER)
        order = circular_order(frame, tree, MSG)
        assert sorted(order.units) == ["w1", "w2", "w3"]
        assert weighted_crossings(order, frame, MSG) == 0

    def test_hosts_stay_contiguous_under_pressure(self):
        # The heavy a1-b1 / a2-b2 pairs would interleave hosts if allowed.
        tree = single_rack_tree({"hA": ["a1", "a2"], "hB": ["b1", "b2"]})
        frame = frame_from_edges(
            ["a1", "a2", "b1", "b2"],
            {("a1", "b1"): 100, ("a2", "b2"): 100, ("a1", "a2"): 1,
             ("b1", "b2"): 1},
            level=Level.WORKER)
        order = circular_order(frame, tree, MSG)
        assert order.is_hierarchy_contiguous()
        positions = {u: i for i, u in enumerate(order.units)}
        assert abs(positions["a1"] - positions["a2"]) == 1
        assert abs(positions["b1"] - positions["b2"]) == 1

    def test_sifting_never_increases(self):
        rng = random.Random(5)
        for _ in range(10):
            workers = [f"w{i}" for i in range(6)]
            tree = single_rack_tree({"h1": workers[:3], "h2": workers[3:]})
            edges = {}
            for a in workers:
                for b in workers:
                    if a != b and rng.random() < 0.5:
                        edges[(a, b)] = rng.randint(1, 20)
            frame = frame_from_edges(workers, edges, level=Level.WORKER)
            objectives: list[int] = []
            circular_order(frame, tree, MSG, pass_objectives=objectives)
            assert all(b <= a for a, b in zip(objectives, objectives[1:]))

    def test_near_optimal_on_small_instances(self):
        rng = random.Random(99)
        within = 0
        total = 12
        for _ in range(total):
            n = rng.randint(4, 6)
            workers = [f"w{i}" for i in range(n)]
            split = rng.randint(1, n - 1)
            tree = single_rack_tree({"h1": workers[:split], "h2": workers[split:]})
            edges = {}
            for a in workers:
                for b in workers:
                    if a != b and rng.random() < 0.6:
                        edges[(a, b)] = rng.randint(1, 9)
            frame = frame_from_edges(workers, edges, level=Level.WORKER)
            order = circular_order(frame, tree, MSG)
            assert order.is_hierarchy_contiguous()
            got = weighted_crossings(order, frame, MSG)
            best = brute_force_optimum(frame, tree)
            if got <= 1.25 * best:
                within += 1
        assert within >= total - 2

    def test_deterministic(self):
        workers = [f"w{i}" for i in range(8)]
        tree = single_rack_tree({"h1": workers[:4], "h2": workers[4:]})
        rng = random.Random(1)
        edges = {(a, b): rng.randint(1, 9)
                 for a in workers for b in workers if a != b}
        frame = frame_from_edges(workers, edges, level=Level.WORKER)
        a = circular_order(frame, tree, MSG)
        b = circular_order(frame, tree, MSG)
        assert a.units == b.units

    def test_empty_graph_rejected(self):
        tree = single_rack_tree({"h1": ["w1"]})
        frame = FrameGraph(1, 1, Level.WORKER, (), {}, {})
        with pytest.raises(ValueError):
            circular_order(frame, tree, MSG)


class TestLayoutStability:
    def test_same_order_everywhere(self):
        order = ("a", "b", "c")
        assert layout_stability([order] * 5) == []

    def test_differing_orders_reported(self):
        violations = layout_stability([("a", "b"), ("b", "a")])
        assert len(violations) == 1

    def test_filtered_suborder(self):
        assert preserves_relative_order(("a", "b", "c", "d"), ("a", "c", "d"))
        assert not preserves_relative_order(("a", "b", "c"), ("c", "a"))


# Geometry ----------------------------------------------------------------

def order_for(units, level=Level.HOST, groups=None) -> CircularOrder:
    return CircularOrder(level=level, units=tuple(units),
                         groups=groups or {u: ("rack1",) for u in units})


NO_GAPS = GapConfig(0.0, 0.0, 0.0)


class TestChordGeometry:
    def test_two_units_single_edge(self):
        frame = frame_from_edges(["A", "B"], {("A", "B"): 10})
        layout = chord_geometry(frame, order_for(["A", "B"]), MSG, gaps=NO_GAPS)
        a, b = layout.arcs
        assert a.end - a.start == pytest.approx(math.pi)
        assert b.end - b.start == pytest.approx(math.pi)
        # A's arc is all outgoing, B's all incoming.
        assert a.out_end - a.out_start == pytest.approx(math.pi)
        assert a.in_end - a.in_start == 0
        assert b.in_end - b.in_start == pytest.approx(math.pi)
        assert len(layout.ribbons) == 1

    def test_self_loop_only_unit_fills_circle(self):
        frame = frame_from_edges(["A"], {("A", "A"): 7})
        layout = chord_geometry(frame, order_for(["A"]), MSG)
        (arc,) = layout.arcs
        assert arc.end - arc.start == pytest.approx(TWO_PI)
        assert arc.self_end - arc.self_start == pytest.approx(TWO_PI)
        assert layout.ribbons == ()

    def test_interval_proportions_example(self):
        # Independent span calculation: total weight 80, two units of 40
        # each -> pi spans; first unit splits pi as in:out = 10:30.
        frame = frame_from_edges(["A", "B"], {("B", "A"): 10, ("A", "B"): 30})
        layout = chord_geometry(frame, order_for(["A", "B"]), MSG, gaps=NO_GAPS)
        a = layout.arcs[0]
        assert a.end - a.start == pytest.approx(math.pi)
        assert a.in_end - a.in_start == pytest.approx(math.pi / 4)
        assert a.out_end - a.out_start == pytest.approx(3 * math.pi / 4)

    def test_degenerate_all_zero_frame(self):
        frame = frame_from_edges(["A", "B"], {})
        layout = chord_geometry(frame, order_for(["A", "B"]), MSG)
        assert layout.degenerate
        assert layout.ribbons == ()
        spans = [arc.end - arc.start for arc in layout.arcs]
        assert spans[0] == pytest.approx(spans[1])

    def test_filtered_units_dropped_in_place(self):
        frame = frame_from_edges(["A", "C"], {("A", "C"): 4})
        layout = chord_geometry(frame, order_for(["A", "B", "C"]), MSG)
        assert layout.units == ("A", "C")

    def test_closure_and_proportionality(self):
        rng = random.Random(17)
        for _ in range(20):
            units = [f"u{i}" for i in range(rng.randint(2, 8))]
            edges = {}
            for a in units:
                for b in units:
                    if rng.random() < 0.4:
                        edges[(a, b)] = rng.randint(1, 50)
            if not edges:
                continue
            frame = frame_from_edges(units, edges)
            layout = chord_geometry(frame, order_for(units), MSG)
            _assert_geometry_consistent(frame, layout)

    def test_worker_level_rings(self):
        tree = single_rack_tree({"h1": ["w1", "w2"], "h2": ["w3"]})
        frame = frame_from_edges(["w1", "w2", "w3"],
                                 {("w1", "w3"): 2, ("w2", "w3"): 3},
                                 level=Level.WORKER)
        order = CircularOrder(level=Level.WORKER, units=("w1", "w2", "w3"),
                              groups=group_keys(tree, Level.WORKER))
        layout = chord_geometry(frame, order, MSG)
        host_bands = [r for r in layout.rings if r.level is Level.HOST]
        rack_bands = [r for r in layout.rings if r.level is Level.RACK]
        assert {b.label for b in host_bands} == {"h1", "h2"}
        assert [b.label for b in rack_bands] == ["rack1"]


def _assert_geometry_consistent(frame: FrameGraph, layout: ChordLayout) -> None:
    """Independent closure and share checks used by several tests."""
    total_span = sum(arc.end - arc.start for arc in layout.arcs)
    gap_total = TWO_PI - total_span
    assert gap_total >= -1e-9

    def weight(u, v):
        return frame.edges.get((u, v), (0, 0))[0]

    units = layout.units
    # Each non-self edge feeds both endpoints' spans; self-loops feed one.
    grand = sum(2 * weight(u, v) if u != v else weight(u, u)
                for u in units for v in units)
    for arc in layout.arcs:
        u = arc.unit
        inc = sum(weight(v, u) for v in units if v != u)
        out = sum(weight(u, v) for v in units if v != u)
        self_w = weight(u, u)
        share = (inc + out + self_w) / grand
        assert (arc.end - arc.start) / total_span == pytest.approx(share, rel=1e-9, abs=1e-12)
        whole = inc + out + self_w
        if whole:
            span = arc.end - arc.start
            assert (arc.in_end - arc.in_start) / span == pytest.approx(inc / whole, rel=1e-9, abs=1e-12)
            assert (arc.out_end - arc.out_start) / span == pytest.approx(out / whole, rel=1e-9, abs=1e-12)
            assert (arc.self_end - arc.self_start) / span == pytest.approx(self_w / whole, rel=1e-9, abs=1e-12)
    # Ribbon widths partition each interval.
    for arc in layout.arcs:
        out_ribbons = [r for r in layout.ribbons if r.src == arc.unit]
        if out_ribbons:
            width = sum(r.src_end - r.src_start for r in out_ribbons)
            assert width == pytest.approx(arc.out_end - arc.out_start, rel=1e-9, abs=1e-12)
        in_ribbons = [r for r in layout.ribbons if r.dst == arc.unit]
        if in_ribbons:
            width = sum(r.dst_end - r.dst_start for r in in_ribbons)
            assert width == pytest.approx(arc.in_end - arc.in_start, rel=1e-9, abs=1e-12)
