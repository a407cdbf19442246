import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles as bf
from optadj import (
    CutKind,
    NoFiniteCut,
    NotACut,
    Query,
    build_h1,
    cut_meet,
    cut_partial_order,
    disjoint_paths,
    find_opt,
    find_opt_minimal,
    find_opt_minimum,
    is_in_minimum,
    min_cut_size,
)
from optadj.cuts import _network
from optadj.generate import random_instance, random_ugraph
from optadj.graph import Dag, UGraph
from optadj.io import load_example


def setup(name, policy=()):
    g = load_example(name)
    q = Query.for_dag(g, "A", "Y", policy)
    return g, q, build_h1(g, q).h1


def ids(g, names):
    return g.ids(names)


class TestPaths:
    def test_examples(self):
        g, q, h = setup("fig5k5")
        bundle = disjoint_paths(h, q.a, q.y)
        assert len(bundle) == 1 and g.index("T") in bundle.paths[0]
        assert min_cut_size(h, q.a, q.y) == 1
        g, q, h = setup("fig1", ["L"])
        paths = {tuple(g.labels[v] for v in p) for p in disjoint_paths(h, q.a, q.y).paths}
        assert paths == {("A", "L", "Y"), ("A", "F", "Y")}
        assert min_cut_size(h, q.a, q.y) == 2
        g, q, h = setup("fig3")
        assert len(disjoint_paths(h, q.a, q.y)) == 0

    def test_adjacent_terminals(self):
        h = UGraph([0, 1], [(0, 1)])
        with pytest.raises(NoFiniteCut):
            disjoint_paths(h, 0, 1)

    def test_disconnected(self):
        assert min_cut_size(UGraph([0, 1, 2]), 0, 2) == 0

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 10**6))
    def test_menger(self, seed):
        rng = random.Random(seed)
        n = rng.randint(3, 9)
        h = random_ugraph(n, rng.uniform(0.2, 0.7), seed)
        free = [(a, y) for a in range(n) for y in range(n) if a != y and not h.has_edge(a, y)]
        if not free:
            return
        a, y = rng.choice(free)
        assert min_cut_size(h, a, y) == min(len(z) for z in bf.all_cuts(h.vertices, h.edges, a, y))


class TestIsInMinimum:
    def test_examples(self):
        g, q, h = setup("fig5k5")
        assert is_in_minimum(h, q.a, q.y, g.index("T"))
        assert not is_in_minimum(h, q.a, q.y, g.index("W6"))
        g, q, h = setup("fig1", ["L"])
        assert is_in_minimum(h, q.a, q.y, g.index("L"))

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 10**6))
    def test_matches_brute_force_and_warm_probe(self, seed):
        rng = random.Random(seed)
        n = rng.randint(3, 9)
        h = random_ugraph(n, rng.uniform(0.2, 0.6), seed)
        free = [(a, y) for a in range(n) for y in range(n) if a != y and not h.has_edge(a, y)]
        if not free:
            return
        a, y = rng.choice(free)
        cuts = bf.minimum_cuts(h.vertices, h.edges, a, y)
        on_some = set().union(*cuts)
        net = _network(h, a, y)
        reach = net.residual_reach()
        for v in h.vertices:
            if v in (a, y):
                continue
            literal = is_in_minimum(h, a, y, v)
            assert literal == (v in on_some)
            assert literal == (not net.augments_with(v, reach))


class TestOptimalSets:
    def test_first_example(self):
        g, q, _ = setup("fig1", ["L"])
        for f in (find_opt, find_opt_minimal, find_opt_minimum):
            assert set(f(g, q).labels) == {"L", "F"}
        assert find_opt(g, q).global_guaranteed

    @pytest.mark.parametrize("k", [3, 5, 10])
    def test_two_stage(self, k):
        g, q, _ = setup(f"fig5k{k}")
        o = find_opt(g, q)
        assert set(o.labels) == {f"W{i}" for i in range(1, k + 2)} and o.global_guaranteed
        assert set(find_opt_minimal(g, q).labels) == {f"W{i}" for i in range(1, k + 1)}
        assert find_opt_minimum(g, q).labels == ("T",)

    def test_third_example(self):
        g, q, _ = setup("fig3")
        for f in (find_opt_minimal, find_opt_minimum):
            r = f(g, q)
            assert r.vertices == () and r.admissible

    def test_fourth_example(self):
        g, q, _ = setup("fig4", ["L"])
        o = find_opt(g, q)
        assert o.labels == ("L",) and o.global_guaranteed is False
        assert find_opt_minimal(g, q).labels == ("L",)

    def test_no_admissible_set(self):
        g = Dag.from_labels(["A", "Y", "U"], [("A", "Y"), ("U", "A"), ("U", "Y")], hidden=["U"])
        q = Query.for_dag(g, "A", "Y")
        for f, kind in ((find_opt, CutKind.GLOBAL), (find_opt_minimal, CutKind.OPTIMAL_MINIMAL), (find_opt_minimum, CutKind.OPTIMAL_MINIMUM)):
            r = f(g, q)
            assert r.vertices is None and not r.admissible and r.kind is kind

    @settings(max_examples=80, deadline=None)
    @given(st.integers(0, 10**6))
    def test_minimum_size_equals_flow(self, seed):
        rng = random.Random(seed)
        g, q = random_instance(seed, rng.randint(3, 10), rng.randint(0, 3), 0.35)
        h = build_h1(g, q).h1
        o_m = find_opt_minimum(g, q).vertices
        assert len(o_m) == min_cut_size(h, q.a, q.y)
        assert not bf.u_connected(h.vertices, h.edges, q.a, q.y, o_m)

    @settings(max_examples=80, deadline=None)
    @given(st.integers(0, 10**6))
    def test_sink_side_minimum_cut(self, seed):
        """O_m is the minimum cut nearest the outcome: read it off the residual graph from the outcome side."""
        rng = random.Random(seed)
        g, q = random_instance(seed, rng.randint(3, 10), rng.randint(0, 3), 0.35)
        net = _network(build_h1(g, q).h1, q.a, q.y)
        # nodes that can still reach the sink in the residual network
        rev = {u: [] for u in range(len(net.adj))}
        for u, arcs in enumerate(net.adj):
            for e in arcs:
                if net.cap[e]:
                    rev[net.head[e]].append(u)
        to_sink, stack = {net.sink}, [net.sink]
        while stack:
            for u in rev[stack.pop()]:
                if u not in to_sink:
                    to_sink.add(u)
                    stack.append(u)
        cut = {v for v in net.h.vertices if v not in (q.a, q.y) and net.out_node(v) in to_sink and net.in_node(v) not in to_sink}
        assert cut == set(find_opt_minimum(g, q).vertices)


class TestOrderAndMeet:
    def test_two_stage_order(self):
        g, q, h = setup("fig2")
        ws = ids(g, ["W1", "W2", "W3"])
        t = ids(g, ["T"])
        assert cut_partial_order(h, q.a, q.y, ws, t)
        assert not cut_partial_order(h, q.a, q.y, t, ws)
        assert cut_partial_order(h, q.a, q.y, t, t)

    def test_meet(self):
        g, q, h = setup("fig2")
        ws = ids(g, ["W1", "W2", "W3"])
        t = ids(g, ["T"])
        assert cut_meet(h, q.a, q.y, t, t) == t
        assert cut_meet(h, q.a, q.y, ws, t) == ws

    def test_not_a_cut(self):
        g, q, h = setup("fig1", ["L"])
        with pytest.raises(NotACut):
            cut_partial_order(h, q.a, q.y, ids(g, ["L"]), ids(g, ["L", "F"]))
        with pytest.raises(NotACut):
            cut_meet(h, q.a, q.y, ids(g, ["L", "F"]), ids(g, ["M"]))

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10**6))
    def test_meet_is_a_lower_bound_in_the_union(self, seed):
        rng = random.Random(seed)
        g, q = random_instance(seed, rng.randint(3, 8), rng.randint(0, 2), 0.4)
        h = build_h1(g, q).h1
        cuts = bf.minimal_cuts(h.vertices, h.edges, q.a, q.y)
        for _ in range(5):
            z1, z2 = rng.choice(cuts), rng.choice(cuts)
            m = set(cut_meet(h, q.a, q.y, z1, z2))
            assert m <= z1 | z2
            assert frozenset(m) in cuts
            assert cut_partial_order(h, q.a, q.y, m, z1) and cut_partial_order(h, q.a, q.y, m, z2)
            assert bf.precedes(h.vertices, h.edges, q.a, q.y, frozenset(m), z1)
