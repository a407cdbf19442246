import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles as bf
from optadj import (
    InvalidVertex,
    OverlapError,
    PreconditionViolation,
    Query,
    build_h0,
    build_h1,
    forbidden_set,
    h1_preserves_separation,
)
from optadj.generate import random_instance
from optadj.graph import ancestors
from optadj.io import load_example


def setup(name, policy=()):
    g = load_example(name)
    return g, Query.for_dag(g, "A", "Y", policy)


def uedges(g, h):
    return {frozenset((g.labels[u], g.labels[w])) for u, w in h.edges}


def pairs(*items):
    return {frozenset(p.split("-")) for p in items}


class TestH0:
    def test_first_example(self):
        g, q = setup("fig1", ["L"])
        assert uedges(g, build_h0(g, q)) == pairs("F-A", "L-A", "L-F", "L-U", "U-F", "U-Y", "M-Y", "M-U")

    def test_third_example(self):
        g, q = setup("fig3")
        h0 = build_h0(g, q)
        assert set(g.label_set(h0.vertices)) == {"A", "Y", "Z1", "U"}
        assert uedges(g, h0) == pairs("Z1-A", "U-Y")

    def test_fourth_example(self):
        g, q = setup("fig4", ["L"])
        assert uedges(g, build_h0(g, q)) == pairs("L-A", "U-Y")


class TestH1:
    def test_first_example(self):
        g, q = setup("fig1", ["L"])
        eg = build_h1(g, q)
        assert uedges(g, eg.h1) == pairs("F-A", "L-A", "L-F", "L-Y", "F-Y")
        assert set(g.label_set(eg.ignore)) == {"M", "U"}

    def test_third_example(self):
        g, q = setup("fig3")
        h1 = build_h1(g, q).h1
        assert set(g.label_set(h1.vertices)) == {"A", "Y", "Z1"}
        assert uedges(g, h1) == pairs("Z1-A")

    def test_fourth_example(self):
        g, q = setup("fig4", ["L"])
        assert uedges(g, build_h1(g, q).h1) == pairs("L-A", "L-Y")

    @pytest.mark.parametrize("k", [3, 5, 10])
    def test_nothing_ignored_in_two_stage_graph(self, k):
        g, q = setup(f"fig5k{k}")
        eg = build_h1(g, q)
        assert eg.ignore == ()
        assert eg.h0 == eg.h1

    @settings(max_examples=80, deadline=None)
    @given(st.integers(0, 10**6))
    def test_vertex_set_and_policy_edges(self, seed):
        rng = random.Random(seed)
        g, q = random_instance(seed, rng.randint(3, 9), rng.randint(0, 3), 0.35)
        eg = build_h1(g, q)
        an = set(ancestors(g, (q.a, q.y, *q.l)))
        forb = set(forbidden_set(g, q)) - {q.a, q.y}
        assert set(eg.h1.vertices) == (an & set(q.n)) - forb
        assert set(eg.ignore) == (an - {q.a, q.y}) & ((set(g.vertices) - set(q.n)) | forb)
        for ell in q.l:
            assert eg.h1.has_edge(ell, q.a) and eg.h1.has_edge(ell, q.y)

    @settings(max_examples=80, deadline=None)
    @given(st.integers(0, 10**6))
    def test_edges_follow_paths_through_ignored_vertices(self, seed):
        """u - v in h1 iff an h0 path joins them with interior in the ignore set (policy edges aside)."""
        rng = random.Random(seed)
        g, q = random_instance(seed, rng.randint(3, 9), rng.randint(0, 3), 0.35)
        eg = build_h1(g, q)
        ignore = set(eg.ignore)
        keep = list(eg.h1.vertices)
        h0v, h0e = eg.h0.vertices, eg.h0.edges
        for i, u in enumerate(keep):
            for v in keep[i + 1 :]:
                blocked = [x for x in h0v if x not in ignore and x not in (u, v)]
                linked = bf.u_connected(h0v, h0e, u, v, blocked)
                policy = (u in q.l and v in (q.a, q.y)) or (v in q.l and u in (q.a, q.y))
                assert eg.h1.has_edge(u, v) == (linked or policy)


class TestSeparationPreserved:
    def test_examples(self):
        g, q = setup("fig1", ["L"])
        eg = build_h1(g, q)
        assert h1_preserves_separation(eg, q.a, q.y, g.ids(["L", "F"])) == (True, True)
        g, q = setup("fig4", ["L"])
        eg = build_h1(g, q)
        assert h1_preserves_separation(eg, q.a, q.y, g.ids(["L"])) == (True, True)

    def test_errors(self):
        g, q = setup("fig1", ["L"])
        eg = build_h1(g, q)
        with pytest.raises(PreconditionViolation):
            h1_preserves_separation(eg, q.a, q.y, g.ids(["F"]))
        with pytest.raises(InvalidVertex):
            h1_preserves_separation(eg, q.a, g.index("M"), g.ids(["L"]))
        with pytest.raises(OverlapError):
            h1_preserves_separation(eg, q.a, q.y, g.ids(["L", "A"]))

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10**6))
    def test_flags_agree(self, seed):
        rng = random.Random(seed)
        g, q = random_instance(seed, rng.randint(3, 8), rng.randint(0, 3), 0.4)
        eg = build_h1(g, q)
        verts = list(eg.h1.vertices)
        for _ in range(10):
            u, v = rng.sample(verts, 2)
            if u in q.l or v in q.l:
                continue
            rest = [x for x in verts if x not in (u, v) and x not in q.l]
            w = list(q.l) + [x for x in rest if rng.random() < 0.4]
            s0, s1 = h1_preserves_separation(eg, u, v, w)
            assert s0 == s1
