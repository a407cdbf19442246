"""The efficiency graph: an undirected graph whose a-y vertex cuts are the
observable adjustment sets (restricted to ancestors of ``{a, y} | l``).

Construction:

1. ``h0`` is the moral graph of the proper back-door graph restricted to
   ``an({a, y} | l)``.
2. The *ignore* set holds the hidden or forbidden vertices of that ancestral
   set (``a`` and ``y`` excepted). They are removed, and any two surviving
   vertices joined in ``h0`` through a path whose interior lies entirely in
   the ignore set become adjacent.
3. Every policy covariate is joined to both ``a`` and ``y``.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

from .adjustment import Query, _forb, _pbd, check_query
from .errors import InvalidVertex, OverlapError, PreconditionViolation
from .graph import Dag, UGraph, VertexSet, ancestors, moralize, separated, vset

__all__ = ["EfficiencyGraph", "build_h0", "build_h1", "h1_preserves_separation"]


@dataclass(frozen=True)
class EfficiencyGraph:
    """``h1`` plus the data it was built from.

    ``h0`` and ``h1`` use the DAG's vertex ids, so ``dag.labels`` translates
    any vertex of either graph back to its label.
    """

    h1: UGraph
    ignore: VertexSet
    h0: UGraph
    query: Query
    dag: Dag

    def label(self, v: int) -> str:
        return self.dag.labels[v]


def build_h0(g: Dag, q: Query) -> UGraph:
    check_query(g, q)
    an = ancestors(g, (q.a, q.y, *q.l))
    return moralize(_pbd(g, q), an)


def _components(h: UGraph, within: set[int]) -> list[set[int]]:
    seen = set()
    comps = []
    for s in sorted(within):
        if s in seen:
            continue
        comp = {s}
        stack = [s]
        while stack:
            v = stack.pop()
            for w in h.neighbors(v):
                if w in within and w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        comps.append(comp)
    return comps


def build_h1(g: Dag, q: Query) -> EfficiencyGraph:
    check_query(g, q)
    an = set(ancestors(g, (q.a, q.y, *q.l)))
    h0 = moralize(_pbd(g, q), an)
    forb = _forb(g, q)
    n = set(q.n)
    ignore = {v for v in an - {q.a, q.y} if v not in n or v in forb}
    keep = an - ignore

    edges = {(u, v) for u, v in h0.edges if u in keep and v in keep}
    # Two kept vertices are linked through the ignore set iff both touch a
    # common connected component of h0 restricted to the ignore set.
    for comp in _components(h0, ignore):
        touch = set()
        for v in comp:
            touch.update(w for w in h0.neighbors(v) if w in keep)
        touch = sorted(touch)
        for i in range(len(touch)):
            for j in range(i + 1, len(touch)):
                edges.add((touch[i], touch[j]))
    for ell in q.l:
        edges.add((min(q.a, ell), max(q.a, ell)))
        edges.add((min(q.y, ell), max(q.y, ell)))
    return EfficiencyGraph(UGraph(keep, edges), vset(ignore), h0, q, g)


def h1_preserves_separation(eg: EfficiencyGraph, u: int, v: int, w: Iterable[int]) -> tuple[bool, bool]:
    """``(separated in h0, separated in h1)`` for ``u``, ``v`` given ``w``.

    Requires ``l <= w <= V(h1)``; under that condition the two flags agree.
    """
    w = vset(w)
    for x in (u, v, *w):
        if x not in eg.h1:
            raise InvalidVertex(f"vertex {x} is not in h1")
    if u == v or u in w or v in w:
        raise OverlapError("u, v and w must be disjoint")
    if not set(eg.query.l) <= set(w):
        raise PreconditionViolation("conditioning set must contain every policy covariate")
    return separated(eg.h0, (u,), (v,), w), separated(eg.h1, (u,), (v,), w)
