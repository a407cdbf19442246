"""Adjustment sets on a DAG: causal nodes, forbidden set, validity, admissibility."""

from __future__ import annotations

import enum
from collections.abc import Iterable
from dataclasses import dataclass

from .errors import InclusionViolation, InvalidAdjustmentSet, OverlapError
from .graph import Dag, VertexSet, ancestors, d_separated, descendants, vset

__all__ = [
    "Query",
    "Clause",
    "ValidityCertificate",
    "Comparison",
    "causal_nodes",
    "forbidden_set",
    "proper_backdoor_graph",
    "is_adjustment_set",
    "exists_adjustment",
    "canonical_adjustment",
    "graphical_compare",
]


@dataclass(frozen=True)
class Query:
    """Treatment ``a``, outcome ``y``, policy covariates ``l`` and observables ``n``.

    Build with :meth:`for_dag`, which resolves labels and checks the
    inclusion assumptions against the graph.
    """

    a: int
    y: int
    l: VertexSet = ()
    n: VertexSet = ()

    @classmethod
    def for_dag(cls, g: Dag, a, y, l: Iterable = (), n: Iterable | None = None) -> Query:
        a = g.vertex(a)
        y = g.vertex(y)
        l = g.ids(l)
        n = g.observed if n is None else g.ids(n)
        q = cls(a, y, l, n)
        check_query(g, q)
        return q

    def labels(self, g: Dag) -> dict:
        return {
            "exposure": g.labels[self.a],
            "outcome": g.labels[self.y],
            "policy": list(g.label_set(self.l)),
            "observed": list(g.label_set(self.n)),
        }


def check_query(g: Dag, q: Query) -> None:
    """Raise :class:`InclusionViolation` listing every broken inclusion assumption."""
    for v in (q.a, q.y, *q.l, *q.n):
        g.vertex(v)
    problems = []
    if q.a == q.y:
        problems.append("exposure and outcome must be distinct vertices")
    elif q.a not in ancestors(g, (q.y,)):
        problems.append(f"exposure {g.labels[q.a]} is not an ancestor of outcome {g.labels[q.y]}")
    n = set(q.n)
    missing = [v for v in (q.a, q.y, *q.l) if v not in n]
    if missing:
        problems.append(f"not observed: {', '.join(g.label_set(missing))}")
    bad_l = set(q.l) & set(descendants(g, (q.a,)))
    if bad_l:
        problems.append(f"policy covariates descend from the exposure: {', '.join(g.label_set(bad_l))}")
    if problems:
        raise InclusionViolation(problems)


class Clause(enum.Enum):
    NONE = "None"
    NOT_BETWEEN_L_AND_N = "NotBetweenLandN"
    INTERSECTS_FORBIDDEN = "IntersectsForbidden"
    SEPARATION_FAILS = "SeparationFails"


@dataclass(frozen=True)
class ValidityCertificate:
    valid: bool
    violated_clause: Clause = Clause.NONE

    def __bool__(self):
        return self.valid


class Comparison(enum.Enum):
    G_NOT_WORSE = "GNotWorse"
    INCOMPARABLE = "Incomparable"


def _cn(g: Dag, q: Query) -> set[int]:
    return (set(descendants(g, (q.a,))) & set(ancestors(g, (q.y,)))) - {q.a}


def causal_nodes(g: Dag, q: Query) -> VertexSet:
    """Vertices other than ``a`` on a causal path from ``a`` to ``y``."""
    check_query(g, q)
    return vset(_cn(g, q))


def _forb(g: Dag, q: Query) -> set[int]:
    return set(descendants(g, _cn(g, q))) | {q.a}


def forbidden_set(g: Dag, q: Query) -> VertexSet:
    check_query(g, q)
    return vset(_forb(g, q))


def _pbd(g: Dag, q: Query) -> Dag:
    an_y = set(ancestors(g, (q.y,)))
    return g.without_edges((q.a, c) for c in g.children(q.a) if c in an_y)


def proper_backdoor_graph(g: Dag, q: Query) -> Dag:
    """``g`` minus the first edge of every causal path from ``a`` to ``y``."""
    check_query(g, q)
    return _pbd(g, q)


def _certificate(g: Dag, q: Query, z: VertexSet, forb: set[int], pbd: Dag) -> ValidityCertificate:
    zs = set(z)
    if not (set(q.l) <= zs <= set(q.n)):
        return ValidityCertificate(False, Clause.NOT_BETWEEN_L_AND_N)
    if zs & forb:
        return ValidityCertificate(False, Clause.INTERSECTS_FORBIDDEN)
    if not d_separated(pbd, (q.y,), (q.a,), z):
        return ValidityCertificate(False, Clause.SEPARATION_FAILS)
    return ValidityCertificate(True)


def is_adjustment_set(g: Dag, q: Query, z: Iterable[int]) -> ValidityCertificate:
    """Check whether ``z`` is an L-N adjustment set.

    Clauses are tested cheapest first: ``L <= z <= N``, then disjointness
    from the forbidden set, then ``y`` d-separated from ``a`` given ``z`` in
    the proper back-door graph. The certificate names the first failure.
    """
    check_query(g, q)
    z = g.ids(z)
    if q.a in z or q.y in z:
        raise OverlapError("candidate set contains the exposure or the outcome")
    return _certificate(g, q, z, _forb(g, q), _pbd(g, q))


class AdjustmentChecker:
    """Reusable validity test for one (g, q); caches forb and the back-door graph."""

    def __init__(self, g: Dag, q: Query):
        check_query(g, q)
        self.g = g
        self.q = q
        self.forb = _forb(g, q)
        self.pbd = _pbd(g, q)

    def __call__(self, z: Iterable[int]) -> ValidityCertificate:
        z = vset(z)
        if self.q.a in z or self.q.y in z:
            raise OverlapError("candidate set contains the exposure or the outcome")
        return _certificate(self.g, self.q, z, self.forb, self.pbd)


def _canonical(g: Dag, q: Query) -> VertexSet:
    an = set(ancestors(g, (q.a, q.y, *q.l)))
    return vset((an & set(q.n)) - _forb(g, q))


def canonical_adjustment(g: Dag, q: Query) -> VertexSet:
    """``[an({a, y} | l) & n] - forb``; a valid set exists iff this one is valid."""
    check_query(g, q)
    return _canonical(g, q)


def exists_adjustment(g: Dag, q: Query) -> bool:
    """True iff ``(l, n)`` is an admissible pair."""
    check_query(g, q)
    return _certificate(g, q, _canonical(g, q), _forb(g, q), _pbd(g, q)).valid


def graphical_compare(g: Dag, q: Query, zg: Iterable[int], zb: Iterable[int]) -> Comparison:
    """Graphical sufficient condition for ``zg`` to be at least as efficient as ``zb``.

    Returns ``G_NOT_WORSE`` when ``a`` is d-separated from ``zg - zb`` given
    ``zb`` and ``y`` from ``zb - zg`` given ``zg | {a}``; the variance
    ordering then holds for every law and every policy.
    """
    check_query(g, q)
    zg, zb = g.ids(zg), g.ids(zb)
    check = AdjustmentChecker(g, q)
    for name, z in (("zg", zg), ("zb", zb)):
        if q.a in z or q.y in z or not check(z):
            raise InvalidAdjustmentSet(f"{name}={list(g.label_set(z))} is not a valid adjustment set")
    g_minus_b = set(zg) - set(zb)
    b_minus_g = set(zb) - set(zg)
    if d_separated(g, (q.a,), g_minus_b, zb) and d_separated(g, (q.y,), b_minus_g, set(zg) | {q.a}):
        return Comparison.G_NOT_WORSE
    return Comparison.INCOMPARABLE
