"""Vertex cuts in the efficiency graph and the three optimal adjustment sets.

Disjoint paths and minimum cut sizes come from a unit-capacity max-flow on
the split-vertex network: every vertex other than the two terminals becomes
an ``in -> out`` arc of capacity one and every undirected edge ``u - w``
becomes the uncapacitated arcs ``u_out -> w_in`` and ``w_out -> u_in``, so
every minimum network cut is made of vertex arcs. Blocking flows (Dinic)
keep the cost at O(sqrt(V) E).
"""

from __future__ import annotations

import enum
from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass

from .adjustment import Query, check_query, exists_adjustment
from .efficiency import build_h1
from .errors import InvalidVertex, NoFiniteCut, NotACut, OverlapError
from .graph import Dag, UGraph, VertexSet, ancestors, boundary, connected_component, separated, u_separated, vset

__all__ = [
    "CutKind",
    "CutResult",
    "PathBundle",
    "disjoint_paths",
    "min_cut_size",
    "is_in_minimum",
    "find_opt_minimum",
    "find_opt_minimal",
    "find_opt",
    "cut_partial_order",
    "cut_meet",
]


class CutKind(enum.Enum):
    GLOBAL = "Global"
    OPTIMAL_MINIMAL = "OptimalMinimal"
    OPTIMAL_MINIMUM = "OptimalMinimum"


@dataclass(frozen=True)
class CutResult:
    """One of O, O_min, O_m.

    ``vertices`` is ``None`` (never an empty tuple) when no adjustment set
    exists; an empty tuple means the empty set is the answer.
    """

    kind: CutKind
    vertices: VertexSet | None
    labels: tuple[str, ...] | None
    admissible: bool
    global_guaranteed: bool | None = None

    @classmethod
    def no_admissible_set(cls, kind: CutKind) -> CutResult:
        return cls(kind, None, None, False, False if kind is CutKind.GLOBAL else None)


@dataclass(frozen=True)
class PathBundle:
    paths: tuple[tuple[int, ...], ...]

    def __len__(self):
        return len(self.paths)


class _SplitNetwork:
    """Residual network for inner-vertex-disjoint a-y paths in ``h``."""

    def __init__(self, h: UGraph, a: int, y: int):
        self.h, self.a, self.y = h, a, y
        self.idx = {v: i for i, v in enumerate(h.vertices)}
        n = 2 * len(self.idx)
        self.adj: list[list[int]] = [[] for _ in range(n)]
        self.head: list[int] = []
        self.cap: list[int] = []
        self.source = self.out_node(a)
        self.sink = self.in_node(y)
        # larger than any flow value, so edge arcs never saturate
        unbounded = len(self.idx) + 1
        for v in h.vertices:
            if v != a and v != y:
                self._arc(self.in_node(v), self.out_node(v), 1)
        for v in h.vertices:
            if v == y:
                continue
            for w in sorted(h.neighbors(v)):
                if w == a:
                    continue
                self._arc(self.out_node(v), self.in_node(w), unbounded)
        self.flow = 0

    def in_node(self, v: int) -> int:
        return 2 * self.idx[v]

    def out_node(self, v: int) -> int:
        return 2 * self.idx[v] + 1

    def _arc(self, u: int, w: int, cap: int) -> None:
        self.adj[u].append(len(self.head))
        self.head.append(w)
        self.cap.append(cap)
        self.adj[w].append(len(self.head))
        self.head.append(u)
        self.cap.append(0)

    def _levels(self) -> list[int] | None:
        level = [-1] * len(self.adj)
        level[self.source] = 0
        queue = deque([self.source])
        head, cap, adj = self.head, self.cap, self.adj
        while queue:
            u = queue.popleft()
            for e in adj[u]:
                w = head[e]
                if cap[e] and level[w] < 0:
                    level[w] = level[u] + 1
                    queue.append(w)
        return level if level[self.sink] >= 0 else None

    def _blocking_flow(self, level: list[int]) -> int:
        head, cap, adj = self.head, self.cap, self.adj
        ptr = [0] * len(adj)
        pushed = 0
        while True:
            # Iterative DFS along the level graph. Every source-sink path
            # crosses a unit vertex arc, so each descent carries one unit.
            stack = [self.source]
            arcs: list[int] = []
            while stack:
                u = stack[-1]
                if u == self.sink:
                    break
                advanced = False
                while ptr[u] < len(adj[u]):
                    e = adj[u][ptr[u]]
                    w = head[e]
                    if cap[e] and level[w] == level[u] + 1:
                        stack.append(w)
                        arcs.append(e)
                        advanced = True
                        break
                    ptr[u] += 1
                if not advanced:
                    stack.pop()
                    if arcs:
                        dead = arcs.pop()
                        ptr[head[dead ^ 1]] += 1
                    level[u] = -1
            if not stack:
                return pushed
            for e in arcs:
                cap[e] -= 1
                cap[e ^ 1] += 1
            pushed += 1

    def max_flow(self) -> int:
        while True:
            level = self._levels()
            if level is None:
                return self.flow
            self.flow += self._blocking_flow(level)

    def _carries(self, e: int) -> bool:
        # forward arcs have even ids; flow on an arc is the residual of its reverse
        return e % 2 == 0 and self.cap[e ^ 1] > 0

    def paths(self) -> tuple[tuple[int, ...], ...]:
        verts = self.h.vertices
        out = []
        for e0 in self.adj[self.source]:
            if self._carries(e0):
                path = [self.a]
                node = self.head[e0]
                while node != self.sink:
                    v = verts[node // 2]
                    path.append(v)
                    nxt = None
                    for e in self.adj[self.out_node(v)]:
                        if self._carries(e):
                            nxt = self.head[e]
                            break
                    node = nxt
                path.append(self.y)
                out.append(tuple(path))
        return tuple(out)

    def residual_reach(self) -> set[int]:
        seen = {self.source}
        stack = [self.source]
        head, cap, adj = self.head, self.cap, self.adj
        while stack:
            u = stack.pop()
            for e in adj[u]:
                w = head[e]
                if cap[e] and w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen

    def augments_with(self, v: int, reach: set[int]) -> bool:
        """Would adding the edges ``a - v`` and ``v - y`` admit another unit of flow?

        ``reach`` is the residual reachable set from the source at max flow;
        it is closed under residual arcs and excludes the sink, so nodes in it
        need not be explored again.
        """
        new_av = v not in self.h.neighbors(self.a)
        new_vy = v not in self.h.neighbors(self.y)
        v_in, v_out = self.in_node(v), self.out_node(v)
        if new_vy and v_out in reach:
            return True
        if not new_av or v_in in reach:
            return False
        seen = {v_in}
        stack = [v_in]
        head, cap, adj = self.head, self.cap, self.adj
        while stack:
            u = stack.pop()
            if u == self.sink or (new_vy and u == v_out):
                return True
            for e in adj[u]:
                w = head[e]
                if cap[e] and w not in seen and w not in reach:
                    seen.add(w)
                    stack.append(w)
        return False


def _check_terminals(h: UGraph, a: int, y: int) -> None:
    for v in (a, y):
        if v not in h:
            raise InvalidVertex(f"vertex {v} is not in the graph")
    if a == y:
        raise OverlapError("endpoints must differ")
    if h.has_edge(a, y):
        raise NoFiniteCut(f"vertices {a} and {y} are adjacent; no vertex cut separates them")


def _network(h: UGraph, a: int, y: int) -> _SplitNetwork:
    _check_terminals(h, a, y)
    net = _SplitNetwork(h, a, y)
    net.max_flow()
    return net


def disjoint_paths(h: UGraph, a: int, y: int) -> PathBundle:
    """A maximum family of inner-vertex-disjoint ``a``-``y`` paths."""
    return PathBundle(_network(h, a, y).paths())


def min_cut_size(h: UGraph, a: int, y: int) -> int:
    return _network(h, a, y).flow


def is_in_minimum(h: UGraph, a: int, y: int, v: int) -> bool:
    """True iff some minimum ``a``-``y`` cut of ``h`` contains ``v``.

    Adds the edges ``a - v`` and ``v - y`` and checks that the minimum cut
    size does not grow.
    """
    _check_terminals(h, a, y)
    if v not in h:
        raise InvalidVertex(f"vertex {v} is not in the graph")
    if v in (a, y):
        raise OverlapError("probe vertex must differ from the endpoints")
    before = min_cut_size(h, a, y)
    extra = [(e1, e2) for e1, e2 in ((a, v), (v, y)) if not h.has_edge(e1, e2)]
    return min_cut_size(h.with_edges(extra), a, y) == before


def _resolve(g: Dag, q: Query, kind: CutKind, vertices: Iterable[int], **kw) -> CutResult:
    vs = vset(vertices)
    return CutResult(kind, vs, g.label_set(vs), True, **kw)


def find_opt_minimum(g: Dag, q: Query) -> CutResult:
    """O_m: the optimal adjustment set among those of minimum cardinality.

    Takes a maximum family of disjoint paths in ``h1`` and, scanning each
    path from the ``y`` end, keeps the first vertex lying on some minimum
    cut. Membership probes reuse the max flow already computed: ``v`` lies
    on a minimum cut iff adding ``a - v - y`` admits no augmenting path.
    """
    check_query(g, q)
    if not exists_adjustment(g, q):
        return CutResult.no_admissible_set(CutKind.OPTIMAL_MINIMUM)
    h = build_h1(g, q).h1
    net = _network(h, q.a, q.y)
    reach = net.residual_reach()
    out = []
    for path in net.paths():
        for v in reversed(path[1:-1]):
            if not net.augments_with(v, reach):
                out.append(v)
                break
        else:
            raise AssertionError(f"no minimum-cut vertex found on path {path}")
    return _resolve(g, q, CutKind.OPTIMAL_MINIMUM, out)


def find_opt_minimal(g: Dag, q: Query) -> CutResult:
    """O_min: neighbours of ``y`` in ``h1`` reachable from ``a`` without
    passing through another neighbour of ``y``."""
    check_query(g, q)
    if not exists_adjustment(g, q):
        return CutResult.no_admissible_set(CutKind.OPTIMAL_MINIMAL)
    h = build_h1(g, q).h1
    nb = h.neighbors(q.y)
    out = set()
    visited = set()
    stack = [q.a]
    while stack:
        v = stack.pop()
        if v in visited:
            continue
        visited.add(v)
        if v in nb:
            out.add(v)
        else:
            stack.extend(sorted(h.neighbors(v), reverse=True))
    return _resolve(g, q, CutKind.OPTIMAL_MINIMAL, out)


def global_optimality_guaranteed(g: Dag, q: Query) -> bool:
    """``n`` within ``an({a, y} | l)``, or nothing hidden (``n`` is every vertex)."""
    an = set(ancestors(g, (q.a, q.y, *q.l)))
    return set(q.n) <= an or len(q.n) == g.n


def find_opt(g: Dag, q: Query) -> CutResult:
    """O: the neighbours of ``y`` in ``h1``.

    Always a valid adjustment set for an admissible pair;
    ``global_guaranteed`` flags the cases where it is known to be globally
    optimal.
    """
    check_query(g, q)
    if not exists_adjustment(g, q):
        return CutResult.no_admissible_set(CutKind.GLOBAL)
    h = build_h1(g, q).h1
    return _resolve(g, q, CutKind.GLOBAL, h.neighbors(q.y), global_guaranteed=global_optimality_guaranteed(g, q))


def _require_cut(h1: UGraph, a: int, y: int, z: VertexSet, name: str) -> None:
    if any(v not in h1 for v in z) or a in z or y in z or not u_separated(h1, a, y, z):
        raise NotACut(f"{name}={list(z)} is not an a-y cut")


def cut_partial_order(h1: UGraph, a: int, y: int, z1: Iterable[int], z2: Iterable[int]) -> bool:
    """``z1`` precedes ``z2``: ``z1`` separates ``y`` from ``z2 - z1`` and
    ``z2`` separates ``a`` from ``z1 - z2``."""
    z1, z2 = vset(z1), vset(z2)
    _require_cut(h1, a, y, z1, "z1")
    _require_cut(h1, a, y, z2, "z2")
    s1, s2 = set(z1), set(z2)
    return separated(h1, (y,), s2 - s1, z1) and separated(h1, (a,), s1 - s2, z2)


def cut_meet(h1: UGraph, a: int, y: int, z1: Iterable[int], z2: Iterable[int]) -> VertexSet:
    """Lattice infimum of two minimal cuts: the boundary of ``y``'s component
    once ``z1 | z2`` is removed."""
    z1, z2 = vset(z1), vset(z2)
    _require_cut(h1, a, y, z1, "z1")
    _require_cut(h1, a, y, z2, "z2")
    return boundary(h1, connected_component(h1, set(z1) | set(z2), y))
