"""Directed and undirected graph types plus the traversal primitives.

Vertex sets are represented as sorted tuples of integer ids so that every
output is deterministic. Functions accept any iterable of ids and normalise
it with :func:`vset`.
"""

from __future__ import annotations

import re
from collections import deque
from collections.abc import Iterable

from .errors import CycleError, GraphError, InvalidVertex, OverlapError

__all__ = [
    "VertexSet",
    "vset",
    "Dag",
    "UGraph",
    "ancestors",
    "descendants",
    "induced_subgraph",
    "moralize",
    "u_separated",
    "separated",
    "d_separated",
    "connected_component",
    "boundary",
]

VertexSet = tuple[int, ...]

LABEL_RE = re.compile(r"^[A-Za-z0-9_]+$")


def vset(items: Iterable[int] = ()) -> VertexSet:
    """Sorted, deduplicated tuple of vertex ids."""
    return tuple(sorted(set(items)))


class Dag:
    """Immutable DAG over dense integer ids ``0..n-1`` with string labels.

    ``hidden`` flags vertices that are not observable. Parallel edges collapse;
    self-loops and directed cycles raise :class:`CycleError`.
    """

    __slots__ = ("labels", "edges", "hidden", "_parents", "_children", "_index", "_topo")

    def __init__(self, labels: Iterable[str], edges: Iterable[tuple[int, int]] = (), hidden: Iterable[int] = ()):
        labels = tuple(labels)
        index = {}
        for i, lab in enumerate(labels):
            if not isinstance(lab, str) or not LABEL_RE.match(lab):
                raise GraphError(f"invalid vertex label {lab!r}")
            if lab in index:
                raise GraphError(f"duplicate vertex label {lab!r}")
            index[lab] = i
        n = len(labels)
        parents = [[] for _ in range(n)]
        children = [[] for _ in range(n)]
        edge_set = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidVertex(f"edge ({u}, {v}) references an unknown vertex")
            if u == v:
                raise CycleError(f"self-loop on {labels[u]!r}")
            if (u, v) in edge_set:
                continue
            edge_set.add((u, v))
            parents[v].append(u)
            children[u].append(v)
        hidden_set = frozenset(hidden)
        for h in hidden_set:
            if not 0 <= h < n:
                raise InvalidVertex(f"hidden vertex {h} unknown")
        self.labels = labels
        self.edges = frozenset(edge_set)
        self.hidden = hidden_set
        self._parents = tuple(tuple(sorted(p)) for p in parents)
        self._children = tuple(tuple(sorted(c)) for c in children)
        self._index = index
        self._topo = self._toposort()

    @classmethod
    def from_labels(cls, labels: Iterable[str], edges: Iterable[tuple[str, str]] = (), hidden: Iterable[str] = ()) -> Dag:
        labels = list(labels)
        idx = {lab: i for i, lab in enumerate(labels)}
        try:
            e = [(idx[u], idx[v]) for u, v in edges]
            h = [idx[x] for x in hidden]
        except KeyError as exc:
            raise InvalidVertex(f"unknown vertex label {exc.args[0]!r}") from None
        return cls(labels, e, h)

    def _toposort(self) -> tuple[int, ...]:
        # Kahn's algorithm; smallest id first keeps the order deterministic.
        import heapq

        indeg = [len(p) for p in self._parents]
        heap = [v for v in range(self.n) if indeg[v] == 0]
        heapq.heapify(heap)
        order = []
        while heap:
            v = heapq.heappop(heap)
            order.append(v)
            for c in self._children[v]:
                indeg[c] -= 1
                if indeg[c] == 0:
                    heapq.heappush(heap, c)
        if len(order) != self.n:
            cyc = sorted(self.labels[v] for v in range(self.n) if indeg[v] > 0)
            raise CycleError(f"graph has a directed cycle through {cyc}")
        return tuple(order)

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def vertices(self) -> VertexSet:
        return tuple(range(self.n))

    @property
    def observed(self) -> VertexSet:
        return tuple(v for v in range(self.n) if v not in self.hidden)

    @property
    def topological_order(self) -> tuple[int, ...]:
        return self._topo

    def parents(self, v: int) -> tuple[int, ...]:
        return self._parents[v]

    def children(self, v: int) -> tuple[int, ...]:
        return self._children[v]

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise InvalidVertex(f"unknown vertex label {label!r}") from None

    def vertex(self, item: int | str) -> int:
        """Resolve a label or id to an id, validating it."""
        if isinstance(item, str):
            return self.index(item)
        if not isinstance(item, int) or not 0 <= item < self.n:
            raise InvalidVertex(f"unknown vertex id {item!r}")
        return item

    def ids(self, items: Iterable[int | str]) -> VertexSet:
        if isinstance(items, (str, int)):
            items = [items]
        return vset(self.vertex(x) for x in items)

    def label_set(self, ids: Iterable[int]) -> tuple[str, ...]:
        return tuple(self.labels[v] for v in vset(ids))

    def without_edges(self, drop: Iterable[tuple[int, int]]) -> Dag:
        drop = set(drop)
        return Dag(self.labels, sorted(self.edges - drop), self.hidden)

    def __eq__(self, other):
        if not isinstance(other, Dag):
            return NotImplemented
        return (self.labels, self.edges, self.hidden) == (other.labels, other.edges, other.hidden)

    def __hash__(self):
        return hash((self.labels, self.edges, self.hidden))

    def __repr__(self):
        return f"Dag(n={self.n}, edges={len(self.edges)}, hidden={len(self.hidden)})"


class UGraph:
    """Immutable undirected graph over arbitrary integer ids.

    Ids are kept as given (not re-densified) so graphs derived from a
    :class:`Dag` keep the DAG's vertex ids.
    """

    __slots__ = ("vertices", "edges", "_adj")

    def __init__(self, vertices: Iterable[int], edges: Iterable[tuple[int, int]] = ()):
        verts = vset(vertices)
        adj = {v: set() for v in verts}
        edge_set = set()
        for u, v in edges:
            if u not in adj or v not in adj:
                raise InvalidVertex(f"edge ({u}, {v}) references an unknown vertex")
            if u == v:
                raise GraphError(f"self-loop on vertex {u}")
            adj[u].add(v)
            adj[v].add(u)
            edge_set.add((u, v) if u < v else (v, u))
        self.vertices = verts
        self.edges = frozenset(edge_set)
        self._adj = {v: frozenset(s) for v, s in adj.items()}

    def __contains__(self, v) -> bool:
        return v in self._adj

    def neighbors(self, v: int) -> frozenset[int]:
        try:
            return self._adj[v]
        except KeyError:
            raise InvalidVertex(f"unknown vertex id {v!r}") from None

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.neighbors(u)

    def with_edges(self, extra: Iterable[tuple[int, int]]) -> UGraph:
        return UGraph(self.vertices, list(self.edges) + list(extra))

    def __eq__(self, other):
        if not isinstance(other, UGraph):
            return NotImplemented
        return (self.vertices, self.edges) == (other.vertices, other.edges)

    def __hash__(self):
        return hash((self.vertices, self.edges))

    def __repr__(self):
        return f"UGraph(n={len(self.vertices)}, edges={len(self.edges)})"


def _check_ids(g: Dag | UGraph, s: Iterable[int]) -> VertexSet:
    s = vset(s)
    if isinstance(g, Dag):
        for v in s:
            if not isinstance(v, int) or not 0 <= v < g.n:
                raise InvalidVertex(f"unknown vertex id {v!r}")
    else:
        for v in s:
            if v not in g:
                raise InvalidVertex(f"unknown vertex id {v!r}")
    return s


def _reach(start: Iterable[int], step) -> set[int]:
    seen = set(start)
    stack = list(seen)
    while stack:
        v = stack.pop()
        for w in step(v):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def ancestors(g: Dag, s: Iterable[int]) -> VertexSet:
    """Ancestors of ``s`` in ``g``, each vertex counting as its own ancestor."""
    s = _check_ids(g, s)
    return vset(_reach(s, g.parents))


def descendants(g: Dag, s: Iterable[int]) -> VertexSet:
    """Descendants of ``s`` in ``g``, ``s`` included."""
    s = _check_ids(g, s)
    return vset(_reach(s, g.children))


def induced_subgraph(g: Dag | UGraph, keep: Iterable[int]) -> Dag | UGraph:
    """Subgraph induced by ``keep``.

    A :class:`Dag` result is re-indexed densely (labels and hidden flags are
    preserved, so ``labels`` gives the correspondence); a :class:`UGraph`
    result keeps the original ids.
    """
    keep = _check_ids(g, keep)
    if isinstance(g, UGraph):
        ks = set(keep)
        return UGraph(keep, [(u, v) for u, v in g.edges if u in ks and v in ks])
    new_id = {v: i for i, v in enumerate(keep)}
    edges = [(new_id[u], new_id[v]) for u, v in g.edges if u in new_id and v in new_id]
    hidden = [new_id[h] for h in g.hidden if h in new_id]
    return Dag([g.labels[v] for v in keep], edges, hidden)


def moralize(g: Dag, keep: Iterable[int] | None = None) -> UGraph:
    """Moral graph of ``g``; with ``keep``, the moral graph of ``g`` induced on ``keep``.

    ``keep`` avoids the re-indexing of :func:`induced_subgraph`: the result
    uses ``g``'s vertex ids.
    """
    if keep is None:
        ks = set(range(g.n))
    else:
        ks = set(_check_ids(g, keep))
    edges = []
    for v in ks:
        pa = [p for p in g.parents(v) if p in ks]
        for p in pa:
            edges.append((p, v))
        for i in range(len(pa)):
            for j in range(i + 1, len(pa)):
                edges.append((pa[i], pa[j]))
    return UGraph(ks, edges)


def _separated(h: UGraph, us: Iterable[int], ws: Iterable[int], z: Iterable[int]) -> bool:
    blocked = set(z)
    targets = set(ws)
    seen = set(us)
    stack = list(seen)
    while stack:
        v = stack.pop()
        if v in targets:
            return False
        for w in h.neighbors(v):
            if w not in seen and w not in blocked:
                seen.add(w)
                stack.append(w)
    return not (seen & targets)


def separated(h: UGraph, us: Iterable[int], ws: Iterable[int], z: Iterable[int]) -> bool:
    """True iff every path in ``h`` between ``us`` and ``ws`` meets ``z``.

    Vacuously true when either side is empty. The three sets must be
    pairwise disjoint.
    """
    us, ws, z = _check_ids(h, us), _check_ids(h, ws), _check_ids(h, z)
    if set(us) & set(ws) or set(us) & set(z) or set(ws) & set(z):
        raise OverlapError("separation sets must be pairwise disjoint")
    if not us or not ws:
        return True
    return _separated(h, us, ws, z)


def u_separated(h: UGraph, a: int, y: int, z: Iterable[int]) -> bool:
    """True iff ``z`` is an ``a``-``y`` vertex cut of ``h``."""
    _check_ids(h, (a, y))
    z = _check_ids(h, z)
    if a == y:
        raise OverlapError("endpoints must differ")
    if a in z or y in z:
        raise OverlapError("cut set must not contain an endpoint")
    return _separated(h, (a,), (y,), z)


def d_separated(g: Dag, u: Iterable[int], w: Iterable[int], z: Iterable[int]) -> bool:
    """d-separation of ``u`` and ``w`` given ``z``.

    Moralises the subgraph on the ancestors of ``u | w | z`` and tests plain
    separation there.
    """
    u, w, z = _check_ids(g, u), _check_ids(g, w), _check_ids(g, z)
    if set(u) & set(w) or set(u) & set(z) or set(w) & set(z):
        raise OverlapError("d-separation sets must be pairwise disjoint")
    if not u or not w:
        return True
    an = _reach(set(u) | set(w) | set(z), g.parents)
    return _separated(moralize(g, an), u, w, z)


def connected_component(h: UGraph, removed: Iterable[int], seed: int) -> VertexSet:
    """Component containing ``seed`` after deleting ``removed`` from ``h``."""
    removed = set(_check_ids(h, removed))
    _check_ids(h, (seed,))
    if seed in removed:
        raise OverlapError("seed vertex is among the removed vertices")
    return vset(_reach((seed,), lambda v: (w for w in h.neighbors(v) if w not in removed)))


def boundary(h: UGraph, comp: Iterable[int]) -> VertexSet:
    """Vertices outside ``comp`` adjacent to some vertex of ``comp``."""
    comp = set(_check_ids(h, comp))
    out = set()
    for v in comp:
        out.update(h.neighbors(v))
    return vset(out - comp)
