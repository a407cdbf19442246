"""Seeded random graphs and queries for tests, benchmarks and the CLI."""

from __future__ import annotations

import random

from .adjustment import Query, exists_adjustment
from .graph import Dag, UGraph, ancestors, descendants

__all__ = ["random_dag", "random_dag_with_edges", "random_ugraph", "random_query", "random_instance", "large_instance"]


def _labels(n: int, prefix: str = "V") -> list[str]:
    return [f"{prefix}{i}" for i in range(n)]


def random_dag(n: int, edge_prob: float, seed: int, n_hidden: int = 0) -> Dag:
    """Erdos-Renyi DAG on ``n`` vertices under a random vertex order.

    The last ``n_hidden`` vertices of that order's label list are hidden;
    labels are ``V0 ...`` for observed and ``U0 ...`` for hidden vertices.
    """
    rng = random.Random(seed)
    order = list(range(n))
    rng.shuffle(order)
    edges = [(order[i], order[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < edge_prob]
    hidden = set(rng.sample(range(n), n_hidden)) if n_hidden else set()
    labels, k_obs, k_hid = [], 0, 0
    for v in range(n):
        if v in hidden:
            labels.append(f"U{k_hid}")
            k_hid += 1
        else:
            labels.append(f"V{k_obs}")
            k_obs += 1
    return Dag(labels, edges, hidden)


def random_dag_with_edges(n: int, m: int, seed: int, n_hidden: int = 0) -> Dag:
    """DAG with exactly ``m`` distinct edges, consistent with the order ``0 < 1 < ... < n-1``."""
    if m > n * (n - 1) // 2:
        raise ValueError("too many edges for a DAG on n vertices")
    rng = random.Random(seed)
    edges = set()
    while len(edges) < m:
        i, j = rng.randrange(n), rng.randrange(n)
        if i != j:
            edges.add((min(i, j), max(i, j)))
    hidden = rng.sample(range(n), n_hidden) if n_hidden else []
    return Dag(_labels(n), sorted(edges), hidden)


def random_ugraph(n: int, edge_prob: float, seed: int) -> UGraph:
    rng = random.Random(seed)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < edge_prob]
    return UGraph(range(n), edges)


def random_query(g: Dag, seed: int, max_l: int = 2, require_admissible: bool = True, tries: int = 50) -> Query | None:
    """Random exposure/outcome pair with policy covariates among non-descendants.

    Returns ``None`` when no suitable query turns up within ``tries`` draws.
    """
    rng = random.Random(seed)
    obs = list(g.observed)
    pairs = [(a, y) for y in obs for a in ancestors(g, (y,)) if a != y and a in set(obs)]
    if not pairs:
        return None
    for _ in range(tries):
        a, y = rng.choice(pairs)
        de_a = set(descendants(g, (a,)))
        pool = [v for v in obs if v not in de_a and v != y]
        l = rng.sample(pool, rng.randint(0, min(max_l, len(pool))))
        q = Query(a, y, tuple(sorted(l)), g.observed)
        if not require_admissible or exists_adjustment(g, q):
            return q
    return None


def random_instance(seed: int, n_observed: int, n_hidden: int, edge_prob: float, max_l: int = 2, require_admissible: bool = True):
    """``(dag, query)`` from the first derived seed that yields a usable query."""
    rng = random.Random(seed)
    while True:
        s = rng.randrange(2**31)
        g = random_dag(n_observed + n_hidden, edge_prob, s, n_hidden)
        q = random_query(g, s, max_l, require_admissible)
        if q is not None:
            return g, q


def large_instance(n: int, m: int, seed: int, n_hidden: int = 0) -> tuple[Dag, Query]:
    """Admissible benchmark instance with exactly ``m`` edges.

    Outcomes are tried from the end of the vertex order backwards; each is
    paired with its observed ancestor nearest the first third of the order,
    which keeps the ancestral set large. The first admissible pair wins.
    """
    for s in range(seed, seed + 1000):
        g = random_dag_with_edges(n, m, s, n_hidden)
        hidden = g.hidden
        for y in range(n - 1, 0, -1):
            if y in hidden:
                continue
            cands = [a for a in ancestors(g, (y,)) if a != y and a not in hidden]
            for a in sorted(cands, key=lambda v: (abs(v - n // 3), v)):
                q = Query(a, y, (), g.observed)
                if exists_adjustment(g, q):
                    return g, q
                break
    raise RuntimeError("no admissible instance found")
