"""Exact discrete-law oracle.

Everything here is computed by summation over the full joint table of a
discrete Bayesian network, so values are exact up to floating point. The
joint has one axis per DAG vertex, in vertex-id order; marginals keep their
remaining axes in ascending id order, which is what lets tables over nested
vertex sets broadcast against each other with a plain reshape.
"""

from __future__ import annotations

import enum
import itertools
import math
from collections.abc import Iterable
from dataclasses import dataclass, field

import numpy as np

from .adjustment import AdjustmentChecker, Query, check_query
from .errors import (
    InvalidAdjustmentSet,
    OverlapError,
    PositivityViolation,
    PreconditionViolation,
    StateSpaceTooLarge,
    TooLarge,
)
from .graph import Dag, VertexSet, d_separated, vset

__all__ = [
    "DiscreteBN",
    "Policy",
    "VarianceReport",
    "EnumerationMode",
    "joint_distribution",
    "gformula_value",
    "adjustment_value",
    "influence_variance",
    "influence_terms",
    "supplementation_identity",
    "deletion_identity",
    "enumerate_adjustment_sets",
    "random_bn",
    "sample",
]

DEFAULT_STATE_CAP = 2**20
ENUMERATION_CAP = 20
ROW_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class DiscreteBN:
    """Categorical Bayesian network over ``dag``.

    ``cpts[v]`` has shape ``(*cards of parents, cards[v])`` with parents in
    ascending id order. ``values[v]`` attaches a real number to each state
    of ``v``; only the outcome's values enter policy values.
    """

    dag: Dag
    cards: tuple[int, ...]
    cpts: tuple[np.ndarray, ...]
    values: tuple[np.ndarray, ...] = field(default=())

    def __post_init__(self):
        n = self.dag.n
        cards = tuple(int(k) for k in self.cards)
        if len(cards) != n or any(k < 2 for k in cards):
            raise ValueError("need one cardinality >= 2 per vertex")
        object.__setattr__(self, "cards", cards)
        if len(self.cpts) != n:
            raise ValueError("need one CPT per vertex")
        cpts = []
        for v in range(n):
            t = np.asarray(self.cpts[v], dtype=float)
            want = tuple(cards[p] for p in self.dag.parents(v)) + (cards[v],)
            if t.shape != want:
                raise ValueError(f"CPT of {self.dag.labels[v]} has shape {t.shape}, expected {want}")
            if (t < 0).any():
                raise ValueError(f"CPT of {self.dag.labels[v]} has negative entries")
            if np.abs(t.sum(axis=-1) - 1.0).max() > ROW_TOL:
                raise ValueError(f"CPT rows of {self.dag.labels[v]} do not sum to 1")
            t.setflags(write=False)
            cpts.append(t)
        object.__setattr__(self, "cpts", tuple(cpts))
        vals = self.values or tuple(np.arange(k, dtype=float) for k in cards)
        vals = tuple(np.asarray(x, dtype=float) for x in vals)
        if len(vals) != n or any(x.shape != (k,) for x, k in zip(vals, cards)):
            raise ValueError("need one value per state of every vertex")
        for x in vals:
            x.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def state_space(self) -> int:
        return int(np.prod(self.cards, dtype=object))

    def with_values(self, v: int, values) -> DiscreteBN:
        vals = list(self.values)
        vals[v] = np.asarray(values, dtype=float)
        return DiscreteBN(self.dag, self.cards, self.cpts, tuple(vals))


@dataclass(frozen=True, eq=False)
class Policy:
    """Conditional law of the treatment given the policy covariates.

    ``table`` has shape ``(*cards of l, cards[a])`` with ``l`` in ascending
    id order; each slice along the last axis sums to one.
    """

    l: VertexSet
    table: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.table, dtype=float)
        if (t < 0).any() or np.abs(t.sum(axis=-1) - 1.0).max() > ROW_TOL:
            raise ValueError("policy rows must be nonnegative and sum to 1")
        if t.ndim != len(self.l) + 1:
            raise ValueError("policy table must have one axis per covariate plus one for the treatment")
        t.setflags(write=False)
        object.__setattr__(self, "l", vset(self.l))
        object.__setattr__(self, "table", t)

    @classmethod
    def static(cls, bn: DiscreteBN, q: Query, a_state: int) -> Policy:
        """Point mass setting the treatment to ``a_state`` regardless of ``l``."""
        shape = tuple(bn.cards[v] for v in q.l) + (bn.cards[q.a],)
        t = np.zeros(shape)
        t[..., a_state] = 1.0
        return cls(q.l, t)

    @classmethod
    def random(cls, bn: DiscreteBN, q: Query, seed: int) -> Policy:
        """Stochastic policy with an independent Dirichlet row per covariate configuration."""
        rng = np.random.default_rng(seed)
        shape = tuple(bn.cards[v] for v in q.l)
        k = bn.cards[q.a]
        rows = rng.dirichlet(np.ones(k), size=int(np.prod(shape, dtype=int)))
        return cls(q.l, rows.reshape(shape + (k,)))

    @classmethod
    def observational(cls, bn: DiscreteBN, q: Query) -> Policy:
        """The observed treatment mechanism; requires ``pa(a) <= l``."""
        pa = bn.dag.parents(q.a)
        if not set(pa) <= set(q.l):
            raise PreconditionViolation("observational policy needs every parent of the treatment in l")
        t = _embed(bn.cpts[q.a], pa, q.l, bn.cards, trailing=1)
        t = np.broadcast_to(t, tuple(bn.cards[v] for v in q.l) + (bn.cards[q.a],))
        return cls(q.l, np.array(t))


@dataclass(frozen=True)
class ComponentStats:
    a_state: int
    weighted_mean: float
    variance: float


@dataclass(frozen=True)
class VarianceReport:
    chi: float
    sigma2: float
    mean_psi: float
    components: tuple[ComponentStats, ...] = ()


class EnumerationMode(enum.Enum):
    ALL = "all"
    MINIMAL = "minimal"
    MINIMUM = "minimum"


def _embed(arr: np.ndarray, sub: Iterable[int], full: Iterable[int], cards, trailing: int = 0) -> np.ndarray:
    """Reshape a table over ``sub`` (ascending) so it broadcasts over ``full`` (ascending).

    The last ``trailing`` axes of ``arr`` are carried through unchanged.
    """
    sub = set(sub)
    full = list(full)
    if not sub <= set(full):
        raise ValueError("sub axes must be contained in full axes")
    arr = np.asarray(arr)
    shape = [cards[v] if v in sub else 1 for v in full]
    return arr.reshape(shape + list(arr.shape[arr.ndim - trailing :]) if trailing else shape)


def joint_distribution(bn: DiscreteBN, cap: int = DEFAULT_STATE_CAP) -> np.ndarray:
    """Full joint table, one axis per vertex, from the product of the CPTs."""
    return _product(bn, cap=cap)


def _product(bn: DiscreteBN, replace: dict[int, tuple[VertexSet, np.ndarray]] | None = None, cap: int = DEFAULT_STATE_CAP) -> np.ndarray:
    if bn.state_space > cap:
        raise StateSpaceTooLarge(f"joint state space {bn.state_space} exceeds the cap {cap}")
    n = bn.dag.n
    out = np.ones(bn.cards)
    for v in range(n):
        if replace and v in replace:
            cond, table = replace[v]
        else:
            cond, table = bn.dag.parents(v), bn.cpts[v]
        axes = list(cond) + [v]
        order = np.argsort(axes)
        t = np.transpose(table, order)
        shape = [1] * n
        for ax in axes:
            shape[ax] = bn.cards[ax]
        out = out * t.reshape(shape)
    return out


def _marginal(joint: np.ndarray, keep: Iterable[int]) -> np.ndarray:
    keep = set(keep)
    return joint.sum(axis=tuple(ax for ax in range(joint.ndim) if ax not in keep))


def _check_policy(bn: DiscreteBN, q: Query, pi: Policy) -> None:
    if pi.l != q.l:
        raise PreconditionViolation("policy covariates differ from the query's l")
    want = tuple(bn.cards[v] for v in q.l) + (bn.cards[q.a],)
    if pi.table.shape != want:
        raise PreconditionViolation(f"policy table has shape {pi.table.shape}, expected {want}")


def _config(bn: DiscreteBN, axes, index) -> dict[str, int]:
    return {bn.dag.labels[v]: int(i) for v, i in zip(axes, index)}


def gformula_value(bn: DiscreteBN, q: Query, pi: Policy, joint: np.ndarray | None = None) -> float:
    """Policy value from the truncated factorisation: the treatment's CPT is
    replaced by ``pi`` and the outcome's mean taken under the result."""
    check_query(bn.dag, q)
    _check_policy(bn, q, pi)
    if joint is None:
        joint = joint_distribution(bn)
    # The observed mechanism must give positive mass to every treatment the
    # policy can choose, wherever the covariates have positive probability.
    pa = bn.dag.parents(q.a)
    cond = vset(set(pa) | set(q.l))
    m = _marginal(joint, cond)
    f_a = _embed(bn.cpts[q.a], pa, cond, bn.cards, trailing=1)
    pi_c = _embed(pi.table, q.l, cond, bn.cards, trailing=1)
    bad = (m[..., None] > 0) & (pi_c > 0) & (f_a == 0)
    if bad.any():
        idx = np.argwhere(np.broadcast_to(bad, np.broadcast_shapes(bad.shape, m.shape + (bn.cards[q.a],))))[0]
        conf = _config(bn, cond, idx[:-1])
        conf[bn.dag.labels[q.a]] = int(idx[-1])
        raise PositivityViolation(f"treatment has zero probability at {conf}", conf)
    f_pi = _product(bn, {q.a: (q.l, pi.table)})
    y = bn.values[q.y]
    return float(np.sum(_marginal(f_pi, (q.y,)) * y))


class _Tables:
    """Conditional tables of ``(z, a, y)`` used by the adjustment functionals.

    Arrays have shape ``(*cards of z, cards[a])`` or with a trailing ``y`` axis.
    """

    def __init__(self, bn: DiscreteBN, q: Query, pi: Policy, z: Iterable[int], joint: np.ndarray):
        self.z = z = vset(z)
        if not set(q.l) <= set(z):
            raise PreconditionViolation("adjustment set must contain every policy covariate")
        if q.a in z or q.y in z:
            raise OverlapError("adjustment set contains the exposure or the outcome")
        axes = vset(set(z) | {q.a, q.y})
        m = _marginal(joint, axes)
        self.p_zay = np.moveaxis(m, [axes.index(q.a), axes.index(q.y)], [-2, -1])
        self.p_za = self.p_zay.sum(axis=-1)
        self.p_z = self.p_za.sum(axis=-1)
        self.pi = np.broadcast_to(_embed(pi.table, q.l, z, bn.cards, trailing=1), self.p_za.shape)
        self.y = bn.values[q.y]

        need = (self.p_z[..., None] > 0) & (self.pi > 0)
        bad = need & (self.p_za <= 0)
        if bad.any():
            idx = np.argwhere(bad)[0]
            conf = _config(bn, z, idx[:-1])
            conf[bn.dag.labels[q.a]] = int(idx[-1])
            raise PositivityViolation(f"f(a | z) = 0 at {conf}", conf)
        with np.errstate(divide="ignore", invalid="ignore"):
            self.f = np.where(self.p_z[..., None] > 0, self.p_za / self.p_z[..., None], 0.0)
            self.b = np.where(self.p_za > 0, (self.p_zay @ self.y) / self.p_za, 0.0)
            self.ratio = np.where(self.f > 0, self.pi / self.f, 0.0)
        # E_pi*{b(A, z) | z}
        self.pib = (self.pi * self.b).sum(axis=-1)
        self.chi = math.fsum(np.ravel(self.p_z * self.pib))

    def psi(self) -> np.ndarray:
        resid = self.y - self.b[..., None]
        return self.ratio[..., None] * resid + self.pib[..., None, None] - self.chi

    def psi_components(self) -> list[np.ndarray]:
        """One array per treatment state ``a``; they sum to :meth:`psi`."""
        k = self.p_za.shape[-1]
        out = []
        resid = self.y - self.b[..., None]
        for a in range(k):
            ind = np.zeros(k)
            ind[a] = 1.0
            mean_a = float(np.sum(self.p_z * self.pi[..., a] * self.b[..., a]))
            term = ind[:, None] * (self.ratio[..., a] [..., None, None] * resid[..., a : a + 1, :])
            term = term + (self.pi[..., a] * self.b[..., a])[..., None, None] - mean_a
            out.append(term)
        return out

    def expect(self, x: np.ndarray) -> float:
        return math.fsum(np.ravel(self.p_zay * x))


def adjustment_value(bn: DiscreteBN, q: Query, pi: Policy, z: Iterable[int], joint: np.ndarray | None = None) -> float:
    """Iterated expectation ``E[ E_pi{ E(Y | A, z) | z } ]``."""
    check_query(bn.dag, q)
    _check_policy(bn, q, pi)
    if joint is None:
        joint = joint_distribution(bn)
    return _Tables(bn, q, pi, bn.dag.ids(z), joint).chi


def _report(t: _Tables) -> VarianceReport:
    psi = t.psi()
    comps = []
    for a, c in enumerate(t.psi_components()):
        comps.append(ComponentStats(a, float(np.sum(t.p_z * t.pi[..., a] * t.b[..., a])), t.expect(c**2) - t.expect(c) ** 2))
    return VarianceReport(t.chi, t.expect(psi**2), t.expect(psi), tuple(comps))


def _sigma2(bn, q, pi, z, joint) -> float:
    t = _Tables(bn, q, pi, z, joint)
    return t.expect(t.psi() ** 2)


def influence_variance(bn: DiscreteBN, q: Query, pi: Policy, z: Iterable[int], joint: np.ndarray | None = None) -> VarianceReport:
    """Exact variance of the nonparametric influence function for adjustment set ``z``."""
    check_query(bn.dag, q)
    _check_policy(bn, q, pi)
    z = bn.dag.ids(z)
    if q.a in z or q.y in z or not AdjustmentChecker(bn.dag, q)(z):
        raise InvalidAdjustmentSet(f"{list(bn.dag.label_set(z))} is not a valid adjustment set")
    if joint is None:
        joint = joint_distribution(bn)
    rep = _report(_Tables(bn, q, pi, z, joint))
    assert abs(rep.mean_psi) <= 1e-10, f"influence function mean {rep.mean_psi} is not zero"
    return rep


def influence_terms(bn: DiscreteBN, q: Query, pi: Policy, z: Iterable[int], joint: np.ndarray | None = None):
    """``(p, psi, [psi_a ...])`` on the ``(z, a, y)`` grid, ``p`` being its probability."""
    if joint is None:
        joint = joint_distribution(bn)
    t = _Tables(bn, q, pi, bn.dag.ids(z), joint)
    return t.p_zay, t.psi(), t.psi_components()


def supplementation_identity(bn: DiscreteBN, q: Query, pi: Policy, b_set, g_set, joint: np.ndarray | None = None) -> tuple[float, float]:
    """Variance drop from adding precision variables ``g_set`` to a valid ``b_set``.

    ``lhs`` is ``sigma2(B) - sigma2(G | B)``; ``rhs`` is ``var(sum_a S_a)``
    with ``S_a = {1[A=a] / f(a | G, B) - 1} pi(a | L) {b(a, G, B) - b(a, B)}``.
    Requires ``a`` d-separated from ``g_set`` given ``b_set``.
    """
    g = bn.dag
    check_query(g, q)
    _check_policy(bn, q, pi)
    b_set, g_set = g.ids(b_set), g.ids(g_set)
    g_only = vset(set(g_set) - set(b_set))
    if q.a in b_set or q.y in b_set or not AdjustmentChecker(g, q)(b_set):
        raise PreconditionViolation("b_set must be a valid adjustment set")
    if q.a in g_only or q.y in g_only:
        raise PreconditionViolation("g_set must not contain the exposure or the outcome")
    if not d_separated(g, (q.a,), g_only, b_set):
        raise PreconditionViolation("exposure is not d-separated from g_set given b_set")
    if joint is None:
        joint = joint_distribution(bn)
    gb = vset(set(g_only) | set(b_set))
    tb = _Tables(bn, q, pi, b_set, joint)
    tgb = _Tables(bn, q, pi, gb, joint)
    lhs = tb.expect(tb.psi() ** 2) - tgb.expect(tgb.psi() ** 2)

    k = bn.cards[q.a]
    b_b = _embed(tb.b, b_set, gb, bn.cards, trailing=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        inv_f = np.where(tgb.f > 0, 1.0 / tgb.f, 0.0)
    # S as a function of (gb, A): sum over a of S_a
    s = np.zeros(tgb.p_za.shape)
    for a in range(k):
        ind = np.zeros(k)
        ind[a] = 1.0
        weight = tgb.pi[..., a] * (tgb.b[..., a] - b_b[..., a])
        s = s + (ind * inv_f[..., a : a + 1] - 1.0) * weight[..., None]
    mean = float(np.sum(tgb.p_za * s))
    rhs = float(np.sum(tgb.p_za * s**2)) - mean**2
    return lhs, rhs


def deletion_identity(bn: DiscreteBN, q: Query, pi: Policy, g_set, b_set, joint: np.ndarray | None = None) -> tuple[float, float]:
    """Variance cost of over-adjusting for ``b_set`` on top of ``g_set``.

    ``lhs`` is ``sigma2(G | B) - sigma2(G)``; ``rhs`` is
    ``sum_a E[pi(a | L)^2 f(a | G) var(Y | a, G) var{1 / f(a | G, B) | a, G}]``.
    Requires ``l <= g_set``, disjoint sets, ``g_set | b_set`` valid and ``y``
    d-separated from ``b_set`` given ``g_set | {a}``.
    """
    g = bn.dag
    check_query(g, q)
    _check_policy(bn, q, pi)
    g_set, b_set = g.ids(g_set), g.ids(b_set)
    gb = vset(set(g_set) | set(b_set))
    if set(g_set) & set(b_set):
        raise PreconditionViolation("g_set and b_set must be disjoint")
    if not set(q.l) <= set(g_set):
        raise PreconditionViolation("g_set must contain every policy covariate")
    if q.a in gb or q.y in gb or not AdjustmentChecker(g, q)(gb):
        raise PreconditionViolation("g_set | b_set must be a valid adjustment set")
    if not d_separated(g, (q.y,), b_set, set(g_set) | {q.a}):
        raise PreconditionViolation("outcome is not d-separated from b_set given g_set and the exposure")
    if joint is None:
        joint = joint_distribution(bn)
    tg = _Tables(bn, q, pi, g_set, joint)
    tgb = _Tables(bn, q, pi, gb, joint)
    lhs = tgb.expect(tgb.psi() ** 2) - tg.expect(tg.psi() ** 2)

    y = bn.values[q.y]
    with np.errstate(divide="ignore", invalid="ignore"):
        ey2 = np.where(tg.p_za > 0, (tg.p_zay @ y**2) / tg.p_za, 0.0)
        var_y = ey2 - tg.b**2
        inv_f = np.where(tgb.f > 0, 1.0 / tgb.f, 0.0)
        # p(b | a, g) on the gb grid
        p_ga = _embed(tg.p_za, g_set, gb, bn.cards, trailing=1)
        cond = np.where(p_ga > 0, tgb.p_za / p_ga, 0.0)
    m1 = _marginal_onto(cond * inv_f, gb, g_set)
    m2 = _marginal_onto(cond * inv_f**2, gb, g_set)
    var_inv = m2 - m1**2
    rhs = float(np.sum(tg.p_z[..., None] * tg.pi**2 * tg.f * var_y * var_inv))
    return lhs, rhs


def _marginal_onto(arr: np.ndarray, full: VertexSet, sub: VertexSet) -> np.ndarray:
    """Sum a ``(*full, a)`` table over the axes of ``full`` not in ``sub``."""
    drop = tuple(i for i, v in enumerate(full) if v not in set(sub))
    return arr.sum(axis=drop)


def enumerate_adjustment_sets(g: Dag, q: Query, mode: EnumerationMode | str = EnumerationMode.ALL) -> list[VertexSet]:
    """Brute-force list of valid L-N adjustment sets, ordered by size then ids.

    Exponential in ``|n - {a, y}|``; refused above 20 candidates.
    """
    check_query(g, q)
    mode = EnumerationMode(mode)
    free = [v for v in q.n if v not in (q.a, q.y) and v not in q.l]
    if len(free) + len(q.l) > ENUMERATION_CAP:
        raise TooLarge(f"{len(free) + len(q.l)} candidate vertices exceed the enumeration cap of {ENUMERATION_CAP}")
    check = AdjustmentChecker(g, q)
    valid = []
    for r in range(len(free) + 1):
        for extra in itertools.combinations(free, r):
            z = vset(q.l + extra)
            if check(z):
                valid.append(z)
    valid.sort(key=lambda z: (len(z), z))
    if mode is EnumerationMode.ALL or not valid:
        return valid
    if mode is EnumerationMode.MINIMUM:
        k = len(valid[0])
        return [z for z in valid if len(z) == k]
    minimal: list[frozenset] = []
    for z in valid:
        zs = frozenset(z)
        # any valid proper subset would contain a minimal one already found
        if not any(m < zs for m in minimal):
            minimal.append(zs)
    return [vset(m) for m in minimal]


def random_bn(dag: Dag, seed: int, cardinality: int = 2, epsilon: float = 0.01) -> DiscreteBN:
    """Random categorical network with every CPT entry at least ``epsilon``.

    Rows are symmetric-Dirichlet draws mixed with the uniform floor,
    ``epsilon + (1 - k * epsilon) * p``, which keeps the rows normalised.
    Every vertex gets state values drawn uniformly on ``[0, 1]``.
    """
    if cardinality < 2:
        raise ValueError("cardinality must be at least 2")
    if not 0 < epsilon < 1 / cardinality:
        raise ValueError("epsilon must lie in (0, 1/cardinality)")
    rng = np.random.default_rng(seed)
    k = cardinality
    cards = (k,) * dag.n
    cpts = []
    for v in range(dag.n):
        shape = (k,) * len(dag.parents(v))
        rows = rng.dirichlet(np.ones(k), size=int(np.prod(shape, dtype=int)))
        rows = epsilon + (1.0 - k * epsilon) * rows
        rows = rows / rows.sum(axis=-1, keepdims=True)
        cpts.append(rows.reshape(shape + (k,)))
    values = tuple(rng.uniform(0.0, 1.0, size=k) for _ in range(dag.n))
    return DiscreteBN(dag, cards, tuple(cpts), values)


def sample(bn: DiscreteBN, size: int, seed: int | None = None) -> np.ndarray:
    """Draw ``size`` joint configurations; returns an ``(size, n)`` integer array.

    Only meant for Monte Carlo cross-checks of the exact quantities.
    """
    rng = np.random.default_rng(seed)
    joint = joint_distribution(bn).ravel()
    flat = rng.choice(joint.size, size=size, p=joint / joint.sum())
    return np.stack(np.unravel_index(flat, bn.cards), axis=1)
