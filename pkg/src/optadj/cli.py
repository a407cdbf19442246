"""``adjust``: command-line front end.

Exit codes: 0 success, 1 negative verdict, 2 input error, 3 no admissible set.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .adjustment import AdjustmentChecker, Comparison, Query, canonical_adjustment, exists_adjustment, graphical_compare
from .cuts import CutResult, find_opt, find_opt_minimal, find_opt_minimum
from .efficiency import build_h1
from .errors import OptAdjError, PositivityViolation
from .graph import Dag
from .io import load_bn, load_example, load_graph, serialize_ugraph
from .oracle import EnumerationMode, Policy, enumerate_adjustment_sets, influence_variance, joint_distribution, random_bn

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_NO_SET = 0, 1, 2, 3
NO_SET = "NO-ADMISSIBLE-SET"
GUARANTEE = "observed set within an({exposure, outcome} | policy) or no hidden vertices"
VARIANCE_TOL = 1e-9


def _split(text: str | None) -> list[str]:
    if text is None:
        return []
    return [t for t in (s.strip() for s in text.split(",")) if t]


def _graph(arg: str) -> Dag:
    """A path, or ``@name`` for one of the bundled example graphs."""
    if arg.startswith("@"):
        return load_example(arg[1:])
    return load_graph(Path(arg))


def _query(g: Dag, args) -> Query:
    observed = None if args.observed is None else _split(args.observed)
    return Query.for_dag(g, args.exposure, args.outcome, _split(args.policy), observed)


def _fmt(g: Dag, z) -> str:
    if z is None:
        return NO_SET
    return "{" + ", ".join(g.label_set(z)) + "}"


def _labels(g: Dag, z):
    return None if z is None else list(g.label_set(z))


def _emit(args, payload: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print("\n".join(lines))


def cmd_check(args) -> int:
    g = _graph(args.graph)
    q = _query(g, args)
    sets = args.set or [""]
    check = AdjustmentChecker(g, q)
    rows, lines, ok = [], [], True
    for spec in sets:
        z = _resolve_set(g, q, spec)
        cert = check(z)
        ok &= cert.valid
        rows.append({"set": _labels(g, z), "valid": cert.valid, "violated_clause": cert.violated_clause.value})
        verdict = "valid" if cert.valid else f"invalid ({cert.violated_clause.value})"
        lines.append(f"{_fmt(g, z)}: {verdict}")
    _emit(args, {"command": "check", "query": q.labels(g), "results": rows}, lines)
    return EXIT_OK if ok else EXIT_NEGATIVE


_WHICH = {"o": (find_opt, "O"), "o-min": (find_opt_minimal, "O_min"), "o-m": (find_opt_minimum, "O_m")}


def cmd_optimal(args) -> int:
    g = _graph(args.graph)
    q = _query(g, args)
    which = ["o", "o-min", "o-m"] if args.which == "all" else [args.which]
    results: list[tuple[str, CutResult]] = [(_WHICH[w][1], _WHICH[w][0](g, q)) for w in which]
    admissible = results[0][1].admissible
    lines, payload = [], {"command": "optimal", "query": q.labels(g), "admissible": admissible, "sets": {}}
    for name, r in results:
        entry = {"vertices": _labels(g, r.vertices), "kind": r.kind.value}
        lines.append(f"{name} = {_fmt(g, r.vertices)}")
        if r.global_guaranteed is not None:
            entry["global_guaranteed"] = r.global_guaranteed
            entry["guarantee_condition"] = GUARANTEE
            if admissible and not r.global_guaranteed:
                lines.append(f"  warning: O is valid but not guaranteed globally optimal; that needs {GUARANTEE}")
        payload["sets"][name] = entry
    lines.append(f"admissible: {str(admissible).lower()}")
    _emit(args, payload, lines)
    return EXIT_OK if admissible else EXIT_NO_SET


def cmd_enumerate(args) -> int:
    g = _graph(args.graph)
    q = _query(g, args)
    sets = enumerate_adjustment_sets(g, q, EnumerationMode(args.mode))
    lines = [_fmt(g, z) for z in sets] or [NO_SET]
    _emit(args, {"command": "enumerate", "query": q.labels(g), "mode": args.mode, "sets": [_labels(g, z) for z in sets]}, lines)
    return EXIT_OK if sets else EXIT_NO_SET


def _resolve_set(g: Dag, q: Query, spec: str):
    """Comma list of labels, or one of ``@canonical @O @Omin @Om``."""
    special = {
        "@canonical": lambda: canonical_adjustment(g, q),
        "@O": lambda: find_opt(g, q).vertices,
        "@Omin": lambda: find_opt_minimal(g, q).vertices,
        "@Om": lambda: find_opt_minimum(g, q).vertices,
    }
    if spec in special:
        return special[spec]()
    if spec.startswith("@"):
        raise OptAdjError(f"unknown set name {spec!r}; use one of {', '.join(special)}")
    return g.ids(_split(spec))


def _policy(bn, q: Query, spec: str) -> Policy:
    kind, _, arg = spec.partition(":")
    if kind == "static":
        k = int(arg or 0)
        if not 0 <= k < bn.cards[q.a]:
            raise OptAdjError(f"treatment state {k} out of range")
        return Policy.static(bn, q, k)
    if kind == "random":
        return Policy.random(bn, q, int(arg or 0))
    if kind == "observational":
        return Policy.observational(bn, q)
    raise OptAdjError(f"unknown regime {spec!r}; use static:K, random:SEED or observational")


def cmd_variance(args) -> int:
    g = _graph(args.graph)
    q = _query(g, args)
    if args.bn is not None:
        bn = load_bn(args.bn, g, q.y)
    else:
        bn = random_bn(g, args.random, args.cardinality, args.epsilon)
    pi = _policy(bn, q, args.regime)
    joint = joint_distribution(bn)
    specs = args.set or ["@canonical", "@O", "@Omin", "@Om"]
    rows, lines, ok = [], [], True
    done = []
    for spec in specs:
        row = {"spec": spec}
        z = None
        try:
            z = _resolve_set(g, q, spec)
            row["set"] = _labels(g, z)
            if z is None:
                raise OptAdjError(NO_SET)
            rep = influence_variance(bn, q, pi, z, joint=joint)
        except PositivityViolation as exc:
            row["error"] = f"positivity: {exc}"
            row["configuration"] = exc.configuration
        except OptAdjError as exc:
            row["error"] = str(exc)
        else:
            row.update(chi=rep.chi, sigma2=rep.sigma2)
            done.append((spec, z, rep))
        rows.append(row)
        if "error" in row:
            ok = False
            shown = _fmt(g, z) if z is not None else ""
            lines.append(f"{spec:<12} {shown:<16} error: {row['error']}")
        else:
            lines.append(f"{spec:<12} {_fmt(g, z):<16} chi={rep.chi:.10f} sigma2={rep.sigma2:.10f}")

    pairs, internal = [], False
    for i in range(len(done)):
        for j in range(len(done)):
            if i == j:
                continue
            (si, zi, ri), (sj, zj, rj) = done[i], done[j]
            cert = graphical_compare(g, q, zi, zj) is Comparison.G_NOT_WORSE
            holds = ri.sigma2 <= rj.sigma2 + VARIANCE_TOL
            if cert and not holds:
                internal = True
            if i < j or cert:
                pairs.append({"first": si, "second": sj, "sigma2_first_le_second": holds, "graphical_certificate": cert})
    for p in pairs:
        rel = "<=" if p["sigma2_first_le_second"] else ">"
        tag = ""
        if p["graphical_certificate"]:
            tag = "  [certified]" if p["sigma2_first_le_second"] else "  INTERNAL-ERROR: certified ordering violated"
        lines.append(f"sigma2({p['first']}) {rel} sigma2({p['second']}){tag}")
    payload = {"command": "variance", "query": q.labels(g), "regime": args.regime, "rows": rows, "pairs": pairs, "internal_error": internal}
    _emit(args, payload, lines)
    if internal:
        return EXIT_NEGATIVE
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_h1(args) -> int:
    g = _graph(args.graph)
    q = _query(g, args)
    if not exists_adjustment(g, q):
        print(NO_SET)
        return EXIT_NO_SET
    eg = build_h1(g, q)
    h = eg.h1
    payload = {
        "command": "h1",
        "query": q.labels(g),
        "nodes": list(g.label_set(h.vertices)),
        "edges": [[g.labels[u], g.labels[w]] for u, w in sorted(h.edges)],
        "ignored": list(g.label_set(eg.ignore)),
    }
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        sys.stdout.write(serialize_ugraph(h, g.labels))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="adjust", description="Validate and optimise covariate adjustment sets.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", required=True, help="graph file, .json mirror, or @name for a bundled example")
    common.add_argument("--exposure", required=True)
    common.add_argument("--outcome", required=True)
    common.add_argument("--policy", default="", help="comma-separated policy covariates")
    common.add_argument("--observed", default=None, help="comma-separated observed vertices (default: every non-hidden vertex)")
    common.add_argument("--json", action="store_true", help="emit JSON (schema in docs/json_schema.md)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="test candidate adjustment sets")
    p.add_argument("--set", action="append", help="comma-separated set, or @canonical/@O/@Omin/@Om; repeatable")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("optimal", parents=[common], help="compute O, O_min and O_m")
    p.add_argument("--which", choices=["o", "o-min", "o-m", "all"], default="all")
    p.set_defaults(func=cmd_optimal)

    p = sub.add_parser("enumerate", parents=[common], help="list adjustment sets by brute force")
    p.add_argument("--mode", choices=[m.value for m in EnumerationMode], default="all")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("variance", parents=[common], help="exact influence-function variances")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--bn", help="network file with CPTs")
    src.add_argument("--random", type=int, default=0, metavar="SEED", help="draw a random network (default seed 0)")
    p.add_argument("--cardinality", type=int, default=2)
    p.add_argument("--epsilon", type=float, default=0.01)
    p.add_argument("--regime", default="random:0", help="static:K, random:SEED or observational")
    p.add_argument("--set", action="append", help="comma-separated set, or @canonical/@O/@Omin/@Om; repeatable")
    p.set_defaults(func=cmd_variance)

    p = sub.add_parser("h1", parents=[common], help="print the efficiency graph")
    p.set_defaults(func=cmd_h1)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OptAdjError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
