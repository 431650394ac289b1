"""Command-line front end: enumerate, classify, lattice, reduce, simulate, verify."""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

from .classify import UNDEFINED, classify
from .graph import GraphError, build_graph, expand_graph_specs
from .lattice import (
    DEFAULT_ENUM_LIMIT,
    FIELD_CLASSES,
    build_lattice,
    export_dot,
    invariant_subspaces,
    lattice_to_json,
    quotient_poset,
)
from .partitions import DescriptorError, parse_descriptor
from .symmetry import (
    DEFAULT_AUT_LIMIT,
    SizeLimitError,
    automorphisms,
    fixed_point_subspace,
    orbits,
    point_stabilizer,
)

EXIT_FAIL = 1
EXIT_INVALID = 2
EXIT_SIZE = 3
EXIT_UNWRITABLE = 4
EXIT_INCOMPATIBLE = 5

CATEGORIES = ("balanced", "strict-exo", "odd", "strict-linear")


class CliExit(Exception):
    def __init__(self, code: int, msg: str):
        super().__init__(msg)
        self.code = code


def _graph(spec: str):
    try:
        return build_graph(spec)
    except (GraphError, OSError) as e:
        raise CliExit(EXIT_INVALID, f"invalid graph spec: {e}") from None


def _descriptor(text: str, n: int):
    try:
        return parse_descriptor(text, n)
    except DescriptorError as e:
        raise CliExit(EXIT_INVALID, f"cannot parse subspace: {e}") from None


def write_atomic(path: str, text: str) -> None:
    """Write via a temporary file in the target directory, then rename."""
    if path == "-":
        sys.stdout.write(text)
        return
    target = Path(path)
    try:
        fd, tmp = tempfile.mkstemp(dir=target.parent if str(target.parent) else ".", prefix=".tmp-")
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except OSError as e:
        raise CliExit(EXIT_UNWRITABLE, f"cannot write {path}: {e}") from None


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False, sort_keys=False) + "\n"


# --------------------------------------------------------------------------


def cmd_enumerate(args) -> int:
    G = _graph(args.graph)
    pairs = invariant_subspaces(G, args.cls, args.limit)
    if args.only:
        pairs = [(W, r) for W, r in pairs if r.category() == args.only]
    counts = {c: 0 for c in CATEGORIES}
    for _, r in pairs:
        counts[r.category()] += 1
    orbit_list = None
    if args.orbits:
        perms = automorphisms(G, args.aut_limit)
        orbit_list = orbits(perms, [W for W, _ in pairs])
    if args.format == "json":
        out = {
            "graph": G.name, "n": G.n, "class": args.cls, "total": len(pairs), "counts": counts,
            "subspaces": [{"descriptor": W.render(), "dim": W.free_dim, "category": r.category()} for W, r in pairs],
        }
        if orbit_list is not None:
            out["orbits"] = [{"representative": o.representative.render(), "size": o.size} for o in orbit_list]
        sys.stdout.write(_dump(out))
        return 0
    print(f"graph {G.name} (n={G.n}), class {args.cls}")
    if orbit_list is not None:
        cat = {W: r.category() for W, r in pairs}
        for o in orbit_list:
            print(f"  {o.representative.tuple_str():<40} {cat[o.representative]:<14} orbit {o.size}")
    else:
        for W, r in pairs:
            print(f"  {W.tuple_str():<40} {r.category()}")
    print("counts: " + ", ".join(f"{c}={counts[c]}" for c in CATEGORIES))
    print(f"total {len(pairs)}")
    if orbit_list is not None:
        print(f"orbit classes {len(orbit_list)}")
    return 0


def cmd_classify(args) -> int:
    G = _graph(args.graph)
    W = _descriptor(args.subspace, G.n)
    rep = classify(G, W)
    perms = automorphisms(G, args.aut_limit)
    stab = point_stabilizer(G, W, perms)
    fp = fixed_point_subspace(G.n, stab) == W
    if args.format == "json":
        out = rep.to_json()
        out.update(category=rep.category(), fixed_point=fp, stabilizer_order=len(stab))
        sys.stdout.write(_dump(out))
        return 0
    print(f"subspace {W.tuple_str()} on {G.name} ({W.kind}, dim {W.free_dim})")
    for k, v in rep.flags().items():
        if v is not None:
            print(f"  {k:<16} {v}")
    print(f"  category         {rep.category() or 'not invariant'}")
    if rep.degrees:
        print("degrees d_X(Y):")
        for (a, b), v in rep.degrees.items():
            print(f"  d_{a}({b}) = {'undefined' if v is UNDEFINED else v}")
    if rep.linear_degrees:
        print("linear degrees: " + ", ".join(f"e({a})={v}" for a, v in rep.linear_degrees.items()))
    if rep.degree_diffs:
        diffs = [(k, v) for k, v in rep.degree_diffs.items() if v is not UNDEFINED]
        if diffs:
            print("degree differences: " + ", ".join(f"delta_{a}({b})={v}" for (a, b), v in diffs))
    print(f"adjacency-invariant {rep.adjacency_invariant}; Laplacian-invariant {rep.laplacian_invariant}")
    print(f"fixed point subspace {fp}; stabilizer order {len(stab)}")
    return 0


def cmd_lattice(args) -> int:
    G = _graph(args.graph)
    lat = build_lattice(G, args.cls, args.limit, automorphisms(G, args.aut_limit))
    quo = quotient_poset(lat) if args.quotient else None
    print(f"{len(lat)} subspaces; {len(lat.edges)} Hasse edges; {len(lat.orbits)} orbit classes")
    if quo is not None:
        if quo.is_lattice:
            print(f"{len(quo)} classes; quotient is a lattice")
        else:
            x, y, mins = quo.witness
            rep = lambda z: quo.classes[z].representative.tuple_str()  # noqa: E731
            print(f"{len(quo)} classes; quotient is NOT a lattice")
            print(f"witness: {rep(x)} and {rep(y)} have minimal upper bounds " + ", ".join(rep(z) for z in mins))
    if args.dot:
        write_atomic(args.dot, export_dot(lat, quo if args.quotient_dot else None))
    if args.json:
        write_atomic(args.json, _dump(lattice_to_json(lat, quo)))
    return 0


def cmd_reduce(args) -> int:
    from .dynamics.fields import FieldSpecError, classify_field, parse_field
    from .dynamics.reduced import IncompatibleReduction, loosest_class, reduced_field

    G = _graph(args.graph)
    W = _descriptor(args.subspace, G.n)
    rep = classify(G, W)
    f = None
    spec = args.field.strip()
    try:
        if spec == "generic" or spec.startswith("generic:"):
            cls = args.cls or (spec.split(":", 1)[1] if ":" in spec else None)
            if cls is None:
                cls = loosest_class(rep)
            if cls not in FIELD_CLASSES:
                raise CliExit(EXIT_INVALID, f"unknown field class {cls!r}")
        else:
            f = parse_field(spec)
            cls = classify_field(f)
        sysr = reduced_field(G, W, cls, rep)
    except FieldSpecError as e:
        raise CliExit(EXIT_INVALID, f"invalid field: {e}") from None
    except IncompatibleReduction as e:
        raise CliExit(EXIT_INCOMPATIBLE, f"incompatible reduction for {W.tuple_str()}: {e}") from None
    print(f"# {W.tuple_str()} on {G.name}: {rep.category()}; field class {cls}; {sysr.formula} reduction")
    for line in sysr.render(f):
        print(line)
    return 0


def cmd_simulate(args) -> int:
    from .dynamics.scenario import ScenarioError, load_scenario, run_scenario
    from .dynamics.integrate import trajectory_csv

    try:
        sc = load_scenario(args.config)
        res = run_scenario(sc)
    except ScenarioError as e:
        raise CliExit(EXIT_INVALID, f"invalid scenario: {e}") from None
    csv_path = args.csv or sc.csv
    if csv_path:
        write_atomic(csv_path, trajectory_csv(res.trajectory, res.graph.n, res.field.k))
    summary = res.summary()
    text = _dump(summary)
    if args.summary:
        write_atomic(args.summary, text)
    sys.stdout.write(text)
    return 0


def cmd_verify(args) -> int:
    from .verify import SUITES, run_suites

    suites = list(SUITES) if args.suite == "all" else [args.suite]
    try:
        specs = expand_graph_specs(args.graphs)
        graphs = [build_graph(s) for s in specs]
    except GraphError as e:
        raise CliExit(EXIT_INVALID, f"invalid graph spec: {e}") from None
    report = run_suites(graphs, suites, limit=args.limit)
    for line in report.lines:
        print(line)
    print(f"{report.nfail} FAIL, {report.nwarn} WARN")
    return EXIT_FAIL if report.nfail else 0


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="graphsync", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, cls=True):
        sp.add_argument("--graph", required=True, help="graph spec, e.g. path:6, circulant:10:1,2, cube, file.edges")
        if cls:
            sp.add_argument("--class", dest="cls", default="DGl", choices=FIELD_CLASSES)
        sp.add_argument("--limit", type=int, default=DEFAULT_ENUM_LIMIT, help="max cells for enumeration")
        sp.add_argument("--aut-limit", type=int, default=DEFAULT_AUT_LIMIT)

    sp = sub.add_parser("enumerate", help="list invariant subspaces")
    common(sp)
    sp.add_argument("--format", choices=("table", "json"), default="table")
    sp.add_argument("--only", choices=CATEGORIES)
    sp.add_argument("--orbits", action="store_true", help="group into aut(G) orbits")
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("classify", help="balance report for one subspace")
    common(sp, cls=False)
    sp.add_argument("--subspace", required=True)
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("lattice", help="lattice of invariant subspaces")
    common(sp)
    sp.add_argument("--dot", metavar="PATH", help="write Graphviz DOT ('-' for stdout)")
    sp.add_argument("--json", metavar="PATH", help="write JSON ('-' for stdout)")
    sp.add_argument("--quotient", action="store_true", help="compute the orbit quotient poset")
    sp.add_argument("--quotient-dot", action="store_true", help="draw the quotient instead of the full lattice")
    sp.set_defaults(func=cmd_lattice)

    sp = sub.add_parser("reduce", help="reduced equations on an invariant subspace")
    common(sp, cls=False)
    sp.add_argument("--subspace", required=True)
    sp.add_argument("--field", default="generic",
                    help="vdp:alpha=..,beta=..,gamma=..,delta=..,eps=.. | cubic:s=.. | poly:g=[..],h=[..] | generic[:CLASS]")
    sp.add_argument("--class", dest="cls", choices=FIELD_CLASSES, help="field class for generic reductions")
    sp.set_defaults(func=cmd_reduce)

    sp = sub.add_parser("simulate", help="integrate a scenario config")
    sp.add_argument("config", help="TOML scenario file")
    sp.add_argument("--csv", metavar="PATH", help="trajectory CSV output")
    sp.add_argument("--summary", metavar="PATH", help="JSON summary output")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("verify", help="property and conjecture suites")
    sp.add_argument("--graphs", default="path:2..7,cycle:3..7,paw,petersen,cube")
    sp.add_argument("--suite", default="all", choices=("all", "oracle", "identities", "regular", "sizes", "conjectures"))
    sp.add_argument("--limit", type=int, default=DEFAULT_ENUM_LIMIT)
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliExit as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except SizeLimitError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SIZE


if __name__ == "__main__":
    sys.exit(main())
