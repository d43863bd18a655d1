"""Command-line front end.

Exit codes: 0 success, 2 validation error, 3 computation limit, 4 unreadable
input. With ``--json`` each command prints exactly one JSON document on
success; diagnostics always go to stderr.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from . import __version__
from .backdoor import DEFAULT_MAX_POOL, backdoor_violation, enumerate_minimal_backdoor_sets
from .bench import METHODS, ExperimentConfig, run_experiment
from .cpdag import (
    OrientationChoice,
    amenability_witness,
    cavs_on_cpdag,
    check_cpdag_or_dag,
    enumerate_equivalence_class,
    gac_violation,
    orient_and_restrict,
)
from .errors import CavsError, GraphError, LimitError, ParseError, ValidationError
from .graph import MixedGraph, max_paths_from_env
from .intervention import do_effect
from .io import emit_network, read_csv_dataset, read_network, write_csv_dataset
from .network import CptNetwork, forward_sample, random_network
from .selection import check_coverage, select_adjustment

SCHEMA_VERSION = 1

EXIT_OK, EXIT_VALIDATION, EXIT_LIMIT, EXIT_INPUT = 0, 2, 3, 4


def _doc(command, **payload):
    return {"schema_version": SCHEMA_VERSION, "command": command, **payload}


def _emit(args, doc, text):
    if args.json:
        sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _fmt_set(members):
    return "{" + ", ".join(members) + "}"


def _load_graph(path) -> tuple[MixedGraph, CptNetwork | None]:
    obj = read_network(path)
    if isinstance(obj, CptNetwork):
        return obj.graph, obj
    return obj, None


def _load_dag(path):
    g, net = _load_graph(path)
    if not g.is_dag:
        raise GraphError(
            f"{path} contains undirected edges; use the 'cpdag' subcommands for CPDAGs"
        )
    return g, net


def _load_data(path, net):
    alphabets = None
    if net is not None:
        alphabets = dict(zip(net.graph.names, net.alphabets))
    d = read_csv_dataset(Path(path).read_text(encoding="utf-8"), alphabets)
    if len(d) == 0:
        raise ValidationError(f"{path} has no data rows")
    return d


def _split_names(text):
    return [t.strip() for t in (text or "").split(",") if t.strip()]


# -- commands -----------------------------------------------------------------------

def cmd_backdoor_sets(args):
    g, _ = _load_dag(args.graph)
    sets = enumerate_minimal_backdoor_sets(g, args.x, args.y, max_pool=args.max_pool,
                                           cap=max_paths_from_env())
    doc = _doc("backdoor-sets", x=args.x, y=args.y, sets=[list(s.members) for s in sets])
    _emit(args, doc, "\n".join(_fmt_set(s.members) for s in sets))


def cmd_select(args):
    g, net = _load_dag(args.graph)
    d = _load_data(args.data, net)
    check_coverage(g, d)
    rep = select_adjustment(g, args.x, args.y, d, unit="bits" if args.bits else "nats",
                            max_pool=args.max_pool, cap=max_paths_from_env())
    lines = [f"MI ({rep.unit}) with {rep.x}, ascending:"]
    for c in rep.ranked:
        mark = "*" if c is rep.chosen else " "
        lines.append(f" {mark} {_fmt_set(c.members):<30} {c.mi_score:.6g}")
    lines.append(f"chosen: {_fmt_set(rep.chosen.members)}")
    if rep.ties_broken:
        lines.append("note: lowest score was tied; broken by size, then variable order")
    _emit(args, _doc("select", **rep.to_dict()), "\n".join(lines))


def _stratum(names, values):
    return ", ".join(f"{n}={v}" for n, v in zip(names, values))


def _effect_text(r):
    diag = r.diagnostics
    lines = [f"P({r.y_variable} | do({r.x_variable})), adjusting for {_fmt_set(r.adjustment)}"]
    rows = [f"do({r.x_variable}={xl})" for xl in r.x_categories]
    width = max(len(t) for t in rows) + 2
    lines.append(" " * width + "".join(f"{r.y_variable + '=' + c:>10}" for c in r.y_categories))
    for label, row in zip(rows, r.per_x):
        lines.append(f"{label:<{width}}" + "".join(f"{p:>10.4f}" for p in row))
    if r.adjustment:
        lines.append("strata (weight = P(stratum); rows per treatment value):")
        for k, s in enumerate(diag.strata):
            n, tot = r.weights_exact[k]
            counts = ", ".join(f"{r.x_variable}={xl}: {int(diag.counts[j, k])}"
                               for j, xl in enumerate(r.x_categories))
            lines.append(f"  {_stratum(r.adjustment, s)}  weight {n}/{tot} ({n / tot:.4f})  [{counts}]")
    for xl, s, c in diag.sparse:
        lines.append(f"warning: only {c} sample(s) with {r.x_variable}={xl} in stratum "
                     f"{_stratum(r.adjustment, s)}")
    for xl, s in diag.fallbacks:
        lines.append(f"warning: no samples with {r.x_variable}={xl} in stratum "
                     f"{_stratum(r.adjustment, s)}; used P({r.y_variable} | {r.x_variable}={xl})")
    return "\n".join(lines)


def cmd_effect(args):
    g, net = _load_dag(args.graph)
    d = _load_data(args.data, net)
    check_coverage(g, d)
    selection = None
    if args.auto:
        selection = select_adjustment(g, args.x, args.y, d, max_pool=args.max_pool,
                                      cap=max_paths_from_env())
        z = list(selection.chosen.members)
    else:
        z = _split_names(args.z)
        if not args.unsafe:
            problem = backdoor_violation(g, args.x, args.y, z, cap=max_paths_from_env())
            if problem:
                raise ValidationError(
                    f"{_fmt_set(z)} does not satisfy the back-door criterion: {problem} "
                    "(pass --unsafe to estimate anyway)"
                )
    r = do_effect(d, args.x, args.y, z, strict=args.strict)
    doc = _doc("effect", unsafe=bool(args.unsafe), **r.to_dict())
    if selection is not None:
        doc["selection"] = selection.to_dict()
    _emit(args, doc, _effect_text(r))


def cmd_cpdag(args):
    g, _ = _load_graph(args.graph)
    check_cpdag_or_dag(g)
    args.json = args.json or args.json_outer
    action = args.action
    if action == "amenable":
        witness = amenability_witness(g, args.x, args.y)
        doc = _doc("cpdag-amenable", x=args.x, y=args.y, amenable=witness is None,
                   witness=witness)
        if witness is None:
            text = f"amenable: yes ({args.x} -> {args.y})"
        else:
            text = (f"amenable: no; possibly directed path {' - '.join(witness)} starts with "
                    f"the undirected edge {witness[0]} - {witness[1]}")
        _emit(args, doc, text)
    elif action == "gac":
        z = _split_names(args.z)
        problem = gac_violation(g, args.x, args.y, z, max_paths_from_env())
        doc = _doc("cpdag-gac", x=args.x, y=args.y, z=z, satisfied=problem is None,
                   reason=problem)
        _emit(args, doc, "satisfied" if problem is None else f"not satisfied: {problem}")
    elif action == "orient":
        choice = OrientationChoice.parse(args.edges)
        cls = orient_and_restrict(g, args.x, choice, args.max_class)
        full = enumerate_equivalence_class(g, args.max_class)
        members = [[list(e) for e in m.directed_edges()] for m in cls]
        doc = _doc("cpdag-orient", x=args.x, orientation=[list(e) for e in choice.edges],
                   class_size=len(full), restricted_size=len(cls), members=members)
        lines = [f"equivalence class: {len(full)} DAG(s); after orientation: {len(cls)}"]
        for k, m in enumerate(cls):
            lines.append(f"[{k}] " + ", ".join(f"{a}->{b}" for a, b in m.directed_edges()))
        if args.dot:
            lines.append(cls[0].to_dot())
        _emit(args, doc, "\n".join(lines))
    elif action == "select":
        d = _load_data(args.data, None)
        choice = OrientationChoice.parse(args.edges) if args.edges else None
        rep = cavs_on_cpdag(g, args.x, args.y, d, choice, cap=args.max_class,
                            max_pool=args.max_pool)
        lines = [f"class members considered: {rep.class_size}; using "
                 + ", ".join(f"{a}->{b}" for a, b in rep.dag.directed_edges())]
        for c in rep.ranked:
            lines.append(f"  {_fmt_set(c.members):<30} {c.mi_score:.6g}")
        lines.append(f"chosen: {_fmt_set(rep.chosen.members)}")
        _emit(args, _doc("cpdag-select", **rep.to_dict()), "\n".join(lines))


def _write_or_print(args, text, command, **extra):
    digest = hashlib.sha256(text.encode()).hexdigest()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        doc = _doc(command, output=args.out, sha256=digest, **extra)
        _emit(args, doc, f"wrote {args.out}")
    elif args.json:
        _emit(args, _doc(command, output=None, sha256=digest, content=text, **extra), "")
    else:
        sys.stdout.write(text)


def cmd_sample(args):
    obj = read_network(args.network)
    if not isinstance(obj, CptNetwork):
        raise ValidationError(f"{args.network} has no CPTs to sample from")
    d = forward_sample(obj, args.n, args.seed)
    _write_or_print(args, write_csv_dataset(d), "sample", rows=args.n, seed=args.seed)


def cmd_gen(args):
    net = random_network(args.nodes, args.edges, args.card, args.seed,
                         cpt_seed=args.cpt_seed, mode=args.mode)
    _write_or_print(args, emit_network(net), "gen", nodes=args.nodes, edges=args.edges,
                    cardinality=args.card, seed=args.seed)


def cmd_bench(args):
    cfg = ExperimentConfig(
        seed=args.seed,
        x=args.x,
        y=args.y,
        n_nodes=args.nodes,
        n_edges=args.edges,
        cardinality=args.card,
        n_graphs=args.graphs,
        n_cpts=args.cpts,
        reference_n=args.reference_n,
        subsample_n=args.subsample_n,
        k_subsamples=args.k,
        methods=tuple(_split_names(args.methods)),
        mi_source=args.mi_source,
        max_pool=args.max_pool,
        network_file=args.network,
    )
    report = run_experiment(cfg)
    if args.out:
        Path(args.out + ".csv").write_text(report.to_csv(), encoding="utf-8")
        Path(args.out + ".json").write_text(report.to_json(), encoding="utf-8")
    doc = {**report.to_dict(), "command": "bench", "rows": report.rows}
    for f in report.failures:
        print(f"warning: {f['method']} failed: {f['message']}", file=sys.stderr)
    _emit(args, doc, report.table())


# -- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cavs", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"cavs {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print one JSON document")
    xy = argparse.ArgumentParser(add_help=False)
    xy.add_argument("--x", required=True, help="treatment variable")
    xy.add_argument("--y", required=True, help="outcome variable")
    pool = argparse.ArgumentParser(add_help=False)
    pool.add_argument("--max-pool", type=int, default=DEFAULT_MAX_POOL,
                      help="largest candidate pool scanned for minimal sets")

    s = sub.add_parser("backdoor-sets", parents=[common, xy, pool],
                       help="list minimal back-door sets")
    s.add_argument("graph")
    s.set_defaults(func=cmd_backdoor_sets)

    s = sub.add_parser("select", parents=[common, xy, pool],
                       help="rank minimal back-door sets by MI with the treatment")
    s.add_argument("graph")
    s.add_argument("data")
    s.add_argument("--bits", action="store_true", help="report MI in bits")
    s.set_defaults(func=cmd_select)

    s = sub.add_parser("effect", parents=[common, xy, pool],
                       help="estimate P(y | do(x)) by adjustment")
    s.add_argument("graph")
    s.add_argument("data")
    how = s.add_mutually_exclusive_group(required=True)
    how.add_argument("--z", help="comma-separated adjustment set ('' for none)")
    how.add_argument("--auto", action="store_true", help="choose the set by MI ranking")
    s.add_argument("--unsafe", action="store_true",
                   help="skip the back-door check on --z")
    s.add_argument("--strict", action="store_true",
                   help="fail on empty strata instead of falling back")
    s.set_defaults(func=cmd_effect)

    s = sub.add_parser("cpdag", parents=[xy], help="CPDAG analysis")
    s.add_argument("graph")
    s.add_argument("--json", dest="json_outer", action="store_true")
    s.add_argument("--max-class", type=int, default=10_000)
    acts = s.add_subparsers(dest="action", required=True)
    a = acts.add_parser("amenable", parents=[common])
    a = acts.add_parser("gac", parents=[common])
    a.add_argument("--z", required=True, help="comma-separated set ('' for none)")
    a = acts.add_parser("orient", parents=[common])
    a.add_argument("--edges", required=True, help="orientations such as 'Z1->X'")
    a.add_argument("--dot", action="store_true", help="append the first member as DOT")
    a = acts.add_parser("select", parents=[common, pool])
    a.add_argument("--data", required=True)
    a.add_argument("--edges", help="orientations for undirected edges at x")
    s.set_defaults(func=cmd_cpdag)

    s = sub.add_parser("sample", parents=[common], help="forward-sample a CPT network")
    s.add_argument("network")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("gen", parents=[common], help="generate a random CPT network")
    s.add_argument("--nodes", type=int, required=True)
    s.add_argument("--edges", type=int, required=True)
    s.add_argument("--card", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--cpt-seed", type=int)
    s.add_argument("--mode", choices=("uniform", "dirichlet"), default="uniform")
    s.add_argument("--out")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("bench", parents=[common, pool], help="subsampling benchmark")
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--network", help="fixed CPT network (needs --x and --y)")
    s.add_argument("--x")
    s.add_argument("--y")
    s.add_argument("--nodes", type=int, default=30)
    s.add_argument("--edges", type=int, default=40)
    s.add_argument("--card", type=int, default=4)
    s.add_argument("--graphs", type=int, default=4)
    s.add_argument("--cpts", type=int, default=3)
    s.add_argument("--reference-n", type=int, default=10_000)
    s.add_argument("--subsample-n", type=int, default=500)
    s.add_argument("--k", type=int, default=5, help="subsamples per network")
    s.add_argument("--methods", default=",".join(METHODS))
    s.add_argument("--mi-source", choices=("reference", "subsample"), default="reference")
    s.add_argument("--out", help="write OUT.csv and OUT.json")
    s.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if not hasattr(args, "json"):
        args.json = False
    try:
        args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except LimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (ValidationError, CavsError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
