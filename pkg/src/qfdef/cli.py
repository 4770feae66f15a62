"""Command-line interface.

Exit codes: 0 definable / success, 1 not definable, 2 usage error,
3 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from .algebra import (
    Algebra,
    extension,
    format_formula,
    load_algebra,
    load_relation,
    save_algebra,
    save_relation,
)
from .bench import BenchConfig, bench, write_csv
from .decision import Decision
from .generators import (
    gen_abelian_group,
    gen_boolean_algebra,
    gen_random_algebra,
    gen_random_formula,
)
from .isotype import iso_type, iso_type_terms
from .merging import merging_decide
from .oracle import (
    BudgetExceededError,
    DEFAULT_BUDGET,
    graph_star,
    load_graph,
    oracle_definable,
)
from .preprocess import decompose
from .splitting import SplitStats, splitting_decide

EXIT_DEFINABLE = 0
EXIT_NOT_DEFINABLE = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _trace_printer(enabled: bool):
    if not enabled:
        return None
    return lambda msg: print(msg, file=sys.stderr)


def _parse_tuple(alg: Algebra, text: str) -> tuple[int, ...]:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise ValueError("empty tuple")
    return tuple(alg.element(p) for p in parts)


def _decision_json(alg: Algebra, decision: Decision, stats: SplitStats | None = None) -> dict:
    if decision.is_definable:
        doc: dict = {"definable": True}
        if decision.formula is not None:
            doc["formula"] = format_formula(decision.formula, alg.constants)
    else:
        doc = {
            "definable": False,
            "witness_in": list(decision.witness_in),
            "witness_out": list(decision.witness_out),
            "gamma": decision.gamma.to_json(),
        }
    if stats is not None:
        doc["stats"] = {
            "blocks_created": stats.blocks_created,
            "steps": stats.steps,
            "refills": stats.refills,
            "full_blocks": stats.full_blocks,
            "max_depth": stats.max_depth,
        }
    return doc


def _cmd_decide(args) -> int:
    alg = load_algebra(args.algebra)
    rel = load_relation(args.relation)
    trace = _trace_printer(args.trace)
    if args.strategy == "merging":
        decision = merging_decide(alg, rel, debug=args.check_invariants, trace=trace)
        stats = None
    else:
        stats = SplitStats()
        decision = splitting_decide(
            alg, rel, debug=args.check_invariants, stats=stats, trace=trace
        )
    print(json.dumps(_decision_json(alg, decision, stats), ensure_ascii=False))
    if decision.is_definable and decision.formula is not None and args.emit_formula:
        with open(args.emit_formula, "w", encoding="utf-8") as fh:
            fh.write(format_formula(decision.formula, alg.constants) + "\n")
    return EXIT_DEFINABLE if decision.is_definable else EXIT_NOT_DEFINABLE


def _cmd_isotype(args) -> int:
    alg = load_algebra(args.algebra)
    a = _parse_tuple(alg, args.tuple)
    if args.trace:
        sig, terms = iso_type_terms(alg, a)
    else:
        sig, terms = iso_type(alg, a), None
    doc = {
        "partition": [list(b) for b in sig.partition],
        "universe": [alg.name(e) for e in sig.universe],
        "depth": sig.depth,
    }
    if terms is not None:
        doc["terms"] = list(terms)
    print(json.dumps(doc, ensure_ascii=False))
    return EXIT_DEFINABLE


def _cmd_decompose(args) -> int:
    rel = load_relation(args.relation)
    bundle = decompose(rel)
    doc = {
        "arity": bundle.original_arity,
        "spec": list(bundle.spec),
        "targets": [
            {"pattern": t.pattern.to_json(), "tuples": sorted(list(x) for x in t.tuples)}
            for t in bundle.targets
        ],
    }
    print(json.dumps(doc))
    return EXIT_DEFINABLE


def _cmd_oracle(args) -> int:
    alg = load_algebra(args.algebra)
    rel = load_relation(args.relation)
    decision = oracle_definable(alg, rel, budget=args.budget)
    print(json.dumps(_decision_json(alg, decision), ensure_ascii=False))
    return EXIT_DEFINABLE if decision.is_definable else EXIT_NOT_DEFINABLE


def _parse_signature(text: str) -> list[tuple[str, int]]:
    out = []
    for part in text.split(","):
        name, _, arity = part.partition(":")
        if not name or not arity.isdigit():
            raise ValueError(f"bad signature entry {part!r}; expected name:arity")
        out.append((name.strip(), int(arity)))
    return out


def _cmd_gen(args) -> int:
    if args.kind == "random":
        alg = gen_random_algebra(args.size, _parse_signature(args.signature), seed=args.seed)
        save_algebra(alg, args.out)
    elif args.kind == "bool":
        save_algebra(gen_boolean_algebra(args.atoms), args.out)
    elif args.kind == "group":
        factors = [int(p) for p in args.factors.split(",")]
        save_algebra(gen_abelian_group(factors), args.out)
    elif args.kind == "graph-star":
        alg, emb = graph_star(load_graph(args.graph))
        save_algebra(alg, args.out)
        print(json.dumps({"zero": emb.zero, "one": emb.one}))
    elif args.kind == "formula":
        alg = load_algebra(args.algebra)
        phi = gen_random_formula(alg, args.arity, args.depth, args.atoms, seed=args.seed)
        text = format_formula(phi, alg.constants)
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        if args.extension_out:
            save_relation(extension(alg, phi, args.arity), args.extension_out)
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(f"unknown generator {args.kind!r}")
    return EXIT_DEFINABLE


def _cmd_bench(args) -> int:
    config = BenchConfig(
        family=args.family,
        sizes=tuple(int(s) for s in args.sizes.split(",")),
        samples=args.samples,
        target_arity=args.arity,
        strategies=tuple(args.strategies.split(",")),
        seed=args.seed,
        time_budget=args.time_budget,
    )
    records = list(bench(config))
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            write_csv(records, fh)
    else:
        write_csv(records, sys.stdout)
    if args.json:
        print(json.dumps([rec.__dict__ for rec in records]))
    return EXIT_DEFINABLE


def _allow_global_flags(p: argparse.ArgumentParser) -> None:
    """Let the global flags also appear after the subcommand."""
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS, help=argparse.SUPPRESS)
    p.add_argument(
        "--time-budget", type=float, default=argparse.SUPPRESS, help=argparse.SUPPRESS
    )
    p.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help=argparse.SUPPRESS)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qfdef",
        description="Decide quantifier-free definability of relations over finite algebras.",
    )
    parser.add_argument("--seed", type=int, default=0, help="seed for input generation")
    parser.add_argument("--time-budget", type=float, default=None, help="per-run budget, seconds")
    parser.add_argument("--json", action="store_true", help="also emit machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decide", help="decide definability of a relation")
    p.add_argument("--strategy", choices=("merging", "splitting"), required=True)
    p.add_argument("--algebra", required=True)
    p.add_argument("--relation", required=True)
    p.add_argument("--trace", action="store_true", help="log processing events to stderr")
    p.add_argument("--check-invariants", action="store_true", help="run debug assertion suite")
    p.add_argument("--emit-formula", default=None, help="write the defining formula to this file")
    _allow_global_flags(p)
    p.set_defaults(func=_cmd_decide)

    p = sub.add_parser("isotype", help="canonical type of a tuple")
    p.add_argument("--algebra", required=True)
    p.add_argument("--tuple", required=True, help="comma-separated element names or indices")
    p.add_argument("--trace", action="store_true", help="include the evaluated term strings")
    _allow_global_flags(p)
    p.set_defaults(func=_cmd_isotype)

    p = sub.add_parser("decompose", help="pattern decomposition of a relation")
    p.add_argument("--relation", required=True)
    _allow_global_flags(p)
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("oracle", help="brute-force definability (small inputs)")
    p.add_argument("--algebra", required=True)
    p.add_argument("--relation", required=True)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="candidate-map bound")
    _allow_global_flags(p)
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("gen", help="generate inputs")
    gensub = p.add_subparsers(dest="kind", required=True)
    g = gensub.add_parser("random", help="random algebra")
    g.add_argument("--size", type=int, required=True)
    g.add_argument("--signature", default="f:2,g:3")
    g.add_argument("--out", required=True)
    g = gensub.add_parser("bool", help="boolean algebra of subsets")
    g.add_argument("--atoms", type=int, required=True)
    g.add_argument("--out", required=True)
    g = gensub.add_parser("group", help="product of cyclic groups")
    g.add_argument("--factors", required=True, help="comma-separated cyclic orders")
    g.add_argument("--out", required=True)
    g = gensub.add_parser("graph-star", help="algebra derived from a graph")
    g.add_argument("--graph", required=True)
    g.add_argument("--out", required=True)
    g = gensub.add_parser("formula", help="random formula over an algebra")
    g.add_argument("--algebra", required=True)
    g.add_argument("--arity", type=int, required=True)
    g.add_argument("--depth", type=int, default=2)
    g.add_argument("--atoms", type=int, default=8)
    g.add_argument("--out", required=True)
    g.add_argument("--extension-out", default=None, help="also save the formula's extension")
    for sp in gensub.choices.values():
        _allow_global_flags(sp)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("bench", help="benchmark sweep with CSV output")
    p.add_argument("--family", choices=("random", "boolean-algebra", "abelian-group", "graph-star"), required=True)
    p.add_argument("--sizes", default="4,8,16", help="comma-separated sizes")
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--arity", type=int, default=2)
    p.add_argument("--strategies", default="merging,splitting")
    p.add_argument("--csv", default=None, help="CSV output path (default: stdout)")
    _allow_global_flags(p)
    p.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    # the gen subcommand takes its seed from the global flag
    if not hasattr(args, "seed"):
        args.seed = 0
    try:
        return args.func(args)
    except BudgetExceededError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
