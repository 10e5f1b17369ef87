"""Command-line entry point: ``formhyp <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .catalog import TIERS, UnknownGroup, builtin_catalog, get_group, tier_limit
from .critical import n_critical_graph
from .formations import (
    Partition,
    SpecError,
    hypercenter,
    is_hereditary,
    parse_formation,
)
from .groups import GroupError, OrderCapExceeded, subgroup_from_indices
from .harness import (
    DEFAULT_FORMATIONS,
    Report,
    find_counterexample,
    verify_corollaries,
    verify_critical,
    verify_hall,
    verify_lemma_suite,
    verify_theorem1,
)
from .subnormality import ksn_chain

EXIT_OK, EXIT_FAIL = 0, 1
EXIT_UNKNOWN_GROUP, EXIT_BAD_SPEC, EXIT_CAP = 3, 4, 5


def _tier(text: str) -> str | int:
    try:
        tier_limit(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return text


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="formhyp", description="Formation hypercenter verification harness.")
    sub = p.add_subparsers(dest="command", required=True)

    cat = sub.add_parser("catalog", help="catalog operations")
    cat_sub = cat.add_subparsers(dest="action", required=True)
    ls = cat_sub.add_parser("list", help="list catalog groups")
    ls.add_argument("--tier", type=_tier, default="large", help=f"one of {', '.join(TIERS)} or an order bound")

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", required=True, choices=["theorem1", "hall", "corollaries", "lemmas", "critical"])
    v.add_argument("--sigma", action="append", help="partition, e.g. '2,3|5,7;rest=singletons' (repeatable)")
    v.add_argument("--formation", action="append", help="formation spec for the lemma suite (repeatable)")
    v.add_argument("--tier", type=_tier, default="small")
    v.add_argument("--report", type=Path, help="write the newline-delimited report here instead of stdout")
    v.add_argument("--oracle", action="store_true", help="also run the brute-force oracles")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--budget", type=int, default=500, help="samples per lemma")

    h = sub.add_parser("hypercenter", help="print the F-hypercenter of a group")
    h.add_argument("--group", required=True, help="catalog label or group file")
    h.add_argument("--formation", required=True)

    s = sub.add_parser("subnormal", help="decide K-F-subnormality of a subgroup")
    s.add_argument("--group", required=True)
    s.add_argument("--sub", required=True, help="comma-separated element indices generating the subgroup")
    s.add_argument("--formation", required=True)

    g = sub.add_parser("graph", help="print the N-critical graph as an edge list")
    g.add_argument("--group", required=True)

    w = sub.add_parser("witness", help="search a tier for a group with S_F != Z_F")
    w.add_argument("--formation", required=True)
    w.add_argument("--tier", type=_tier, default="large")
    return p


def _sigmas(args) -> list[Partition]:
    return [Partition.parse(t) for t in (args.sigma or ["singletons"])]


def _verify(args) -> int:
    if args.suite == "theorem1":
        rep = Report("theorem1")
        for sigma in _sigmas(args):
            rep.extend(verify_theorem1(sigma, args.tier, oracle=args.oracle))
    elif args.suite == "hall":
        rep = verify_hall(args.tier)
    elif args.suite == "corollaries":
        rep = Report("corollaries")
        for sigma in _sigmas(args):
            rep.extend(verify_corollaries(sigma, args.tier))
    elif args.suite == "lemmas":
        fs = [parse_formation(f) for f in (args.formation or DEFAULT_FORMATIONS)]
        rep = verify_lemma_suite(args.tier, fs, budget=args.budget, seed=args.seed, oracle=args.oracle)
    else:
        rep = verify_critical(args.tier, _sigmas(args))
    text = rep.to_ndjson()
    if args.report:
        args.report.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    c = rep.counts()
    print(f"{rep.suite}: {c['pass']} pass, {c['fail']} fail, {c['skipped']} skipped", file=sys.stderr)
    return EXIT_OK if rep.passed else EXIT_FAIL


def _run(args) -> int:
    if args.command == "catalog":
        for G in builtin_catalog().tier(args.tier):
            print(f"{G.label}\t{G.order}")
        return EXIT_OK
    if args.command == "verify":
        return _verify(args)
    if args.command == "hypercenter":
        G, F = get_group(args.group), parse_formation(args.formation)
        Z = hypercenter(F, G)
        print(json.dumps({"group": G.label, "formation": str(F), "order": Z.order, "members": Z.members.tolist()}))
        return EXIT_OK
    if args.command == "subnormal":
        G, F = get_group(args.group), parse_formation(args.formation)
        try:
            gens = [int(x) for x in args.sub.split(",") if x.strip()]
        except ValueError:
            raise SpecError(f"bad element index list {args.sub!r}") from None
        if any(not 0 <= x < G.order for x in gens):
            raise SpecError(f"element index out of range for a group of order {G.order}")
        H = subgroup_from_indices(G, gens, check=False)
        chain = ksn_chain(F, H, G)
        doc = {"group": G.label, "formation": str(F), "subgroup_order": H.order, "k_f_subnormal": chain is not None}
        if chain is not None:
            doc["chain_orders"] = [S.order for S in chain.steps]
            doc["steps"] = list(chain.step_kind)
        print(json.dumps(doc))
        return EXIT_OK
    if args.command == "graph":
        sys.stdout.write(n_critical_graph(get_group(args.group)).edge_list())
        return EXIT_OK
    if args.command == "witness":
        F = parse_formation(args.formation)
        if not is_hereditary(F):
            raise SpecError(f"witness search needs a hereditary formation, got {F}")
        found = find_counterexample(F, args.tier)
        print(json.dumps(found) if found else "none")
        return EXIT_OK
    raise AssertionError(args.command)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except UnknownGroup as exc:
        print(f"error: unknown group {exc.args[0]!r}", file=sys.stderr)
        return EXIT_UNKNOWN_GROUP
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_SPEC
    except OrderCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except GroupError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_SPEC


if __name__ == "__main__":
    sys.exit(main())
