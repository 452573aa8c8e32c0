"""Command-line entry point: ``psigroups <command> ...``.

Exit codes: 0 success, 1 verification violation, 2 parse or usage error,
3 resource budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from psigroups import config
from psigroups.classify import CAMPAIGNS, diagram_csv, diagram_json, diagram_data, label
from psigroups.dsl import build_group
from psigroups.errors import ExprError, GroupError, ResourceLimitError
from psigroups.group import FiniteGroup
from psigroups.lattice import all_subgroups, is_modular_lattice
from psigroups.numeric import decimal6, format_fraction
from psigroups.psi import psi, psi_prime
from psigroups.smallgroups import CATALOG_SCOPE, canonical_key, catalog, identify

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _show(H) -> str:
    return "{" + ", ".join(map(str, H.elements)) + "}"


def cmd_psi(args) -> int:
    print(psi(build_group(args.expr)))
    return EXIT_OK


def cmd_psiprime(args) -> int:
    q = psi_prime(build_group(args.expr))
    print(f"{format_fraction(q)} ≈ {decimal6(q)}")
    return EXIT_OK


def group_record(G: FiniteGroup) -> dict:
    q = psi_prime(G)
    lab = label(G)
    rec = {
        "expr": G.name,
        "order": G.order,
        "psi": str(psi(G)),
        "psiPrime": {"num": q.numerator, "den": q.denominator},
        "decimal": decimal6(q),
        "modular": is_modular_lattice(G).is_modular,
        "label": lab.tag,
        "params": lab.params,
    }
    if G.order <= CATALOG_SCOPE:
        rec["canonicalKey"] = canonical_key(G)
        rec["name"] = identify(G)
    return rec


def cmd_classify(args) -> int:
    print(json.dumps(group_record(build_group(args.expr)), indent=2))
    return EXIT_OK


def cmd_modular(args) -> int:
    G = build_group(args.expr)
    v = is_modular_lattice(G, method=args.method)
    if v.is_modular:
        print(f"{G.name}: modular")
    else:
        H, K, L = v.witness
        print(f"{G.name}: non-modular")
        print(f"  H = {_show(H)}")
        print(f"  K = {_show(K)}")
        print(f"  L = {_show(L)}")
        print("  H <= L but <H, K ^ L> != <H, K> ^ L")
    return EXIT_OK


def cmd_subgroups(args) -> int:
    G = build_group(args.expr)
    L = all_subgroups(G)
    normal = {H.mask for H in L.normal}
    print(f"{G.name}: {len(L)} subgroups")
    for H, gens in zip(L.nodes, L.generators):
        flag = "normal" if H.mask in normal else "      "
        print(f"  order {len(H):>4}  {flag}  generated by {list(gens)}")
    return EXIT_OK


def cmd_enumerate(args) -> int:
    method = {"exhaustive": "exhaustive", "catalog": "constructive", None: None}[args.method]
    cat = catalog(args.n, method)
    print(f"order {args.n}: {len(cat)} groups ({cat.method})")
    for key, name in zip(cat.keys, cat.names):
        print(f"  {name or '?':<20} {key}")
    if args.emit:
        _write(args.emit, "".join(k + "\n" for k in cat.keys))
    return EXIT_OK


def cmd_verify(args) -> int:
    stream = open(args.stream, "w") if args.stream else None
    try:
        rep = CAMPAIGNS[args.campaign](args.max_order, stream=stream)
    finally:
        if stream is not None:
            stream.close()
    if args.json:
        _write(args.json, rep.to_json() + "\n")
    if args.csv and args.campaign != "properties":
        _write(args.csv, rep.to_csv())
    status = "success" if rep.success else "FAILED"
    print(f"{rep.campaign} up to order {rep.max_order}: {status}, "
          f"{len(rep.records)} records, {len(rep.violations)} violations, {rep.wall_time:.1f}s")
    for r in rep.records:
        if "check" in r:
            print(f"  {r['check']}: {r['counterexamples']} counterexamples")
        else:
            frac = f"{r['psiPrime']['num']}/{r['psiPrime']['den']}"
            print(f"  {r['name'] or r['canonicalKey']:<16} psi'={frac:<10} modular={r['modular']!s:<5} {r['label']} {r['params'] or ''}")
    for n in rep.notes:
        print(f"  note: {n}")
    for v in rep.violations:
        print(f"  violation: {v}")
    return EXIT_OK if rep.success else EXIT_VIOLATION


def cmd_diagram(args) -> int:
    if args.json:
        _write(args.json, diagram_json() + "\n")
    if args.csv:
        _write(args.csv, diagram_csv())
    if not args.json and not args.csv:
        for e in diagram_data():
            d = e.to_dict()
            print(f"{d['value']:>9}  {d['decimal']}  {d['endpoint']:<6} {d['label']}  [{'; '.join(d['families'])}]")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="psigroups", description="Sums of element orders and subgroup lattices of finite groups.")
    ap.add_argument("--order-cap", type=int, help="largest Cayley table a construction may build")
    ap.add_argument("--exhaustive-cap", type=int, help="largest order for exhaustive enumeration")
    ap.add_argument("--time-budget", type=float, help="seconds allowed for exhaustive enumeration")
    ap.add_argument("--workers", type=int, help="worker processes for campaigns and enumeration")
    ap.add_argument("--seed", type=int, help="search-order seed (never changes results)")
    sub = ap.add_subparsers(dest="command", required=True)

    for name, fn, help_ in (
        ("psi", cmd_psi, "sum of element orders"),
        ("psiprime", cmd_psiprime, "psi(G) / psi(C_|G|), exact and 6-digit decimal"),
        ("classify", cmd_classify, "JSON record with psi', modularity and family label"),
        ("subgroups", cmd_subgroups, "list all subgroups"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("expr")
        p.set_defaults(func=fn)

    p = sub.add_parser("modular", help="modularity verdict with a Dedekind witness")
    p.add_argument("expr")
    p.add_argument("--method", choices=("dedekind", "n5"), default="dedekind")
    p.set_defaults(func=cmd_modular)

    p = sub.add_parser("enumerate", help="all groups of order N up to isomorphism")
    p.add_argument("n", type=int)
    p.add_argument("--method", choices=("exhaustive", "catalog"))
    p.add_argument("--emit", metavar="FILE", help="write canonical keys, one per line")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("verify", help="run a verification campaign over the catalog")
    p.add_argument("campaign", choices=sorted(CAMPAIGNS))
    p.add_argument("--max-order", type=int, required=True)
    p.add_argument("--json", metavar="FILE")
    p.add_argument("--csv", metavar="FILE")
    p.add_argument("--stream", metavar="FILE", help="append JSON lines as records are produced")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("diagram", help="threshold values of psi'")
    p.add_argument("--json", metavar="FILE")
    p.add_argument("--csv", metavar="FILE")
    p.set_defaults(func=cmd_diagram)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    changes = {
        "table_cap": args.order_cap,
        "exhaustive_cap": args.exhaustive_cap,
        "time_budget": args.time_budget,
        "workers": args.workers,
        "seed": args.seed,
    }
    changes = {k: v for k, v in changes.items() if v is not None}
    try:
        with config.override(**changes):
            return args.func(args)
    except ResourceLimitError as e:
        print(f"error: {e}", file=sys.stderr)
        if e.progress:
            print(f"progress: {json.dumps(e.progress, sort_keys=True)}", file=sys.stderr)
        return EXIT_BUDGET
    except (ExprError, GroupError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
