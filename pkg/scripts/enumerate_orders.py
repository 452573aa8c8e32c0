"""Exhaustive Cayley-table enumeration, timed, and matched against the constructive catalog.

    python scripts/enumerate_orders.py --orders 1-14
    python scripts/enumerate_orders.py --orders 16,18,20 --workers 4   # slower
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass

from psigroups import config
from psigroups.group import find_isomorphism
from psigroups.smallgroups import constructive_catalog, enumerate_order, identify


@dataclass
class EnumConfig:
    orders: tuple[int, ...] = tuple(range(1, 15))
    workers: int = 1
    seed: int = 0
    time_budget: float | None = None
    compare: bool = True


def parse_orders(text: str) -> tuple[int, ...]:
    out = []
    for part in text.split(","):
        if "-" in part:
            lo, hi = map(int, part.split("-"))
            out.extend(range(lo, hi + 1))
        else:
            out.append(int(part))
    return tuple(out)


def matches_catalog(n: int, tables) -> bool:
    """Bijection under isomorphism between enumerated tables and constructed groups."""
    groups, _ = constructive_catalog(n)
    if len(groups) != len(tables):
        return False
    unused = list(groups)
    for t in tables:
        G = t.group()
        hit = next((H for H in unused if find_isomorphism(G, H) is not None), None)
        if hit is None:
            return False
        unused.remove(hit)
    return True


def run(cfg: EnumConfig) -> bool:
    ok = True
    biggest = max(cfg.orders)
    with config.override(exhaustive_cap=max(biggest, config.LIMITS.exhaustive_cap)):
        print(f"{'n':>3} {'groups':>6} {'seconds':>8}  catalog  names")
        for n in cfg.orders:
            t0 = time.perf_counter()
            tabs = enumerate_order(n, workers=cfg.workers, seed=cfg.seed, time_budget=cfg.time_budget)
            dt = time.perf_counter() - t0
            agree = matches_catalog(n, tabs) if cfg.compare else None
            ok &= agree is not False
            names = ", ".join(identify(t.group()) or "?" for t in tabs)
            flag = {True: "match", False: "MISMATCH", None: "-"}[agree]
            print(f"{n:>3} {len(tabs):>6} {dt:>8.2f}  {flag:<8} {names}")
    return ok


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--orders", type=parse_orders, default=EnumConfig().orders)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--time-budget", type=float)
    ap.add_argument("--no-compare", action="store_true")
    a = ap.parse_args()
    return 0 if run(EnumConfig(a.orders, a.workers, a.seed, a.time_budget, not a.no_compare)) else 1


if __name__ == "__main__":
    sys.exit(main())
