"""Check random family members beyond the catalog: psi' band, structural label,
and modularity where the lattice fits.

    python scripts/sample_families.py --count 200 --max-order 2000 --seed 7
"""

from __future__ import annotations

import argparse
import sys
import time
from collections import Counter
from dataclasses import dataclass

from psigroups.classify import check_family_member, sample_family_members


@dataclass
class SampleConfig:
    count: int = 100
    max_order: int = 2000
    seed: int = 0


def run(cfg: SampleConfig) -> bool:
    t0 = time.perf_counter()
    members = sample_family_members(cfg.count, cfg.seed, cfg.max_order)
    failures = 0
    for tag, k, m in members:
        problems = check_family_member(tag, k, m)
        if problems:
            failures += 1
            print(f"FAIL {tag} k={k} m={m}: {'; '.join(problems)}")
    seen = Counter(tag for tag, _, _ in members)
    for tag, c in sorted(seen.items()):
        print(f"  {tag:<20} {c:>4} members")
    print(f"{len(members)} members, {failures} failures, {time.perf_counter() - t0:.1f}s")
    return failures == 0


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--max-order", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    return 0 if run(SampleConfig(a.count, a.max_order, a.seed)) else 1


if __name__ == "__main__":
    sys.exit(main())
