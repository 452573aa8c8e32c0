"""Run the verification campaigns over the small-group catalog and save JSON reports.

    python scripts/run_campaigns.py --max-order 24 --out results/
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

from psigroups import config
from psigroups.classify import CAMPAIGNS


@dataclass
class CampaignConfig:
    max_order: int = 24
    campaigns: list[str] = field(default_factory=lambda: ["theorem-a", "theorem-b", "interval", "properties"])
    out: Path = Path("results")
    workers: int = 1


def run(cfg: CampaignConfig) -> bool:
    cfg.out.mkdir(parents=True, exist_ok=True)
    ok = True
    with config.override(workers=cfg.workers):
        for name in cfg.campaigns:
            with open(cfg.out / f"{name}.jsonl", "w") as stream:
                rep = CAMPAIGNS[name](cfg.max_order, stream=stream)
            (cfg.out / f"{name}.json").write_text(rep.to_json() + "\n")
            ok &= rep.success
            print(f"{name:<11} max order {cfg.max_order}: {'ok' if rep.success else 'FAILED'} "
                  f"({len(rep.records)} records, {len(rep.violations)} violations, {rep.wall_time:.1f}s)")
    return ok


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-order", type=int, default=24)
    ap.add_argument("--campaign", action="append", choices=sorted(CAMPAIGNS))
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--workers", type=int, default=1)
    a = ap.parse_args()
    cfg = CampaignConfig(a.max_order, a.campaign or CampaignConfig().campaigns, a.out, a.workers)
    return 0 if run(cfg) else 1


if __name__ == "__main__":
    sys.exit(main())
