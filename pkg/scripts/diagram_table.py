"""Print the psi' threshold table, optionally writing CSV and JSON copies."""

from __future__ import annotations

import argparse
from pathlib import Path

from psigroups.classify import diagram_csv, diagram_data, diagram_json


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, help="directory for diagram.csv and diagram.json")
    a = ap.parse_args()
    for e in diagram_data():
        d = e.to_dict()
        print(f"{d['value']:>9}  {d['decimal']}  {d['endpoint']:<6} {d['label']}")
    if a.out:
        a.out.mkdir(parents=True, exist_ok=True)
        (a.out / "diagram.csv").write_text(diagram_csv())
        (a.out / "diagram.json").write_text(diagram_json() + "\n")


if __name__ == "__main__":
    main()
