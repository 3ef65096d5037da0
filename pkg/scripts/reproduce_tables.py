#!/usr/bin/env python3
"""Regenerate the experiment tables into one output directory."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Dict, List

PROJECT_ROOT = Path(__file__).resolve().parents[1]
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

from src.cli import main as cli_main
from src.cli.emit import write_csv
from src.core.config import DEFAULT_SEED
from src.services.derangement import centralizer_bound_check, goursat_probe

PRESETS: Dict[str, List[str]] = {
    "duke": ["duke", "--height", "10", "--shards", "8"],
    "blcount": ["blcount", "--height", "5,10,20", "--shards", "8"],
    "tx": ["tx", "--height", "10", "--log-window", "20", "--shards", "8"],
    "equidist": ["equidist", "--primes", "101,1009,10007", "--ell", "2,3,5,7"],
    "derangement": ["derangement", "--ell", "3,5,7,11,13"],
    "sieve": ["sieve", "--demo", "even-numerator", "--height", "10,100,1000"],
}


def probe_tables(out_dir: Path, seed: int) -> None:
    goursat = [dict(ell=ell, **goursat_probe(ell, 200, seed)) for ell in (5, 7)]
    with open(out_dir / "goursat.csv", "w", encoding="utf-8", newline="") as fh:
        write_csv(goursat, fh)
    centralizers = [
        dict(ell=ell, **row) for ell in (5, 7) for row in centralizer_bound_check(ell, 100, seed)
    ]
    with open(out_dir / "centralizers.csv", "w", encoding="utf-8", newline="") as fh:
        write_csv(centralizers, fh)


def main() -> None:
    parser = argparse.ArgumentParser(description="Rerun every preset experiment")
    parser.add_argument("out_dir", type=Path, help="Directory receiving one CSV per table")
    parser.add_argument(
        "--only",
        choices=sorted(PRESETS) + ["probes"],
        action="append",
        help="Restrict to the named tables (repeatable)",
    )
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help="Seed for the probes")
    args = parser.parse_args()

    args.out_dir.mkdir(parents=True, exist_ok=True)
    wanted = args.only or sorted(PRESETS) + ["probes"]
    failed = []
    for name in wanted:
        if name == "probes":
            probe_tables(args.out_dir, args.seed)
            continue
        target = args.out_dir / f"{name}.csv"
        summary = args.out_dir / f"{name}.summary.json"
        code = cli_main([*PRESETS[name], "--out", str(target), "--summary", str(summary)])
        print(f"{name}: exit {code} -> {target}", file=sys.stderr)
        if code:
            failed.append(name)

    if failed:
        print(f"Failed tables: {', '.join(failed)}", file=sys.stderr)
        sys.exit(1)


if __name__ == "__main__":
    main()
