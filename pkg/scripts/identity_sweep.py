"""Sweep every identity over |n| <= N for a system file and print a per-identity tally.

    python3 scripts/identity_sweep.py configs/companion.json --max-total 8
    python3 scripts/identity_sweep.py configs/reference.json --backend float
"""
import argparse
import time
from collections import Counter
from pathlib import Path

from mopuc import FloatField, graded_sweep, parse_system


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("system")
    ap.add_argument("--max-total", type=int, default=8)
    ap.add_argument("--backend", choices=["exact", "float"], default="exact")
    args = ap.parse_args()

    field = FloatField() if args.backend == "float" else None
    system = parse_system(Path(args.system).read_text(), field)
    start = time.perf_counter()
    summary = graded_sweep(system, args.max_total)
    elapsed = time.perf_counter() - start

    tally = Counter((rep.identity, rep.status) for rep in summary.reports)
    names = sorted({name for name, _ in tally})
    print(f"{'identity':24s} {'ok':>6s} {'skipped':>8s} {'n/a':>6s}")
    for name in names:
        print(
            f"{name:24s} {tally[name, 'ok']:6d} "
            f"{tally[name, 'precondition-failed']:8d} {tally[name, 'not-applicable']:6d}"
        )
    print(f"\nfailures: {len(summary.failures)}  max residual: {summary.max_residual:.3g}  time: {elapsed:.2f}s")


if __name__ == "__main__":
    main()
