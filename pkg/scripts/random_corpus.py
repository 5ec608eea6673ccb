"""Exact sweep and float-vs-exact normality comparison over seeded random systems.

    python3 scripts/random_corpus.py --count 50 --max-total 6 --seed 0
"""
import argparse
import time

from mopuc import FloatField, Mopuc, graded_indices, graded_sweep, random_corpus


def classification_mismatches(system, max_total, excuse_below=1e-8):
    exact, flt = Mopuc.of(system), Mopuc.of(system.with_field(FloatField()))
    out = []
    for n in graded_indices(system.r, max_total):
        de, df = exact.normality(n), flt.normality(n)
        if de.hadamard_ratio >= excuse_below and de.status != df.status:
            out.append((n, de.status, df.status))
    return out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=50)
    ap.add_argument("--max-total", type=int, default=6)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    total_start = time.perf_counter()
    bad_systems = 0
    for i, system in enumerate(random_corpus(args.count, seed=args.seed)):
        start = time.perf_counter()
        summary = graded_sweep(system, args.max_total)
        mismatches = classification_mismatches(system, args.max_total)
        kinds = ",".join(type(s).__name__.replace("BernsteinSzego1", "bs").replace("TrigDensity", "trig") for s in system.specs)
        counts = summary.status_counts
        print(
            f"{i:3d} r={system.r} [{kinds:14s}] ok={counts.get('ok', 0):5d} "
            f"skipped={counts.get('precondition-failed', 0):5d} failures={len(summary.failures)} "
            f"float-mismatch={len(mismatches)} {time.perf_counter() - start:.2f}s"
        )
        bad_systems += bool(summary.failures or mismatches)
    print(f"\nsystems with problems: {bad_systems}/{args.count}  total {time.perf_counter() - total_start:.1f}s")


if __name__ == "__main__":
    main()
