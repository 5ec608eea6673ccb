"""Print the normality pattern of a two-measure system as a character grid.

'#' normal, '.' singular, '?' indeterminate (float backend only).
Rows are n_1, columns n_2.

    python3 scripts/normality_map.py configs/reference.json --size 8
"""
import argparse
from pathlib import Path

from mopuc import FloatField, Mopuc, parse_system

GLYPH = {"normal": "#", "singular": ".", "indeterminate": "?"}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("system")
    ap.add_argument("--size", type=int, default=8)
    ap.add_argument("--backend", choices=["exact", "float"], default="exact")
    args = ap.parse_args()

    system = parse_system(Path(args.system).read_text(), FloatField() if args.backend == "float" else None)
    if system.r != 2:
        raise SystemExit("the grid view needs exactly two measures")
    m = Mopuc.of(system)
    print("     " + "".join(f"{j:3d}" for j in range(args.size + 1)))
    for i in range(args.size + 1):
        row = "".join(f"{GLYPH[m.normality((i, j)).status]:>3s}" for j in range(args.size + 1))
        print(f"{i:3d}  {row}")


if __name__ == "__main__":
    main()
