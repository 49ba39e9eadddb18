"""Run every preset over synthetic random walks and print the counter table.

    python3 scripts/ablation_sweep.py --series 20 --length 2000 --minsup 20
"""

import argparse
import sys

import numpy as np

from opfminer import TimeSeries, PRESETS
from opfminer.cli import run_bench


def random_walks(count: int, length: int, seed: int) -> list[TimeSeries]:
    rng = np.random.default_rng(seed)
    return [TimeSeries(tuple(np.cumsum(rng.normal(size=length)).tolist()), id=f"walk{i}")
            for i in range(count)]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--series", type=int, default=10)
    ap.add_argument("--length", type=int, default=1000)
    ap.add_argument("--minsup", type=float, nargs="+", default=[10.0, 20.0])
    ap.add_argument("--k-coeff", type=float, default=1.0)
    ap.add_argument("--replicate", type=int, nargs="+", default=[1])
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    data = random_walks(args.series, args.length, args.seed)
    rows, mismatches = run_bench(data, list(PRESETS), args.minsup, [args.k_coeff],
                                 args.replicate)
    cols = ("preset", "replicate", "minsup", "frequent", "candidates", "fusions",
            "support_calcs", "wall_time")
    print("  ".join(f"{c:>15}" for c in cols))
    for r in rows:
        cells = [f"{r[c]:15.4f}" if c == "wall_time" else f"{r[c]!s:>15}" for c in cols]
        print("  ".join(cells))
    for m in mismatches:
        print("MISMATCH", m, file=sys.stderr)
    return 4 if mismatches else 0


if __name__ == "__main__":
    sys.exit(main())
