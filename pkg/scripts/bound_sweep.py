"""Sweep the cardinality bound over n and report where it beats the trivial q^n.

    python scripts/bound_sweep.py --q 3 --r 2 --k 9 --d 0 --n-max 400
"""

import argparse
import csv
import sys
from dataclasses import dataclass

from slicelab.counting import theorem_bound


@dataclass
class SweepConfig:
    q: int = 3
    r: int = 2
    k: int = 9
    d: int = 0
    n_max: int = 400
    step: int = 1


def sweep(cfg: SweepConfig):
    rows = []
    for n in range(1, cfg.n_max + 1, cfg.step):
        rep = theorem_bound(cfg.q, cfg.r, cfg.k, cfg.d, n)
        rows.append({
            "n": n,
            "logq_bound": f"{rep.logq_bound:.6f}",
            "savings": f"{n - rep.logq_bound:.6f}",
            "nontrivial": rep.applicable and rep.logq_bound < n,
            "proposition": rep.conditions["proposition"],
        })
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in vars(SweepConfig()).items():
        ap.add_argument("--" + name.replace("_", "-"), type=int, default=default)
    cfg = SweepConfig(**vars(ap.parse_args(argv)))
    rows = sweep(cfg)
    writer = csv.DictWriter(sys.stdout, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    first = next((r["n"] for r in rows if r["nontrivial"]), None)
    print(f"# first swept n with logq bound < n: {first}", file=sys.stderr)
    rep = theorem_bound(cfg.q, cfg.r, cfg.k, cfg.d, 1)
    if rep.c_exponent < 1:
        fixed = rep.logq_bound - rep.c_exponent
        print(f"# crossover at n > {fixed / (1 - rep.c_exponent):.1f} (c = {rep.c_exponent:.6f})",
              file=sys.stderr)


if __name__ == "__main__":
    main()
