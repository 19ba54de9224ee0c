"""Largest solution-free subsets of small P_{q,n}, exhaustive and greedy.

    python scripts/max_free_table.py --r 2 --k 3
"""

import argparse
from dataclasses import dataclass

from slicelab.algebra import UniPoly, field_of_order
from slicelab.encoding import EquationSpec
from slicelab.search import exhaustive_max_free, greedy_free


@dataclass
class TableConfig:
    r: int = 2
    k: int = 3
    seeds: int = 5


def all_ones_equation(q, r, k):
    """a_1 = .. = a_{k-1} = 1 and a_k = -(k-1), so the coefficients sum to zero."""
    F = field_of_order(q)
    last = F.neg(F.from_int(k - 1))
    coeffs = tuple(UniPoly(F, (1,)) for _ in range(k - 1)) + (UniPoly(F, (last,)),)
    return EquationSpec(F, r, coeffs, 0)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--r", type=int, default=TableConfig.r)
    ap.add_argument("--k", type=int, default=TableConfig.k)
    ap.add_argument("--seeds", type=int, default=TableConfig.seeds)
    cfg = TableConfig(**vars(ap.parse_args(argv)))
    print("q,n,size_of_P,exhaustive,best_greedy,witness")
    for q, n in [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (4, 1), (4, 2)]:
        eq = all_ones_equation(q, cfg.r, cfg.k)
        best, A = exhaustive_max_free(q, n, eq)
        greedy = max(len(greedy_free(q, n, eq, seed=s)) for s in range(cfg.seeds))
        witness = " | ".join(str(f) for f in A.members)
        print(f"{q},{n},{q**n},{best},{greedy},{witness}")


if __name__ == "__main__":
    main()
