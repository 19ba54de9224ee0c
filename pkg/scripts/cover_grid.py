"""Build and verify pigeonhole covers on a small grid; compare size to q^n.

    python scripts/cover_grid.py
"""

import argparse
import itertools
import math
import time
from dataclasses import dataclass
from fractions import Fraction

from slicelab.algebra import UniPoly, field_of_order
from slicelab.counting import exact_monomial_count
from slicelab.encoding import EquationSpec, build_equation_map
from slicelab.errors import SizeBudgetExceeded
from slicelab.slicerank import build_cover, indicator_poly, verify_cover


@dataclass
class GridConfig:
    qs: tuple = (2, 3)
    ns: tuple = (1, 2)
    rs: tuple = (1, 2)
    ks: tuple = (3, 4)
    samples: int = 500


def equation(q, r, k):
    F = field_of_order(q)
    coeffs = [UniPoly(F, (1,))] * (k - 1) + [UniPoly(F, (F.neg(F.from_int(k - 1)),))]
    return EquationSpec(F, r, tuple(coeffs), 0)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=GridConfig.samples)
    cfg = GridConfig(samples=ap.parse_args(argv).samples)
    print("q,n,r,k,terms,cover_size,slot_sizes,size_bound,verified,mode,seconds")
    for q, n, r, k in itertools.product(cfg.qs, cfg.ns, cfg.rs, cfg.ks):
        start = time.perf_counter()
        phi = build_equation_map(equation(q, r, k), n)
        try:
            P = indicator_poly(phi)
        except SizeBudgetExceeded:
            print(f"{q},{n},{r},{k},,,,,budget,,")
            continue
        thr = Fraction((q - 1) * phi.m * phi.degree, k)
        cover = build_cover(P, k, n, thr)
        mode = "exhaustive" if q ** (k * n) <= 4096 else "sampled"
        verdict = verify_cover(P, cover, mode=mode, samples=cfg.samples)
        bound = k * exact_monomial_count(n, math.floor(thr), q)
        sizes = "/".join(map(str, cover.slot_sizes()))
        print(f"{q},{n},{r},{k},{len(P.terms)},{cover.size},{sizes},{bound},"
              f"{verdict.passed},{mode},{time.perf_counter() - start:.2f}")


if __name__ == "__main__":
    main()
