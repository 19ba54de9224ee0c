"""Acceptance criteria, one test (group) per criterion.

Run ``pytest tests/test_acceptance.py``; the terminal summary prints one
PASS/FAIL line per criterion.
"""

import itertools
import math
import random
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from slicelab.algebra import MultiPoly, UniPoly, all_points, field_build, field_of_order, reduce_exponents
from slicelab.counting import (
    c_exponent,
    epsilon_of_r,
    exact_monomial_count,
    hoeffding_bound,
    hoeffding_degree_cap,
    log_hoeffding_bound,
    proposition_condition,
)
from slicelab.encoding import EquationSpec, build_equation_map, map_eval, vectorize
from slicelab.errors import NoAdmissibleSlot
from slicelab.search import exhaustive_max_free, is_solution, is_trivial
from slicelab.slicerank import (
    build_cover,
    diagonal_indicator,
    diagonal_rank_k2,
    indicator_poly,
    slice_rank_exhaustive,
    verify_cover,
)

GRID = list(itertools.product([2, 3, 4], [1, 2, 3], [1, 2, 3], [2, 3], [0, 1]))  # q, n, r, k, d
EXHAUSTIVE_LIMIT = 4096
SAMPLES = 1000


def grid_equation(q, n, r, k, d):
    """Random coefficients of degree <= d summing to zero, seeded by the cell."""
    F = field_of_order(q)
    rng = random.Random(f"{q}-{n}-{r}-{k}-{d}")
    coeffs = [UniPoly(F, [rng.randrange(q) for _ in range(d + 1)]) for _ in range(k - 1)]
    last = UniPoly.zero(F)
    for a in coeffs:
        last = last - a
    return EquationSpec(F, r, tuple(coeffs) + (last,), d), rng


def direct_vector(eq, polys, m):
    total = UniPoly.zero(eq.field)
    for a, f in zip(eq.coeffs, polys):
        power = UniPoly.one(eq.field)
        for _ in range(eq.r):
            power = power * f
        total = total + a * power
    return vectorize(total, m)


@pytest.mark.criterion(1, "encoding exactness over the parameter grid")
def test_criterion_1_encoding_exactness():
    start = time.perf_counter()
    checked = mismatches = 0
    for q, n, r, k, d in GRID:
        eq, rng = grid_equation(q, n, r, k, d)
        F = eq.field
        phi = build_equation_map(eq, n)
        assert phi.m == (n - 1) * r + d + 1 and phi.degree == r
        if q ** (k * n) <= EXHAUSTIVE_LIMIT:
            points = itertools.product(range(q), repeat=k * n)
        else:
            points = (tuple(rng.randrange(q) for _ in range(k * n)) for _ in range(SAMPLES))
        for pt in points:
            polys = [UniPoly(F, pt[j * n:(j + 1) * n]) for j in range(k)]
            checked += 1
            if map_eval(phi, pt) != direct_vector(eq, polys, phi.m):
                mismatches += 1
    elapsed = time.perf_counter() - start
    print(f"criterion 1: {checked} evaluations, {mismatches} mismatches, {elapsed:.1f}s")
    assert mismatches == 0
    assert elapsed < 60


@pytest.mark.criterion(2, "indicator polynomial equals the solution indicator (q=3, x^2+y^2+z^2)")
def test_criterion_2_indicator():
    F3 = field_build(3)
    eq = EquationSpec(F3, 2, ((1,), (1,), (1,)), d=0)
    P = indicator_poly(build_equation_map(eq, 1))
    ones, constants, nontrivial, mismatches = 0, 0, 0, 0
    for pt in itertools.product(range(3), repeat=3):
        polys = tuple(UniPoly(F3, (v,)) for v in pt)
        solves = is_solution(eq, polys)
        value = P(pt).code
        mismatches += value != int(solves)
        if value == 1:
            ones += 1
            constants += is_trivial(polys)
            nontrivial += not is_trivial(polys)
    assert mismatches == 0
    assert ones == 9 and constants == 3 and nontrivial == 6
    assert P((1, 1, 2)).code == 1


@pytest.mark.criterion(3, "pigeonhole cover verifies exhaustively within the size bound")
def test_criterion_3_cover_soundness():
    cells = failures = 0
    for q, n, r, k, d in GRID:
        if q ** (k * n) > EXHAUSTIVE_LIMIT:
            continue
        eq, _ = grid_equation(q, n, r, k, d)
        phi = build_equation_map(eq, n)
        P = indicator_poly(phi)
        threshold = Fraction((q - 1) * phi.m * phi.degree, k)
        try:
            cover = build_cover(P, k, n, threshold)
        except NoAdmissibleSlot:
            failures += 1
            continue
        verdict = verify_cover(P, cover, mode="exhaustive")
        assert verdict.passed, (q, n, r, k, d, verdict)
        assert verdict.points_checked == q ** (k * n)
        assert cover.size <= k * exact_monomial_count(n, math.floor(threshold), q), (q, n, r, k, d)
        cells += 1
    print(f"criterion 3: {cells} cells verified")
    assert failures == 0
    assert cells > 0


@pytest.mark.criterion(4, "rank chain |A| <= cover size on q=3, x^2+y^2+z^2")
def test_criterion_4_rank_chain():
    F3 = field_build(3)
    eq = EquationSpec(F3, 2, ((1,), (1,), (1,)), d=0)
    size, A = exhaustive_max_free(3, 1, eq)
    assert size == 2
    assert A.members == (UniPoly(F3, (0,)), UniPoly(F3, (1,)))
    phi = build_equation_map(eq, 1)
    P = indicator_poly(phi)
    cover = build_cover(P, 3, 1, Fraction(2 * phi.m * phi.degree, 3))
    assert verify_cover(P, cover).passed
    assert cover.size >= size


@pytest.mark.criterion(5, "exhaustive slice rank of a 2-element diagonal is 2")
def test_criterion_5_diagonal_lower_bound():
    F2 = field_build(2)
    start = time.perf_counter()
    for k in (2, 3):
        D = diagonal_indicator([(0,), (1,)], k, F2)
        assert slice_rank_exhaustive(D, k, 1, F2) == 2
    assert diagonal_rank_k2(2) == 2
    assert time.perf_counter() - start < 60


@pytest.mark.criterion(6, "monomial counts match enumeration and binomial sums")
def test_criterion_6_counting_oracle():
    mismatches = 0
    for q in range(2, 5):
        for n in range(0, 5):
            hist = {}
            for e in itertools.product(range(q), repeat=n):
                hist[sum(e)] = hist.get(sum(e), 0) + 1
            running = 0
            for d in range(0, n * (q - 1) + 1):
                running += hist.get(d, 0)
                mismatches += exact_monomial_count(n, d, q) != running
    for n in range(0, 21):
        for d in range(0, n + 1):
            mismatches += exact_monomial_count(n, d, 2) != sum(math.comb(n, i) for i in range(d + 1))
    assert mismatches == 0


@pytest.mark.criterion(7, "concentration inequality and the log-base identity")
def test_criterion_7_hoeffding():
    epsilons = [Fraction(i, 100) for i in range(5, 50, 5)]
    violations = 0
    for q in (2, 3, 4, 5, 7):
        for eps in epsilons:
            for n in range(1, 31):
                count = exact_monomial_count(n, hoeffding_degree_cap(n, eps, q), q)
                violations += not math.log(count) <= log_hoeffding_bound(n, eps, q)
                identity = q ** (n * c_exponent(eps, q))
                assert abs(identity - hoeffding_bound(n, eps, q)) <= 1e-9 * hoeffding_bound(n, eps, q)
    assert violations == 0


@pytest.mark.criterion(8, "threshold arithmetic at q=3, r=2, d=0, k=9, n=32")
def test_criterion_8_thresholds():
    eps = epsilon_of_r(2)
    assert eps == Fraction(1, 36) and isinstance(eps, Fraction)
    q, r, d, k, n = 3, 2, 0, 9, 32
    m = (n - 1) * r + d + 1
    assert m == 63
    assert Fraction(m * r, k) == 14 and (Fraction(1, 2) - eps) * n == Fraction(136, 9)
    assert proposition_condition(m, r, k, n, eps) is True


def _eval_by_repeated_products(P, points):
    F = P.field
    mul, add = np.array(F.mul_t), np.array(F.add_t)
    acc = np.zeros(len(points), dtype=np.intp)
    for mono, c in P.terms.items():
        v = np.full(len(points), c, dtype=np.intp)
        for i, e in enumerate(mono):
            for _ in range(e):
                v = mul[v, points[:, i]]
        acc = add[acc, v]
    return acc


@pytest.mark.criterion(9, "exponent reduction preserves functions (500 random polynomials)")
def test_criterion_9_reduction_soundness():
    rng = random.Random(9)
    mismatches = 0
    for _ in range(500):
        q = rng.choice([2, 3, 4, 5, 7, 8, 9, 16])
        nvars = rng.randint(1, int(12 // math.log2(q)))
        F = field_of_order(q)
        terms = [(tuple(rng.randint(0, 3 * q) for _ in range(nvars)), rng.randrange(q))
                 for _ in range(rng.randint(1, 8))]
        P = MultiPoly(F, nvars, terms)
        R = reduce_exponents(P)
        assert R.is_zero() or R.max_var_degree <= q - 1
        pts = all_points(F, nvars)
        mismatches += int(np.count_nonzero(_eval_by_repeated_products(P, pts)
                                           != _eval_by_repeated_products(R, pts)))
    assert mismatches == 0


CLI_RUNS = [
    ["bound", "--q", "2", "--r", "2", "--k", "9", "--d", "0", "--n", "100", "--format", "json"],
    ["bound", "--q", "3", "--r", "1", "--k", "3", "--d", "0", "--n", "1:20", "--format", "csv"],
    ["count", "--q", "3", "--n", "1:12", "--epsilon", "0.1", "--format", "csv"],
    ["count", "--q", "2", "--n", "10", "--d", "2"],
    ["cover", "--eq", "{eq}", "--n", "1", "--format", "json"],
    ["cover", "--eq", "{eq}", "--n", "1", "--mode", "sampled", "--samples", "50", "--format", "json"],
    ["verify", "--set", "{set}", "--eq", "{eq}", "--format", "json"],
    ["verify", "--set", "{bad}", "--eq", "{eq}"],
    ["search", "--eq", "{eq}", "--n", "1", "--mode", "exhaustive", "--format", "json"],
    ["search", "--eq", "{eq4}", "--n", "2", "--mode", "greedy", "--seed", "7", "--format", "json"],
]


@pytest.mark.criterion(10, "CLI output is byte-identical across runs and thread counts")
@pytest.mark.parametrize("argv", CLI_RUNS, ids=lambda a: " ".join(a[:2]))
def test_criterion_10_determinism(argv, tmp_path):
    paths = {
        "eq": tmp_path / "eq.txt",
        "eq4": tmp_path / "eq4.txt",
        "set": tmp_path / "A.txt",
        "bad": tmp_path / "B.txt",
    }
    paths["eq"].write_text("q: 3\nr: 2\nk: 3\nd: 0\na1: 1\na2: 1\na3: 1\n")
    paths["eq4"].write_text("q: 2\nr: 1\nk: 4\nd: 1\na1: 1\na2: 0 1\na3: 1 1\na4: 0\n")
    paths["set"].write_text("q=3 n=1\n0\n1\n")
    paths["bad"].write_text("q=3 n=1\n1\n2\n")
    args = [a.format(**paths) for a in argv]
    outputs = []
    for threads in ("1", "1", "4"):
        proc = subprocess.run([sys.executable, "-m", "slicelab.cli", *args, "--threads", threads],
                              capture_output=True, check=True)
        outputs.append(proc.stdout)
    assert outputs[0] and outputs[0] == outputs[1] == outputs[2]
