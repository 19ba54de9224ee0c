import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest

from slicelab.algebra import MultiPoly, UniPoly, all_points, field_build, field_of_order
from slicelab.counting import exact_monomial_count
from slicelab.encoding import EquationSpec, PolyMap, build_equation_map, map_eval
from slicelab.errors import NoAdmissibleSlot, SizeBudgetExceeded
from slicelab.search import is_solution
from slicelab.slicerank import (
    SliceCover,
    build_cover,
    delta_poly,
    diagonal_indicator,
    diagonal_rank_k2,
    indicator_degree_bound,
    indicator_poly,
    reassemble,
    slice_rank_exhaustive,
    verify_cover,
)

F2, F3 = field_build(2), field_build(3)


def squares_eq():
    return EquationSpec(F3, 2, ((1,), (1,), (1,)), d=0)


def test_indicator_trivial_maps():
    empty = PolyMap(F3, 2, [], 1)
    assert indicator_poly(empty) == MultiPoly.one(F3, 2)
    zero = PolyMap(F3, 2, [MultiPoly.zero(F3, 2)], 1)
    assert indicator_poly(zero) == MultiPoly.one(F3, 2)


def test_indicator_q2_sum():
    phi = PolyMap(F2, 2, [MultiPoly(F2, 2, {(1, 0): 1, (0, 1): 1})], 1)
    P = indicator_poly(phi)
    assert P == MultiPoly(F2, 2, {(0, 0): 1, (1, 0): 1, (0, 1): 1})
    for x, y in itertools.product(range(2), repeat=2):
        assert P(x, y).code == (1 if x == y else 0)


@pytest.mark.parametrize("q,n,r,k,coeffs", [
    (3, 1, 2, 3, ((1,), (1,), (1,))),
    (2, 2, 2, 3, ((1,), (0, 1), (1, 1))),
    (4, 1, 3, 2, ((2,), (2,))),
    (5, 1, 2, 3, ((1,), (3,), (1,))),
])
def test_indicator_matches_zero_set(q, n, r, k, coeffs):
    F = field_of_order(q)
    eq = EquationSpec(F, r, coeffs)
    phi = build_equation_map(eq, n)
    P = indicator_poly(phi)
    assert P.total_degree <= indicator_degree_bound(phi)
    for pt in itertools.product(range(q), repeat=k * n):
        zero = all(v == 0 for v in map_eval(phi, pt))
        assert P(pt).code == (1 if zero else 0)


def test_indicator_budget():
    eq = EquationSpec(F3, 2, ((1,),) * 9)
    phi = build_equation_map(eq, 5)
    with pytest.raises(SizeBudgetExceeded):
        indicator_poly(phi)


def test_cover_examples():
    x = MultiPoly.variable(F2, 2, 0)
    cov = build_cover(x, 2, 1, 1)
    assert cov.slot_sizes() == [1, 0]
    assert cov.slots[0][(1,)] == MultiPoly.one(F2, 1)
    one = MultiPoly.one(F3, 3)
    cov = build_cover(one, 3, 1, 0)
    assert cov.size == 1 and cov.slots[0] == {(0,): MultiPoly.one(F3, 2)}


def test_cover_squares_instance():
    eq = squares_eq()
    phi = build_equation_map(eq, 1)
    P = indicator_poly(phi)
    threshold = Fraction((3 - 1) * phi.m * phi.degree, 3)
    assert threshold == Fraction(4, 3)
    cov = build_cover(P, 3, 1, threshold)
    assert exact_monomial_count(1, 1, 3) == 2
    assert cov.size <= 3 * 2
    verdict = verify_cover(P, cov)
    assert verdict.passed and verdict.points_checked == 27
    for pt in itertools.product(range(3), repeat=3):
        polys = [UniPoly(F3, (v,)) for v in pt]
        assert P(pt).code == int(is_solution(eq, polys))


def test_cover_smallest_slot_rule():
    # x1^2 x2 x3^0: slot degrees (2, 1, 0), threshold 1 -> slot 2 (index 1)
    P = MultiPoly(F3, 3, {(2, 1, 0): 1})
    cov = build_cover(P, 3, 1, 1)
    assert cov.slot_sizes() == [0, 1, 0]
    assert cov.slots[1][(1,)] == MultiPoly(F3, 2, {(2, 0): 1})


def test_no_admissible_slot():
    P = MultiPoly(F3, 2, {(2, 2): 1})
    with pytest.raises(NoAdmissibleSlot):
        build_cover(P, 2, 1, 1)


def test_verify_detects_perturbed_cofactor():
    phi = build_equation_map(squares_eq(), 1)
    P = indicator_poly(phi)
    cov = build_cover(P, 3, 1, Fraction(4, 3))
    j = next(i for i, s in enumerate(cov.slots) if s)
    p = next(iter(cov.slots[j]))
    bad = [dict(s) for s in cov.slots]
    bad[j][p] = bad[j][p] + MultiPoly.one(F3, 2)
    broken = SliceCover(F3, 3, 1, cov.threshold, bad)
    for mode in ("exhaustive", "sampled"):
        verdict = verify_cover(P, broken, mode=mode, samples=200)
        assert not verdict.passed
        w = verdict.witness
        assert P(w).code == verdict.expected != verdict.got
        assert reassemble(broken)(w).code == verdict.got


def test_verify_empty_cover_of_zero():
    P = MultiPoly.zero(F2, 4)
    cov = SliceCover(F2, 2, 2, Fraction(0), [{}, {}])
    assert verify_cover(P, cov).passed
    assert verify_cover(P, cov, mode="sampled", samples=10).passed


def test_verify_sampled_agrees_on_valid_cover():
    eq = EquationSpec(F2, 2, ((1,), (0, 1), (1, 1)))
    phi = build_equation_map(eq, 2)
    P = indicator_poly(phi)
    cov = build_cover(P, 3, 2, Fraction(phi.m * phi.degree, 3))
    assert verify_cover(P, cov, mode="sampled", samples=300, seed=5).passed


def test_diagonal_rank_k2():
    assert diagonal_rank_k2(0) == 0
    assert diagonal_rank_k2(2) == 2
    assert diagonal_rank_k2(5) == 5
    assert diagonal_rank_k2(4, field_of_order(9)) == 4


def test_delta_poly():
    F = field_of_order(4)
    for f in itertools.product(range(4), repeat=2):
        d = delta_poly(f, F)
        for x in itertools.product(range(4), repeat=2):
            assert d(x).code == (1 if x == f else 0)


def test_slice_rank_exhaustive_examples():
    assert slice_rank_exhaustive(MultiPoly.zero(F2, 2), 2, 1, F2) == 0
    assert slice_rank_exhaustive(MultiPoly.variable(F2, 2, 0), 2, 1, F2) == 1
    # x1 x2 is a single slice as well; x1 x2 + (1+x1)(1+x2) is not
    assert slice_rank_exhaustive(MultiPoly(F2, 2, {(1, 1): 1}), 2, 1, F2) == 1
    A = [(0,), (1,)]
    for k in (2, 3):
        D = diagonal_indicator(A, k, F2)
        assert slice_rank_exhaustive(D, k, 1, F2) == 2 == diagonal_rank_k2(2)
    single = diagonal_indicator([(1,)], 3, F2)
    assert slice_rank_exhaustive(single, 3, 1, F2) == 1


def test_slice_rank_k2_matches_matrix_rank():
    # for k = 2, n = 1, q = 2 slice rank is the rank of the 2x2 value matrix
    from slicelab.algebra import matrix_rank
    for table in itertools.product(range(2), repeat=4):
        expected = matrix_rank([table[:2], table[2:]], F2)
        assert slice_rank_exhaustive(table, 2, 1, F2) == expected


def test_slice_rank_budget():
    with pytest.raises(SizeBudgetExceeded):
        slice_rank_exhaustive(MultiPoly.variable(F2, 3, 0), 3, 1, F2, budget=10)


def test_cover_size_bound_and_rank_chain():
    from slicelab.search import exhaustive_max_free
    eq = squares_eq()
    size, A = exhaustive_max_free(3, 1, eq)
    phi = build_equation_map(eq, 1)
    P = indicator_poly(phi)
    cov = build_cover(P, 3, 1, Fraction(4, 3))
    assert size <= cov.size <= 3 * exact_monomial_count(1, 1, 3)
