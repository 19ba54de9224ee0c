"""Indicator polynomials, polynomial covers and slice-rank oracles.

The variables of a k-slot function are grouped into k consecutive blocks of
n (block j holds the coordinates of X_j).  A polynomial cover writes

    P(X_1, .., X_k) = sum_j sum_{p in M_j} p(X_j) * F_{j,p}(X without X_j)

and its size ``sum_j |M_j|`` bounds the slice rank of P from above.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Sequence

import numpy as np

from .algebra import (
    DEFAULT_BUDGET,
    FieldSpec,
    MultiPoly,
    all_points,
    field_build,
    matrix_rank,
    multipoly_eval,
    multipoly_mul_reduced,
    multipoly_pow_reduced,
    reduce_exponents,
    value_table,
)
from .counting import as_fraction
from .encoding import PolyMap
from .errors import DimensionMismatch, InvalidInput, NoAdmissibleSlot, SizeBudgetExceeded


@dataclass
class SliceCover:
    """Explicit witness for a slice-rank upper bound.

    ``slots[j]`` maps each monomial p of M_j (an exponent n-tuple) to its
    cofactor F_{j,p}, a polynomial in the (k-1)*n variables of the other slots.
    """

    field: FieldSpec
    k: int
    n: int
    threshold: Fraction
    slots: list = field(default_factory=list)

    @property
    def size(self) -> int:
        return sum(len(s) for s in self.slots)

    def slot_sizes(self) -> list[int]:
        return [len(s) for s in self.slots]

    def monomials(self, j: int) -> list:
        return sorted(self.slots[j])


def _insert_block(rest: tuple, j: int, n: int, block: tuple) -> tuple:
    return rest[: j * n] + tuple(block) + rest[j * n:]


def indicator_degree_bound(phi: PolyMap) -> int:
    return (phi.field.q - 1) * phi.m * phi.degree


def indicator_poly(phi: PolyMap, spec: FieldSpec | None = None,
                   budget: int = DEFAULT_BUDGET) -> MultiPoly:
    """``prod_i (1 - phi_i^(q-1))`` reduced: 1 on the zero set of phi, 0 elsewhere."""
    F = phi.field
    if spec is not None and spec != F:
        raise InvalidInput("field mismatch")
    N = phi.nvars_in
    if F.q**N > budget:
        raise SizeBudgetExceeded(f"indicator on F_{F.q}^{N}", F.q**N, budget)
    one = MultiPoly.one(F, N)
    P = one
    for coord in phi.coords:
        factor = one - multipoly_pow_reduced(coord, F.q - 1, budget)
        P = multipoly_mul_reduced(P, factor, budget=budget)
        if P.is_zero():
            break
    return P


def build_cover(P: MultiPoly, k: int, n: int, threshold) -> SliceCover:
    """Assign each monomial of P to the first slot whose degree is <= threshold."""
    if P.nvars != k * n:
        raise DimensionMismatch(f"P has {P.nvars} variables, expected k*n = {k * n}")
    thr = as_fraction(threshold)
    P = reduce_exponents(P)
    F = P.field
    slots = [dict() for _ in range(k)]
    for mono, c in P.sorted_terms():
        for j in range(k):
            block = mono[j * n:(j + 1) * n]
            if sum(block) <= thr:
                break
        else:
            raise NoAdmissibleSlot(f"monomial {mono} exceeds threshold {thr} in every slot")
        rest = mono[: j * n] + mono[(j + 1) * n:]
        slots[j].setdefault(block, {})[rest] = c
    polys = [{p: MultiPoly(F, (k - 1) * n, t) for p, t in s.items()} for s in slots]
    return SliceCover(F, k, n, thr, polys)


def reassemble(cover: SliceCover) -> MultiPoly:
    """The polynomial ``sum_j sum_p p(X_j) F_{j,p}`` described by a cover."""
    F, k, n = cover.field, cover.k, cover.n
    N = k * n
    total = MultiPoly.zero(F, N)
    for j, slot in enumerate(cover.slots):
        for p, cof in slot.items():
            mono = MultiPoly(F, N, {_insert_block((0,) * ((k - 1) * n), j, n, p): 1})
            spread = MultiPoly(F, N, {_insert_block(m, j, n, (0,) * n): c
                                      for m, c in cof.terms.items()})
            total = total + mono * spread
    return reduce_exponents(total)


def _cover_value(cover: SliceCover, point: Sequence[int]) -> int:
    F, n = cover.field, cover.n
    acc = 0
    for j, slot in enumerate(cover.slots):
        xj = point[j * n:(j + 1) * n]
        rest = tuple(point[: j * n]) + tuple(point[(j + 1) * n:])
        for p, cof in slot.items():
            pv = multipoly_eval(MultiPoly(F, n, {p: 1}), xj).code
            if pv:
                acc = F.add(acc, F.mul(pv, multipoly_eval(cof, rest).code))
    return acc


@dataclass
class CoverVerdict:
    passed: bool
    mode: str
    points_checked: int
    witness: tuple | None = None
    expected: int | None = None
    got: int | None = None

    def to_dict(self) -> dict:
        return {"passed": self.passed, "mode": self.mode,
                "points_checked": self.points_checked,
                "witness": list(self.witness) if self.witness is not None else None,
                "expected": self.expected, "got": self.got}


def verify_cover(P: MultiPoly, cover: SliceCover, spec: FieldSpec | None = None,
                 mode: str = "exhaustive", samples: int = 1000, seed: int = 0,
                 budget: int = DEFAULT_BUDGET) -> CoverVerdict:
    """Check the cover identity pointwise; report the first failing point."""
    F = P.field
    if spec is not None and spec != F:
        raise InvalidInput("field mismatch")
    if cover.field != F or P.nvars != cover.k * cover.n:
        raise DimensionMismatch("cover does not match the polynomial")
    N = P.nvars
    if mode == "exhaustive":
        lhs = value_table(P, budget).ravel()
        rhs = value_table(reassemble(cover), budget).ravel()
        bad = np.flatnonzero(lhs != rhs)
        if bad.size == 0:
            return CoverVerdict(True, mode, lhs.size)
        i = int(bad[0])
        point = tuple(int(x) for x in np.unravel_index(i, (F.q,) * N))
        return CoverVerdict(False, mode, i + 1, point, int(lhs[i]), int(rhs[i]))
    if mode == "sampled":
        rng = random.Random(seed)
        for i in range(samples):
            point = tuple(rng.randrange(F.q) for _ in range(N))
            want = multipoly_eval(P, point).code
            got = _cover_value(cover, point)
            if want != got:
                return CoverVerdict(False, mode, i + 1, point, want, got)
        return CoverVerdict(True, mode, samples)
    raise InvalidInput(f"unknown verification mode {mode!r}")


def diagonal_rank_k2(size: int, spec: FieldSpec | None = None) -> int:
    """Rank of the ``size x size`` identity matrix over F_q, by elimination.

    For two slots the slice rank of ``sum_{f in A} delta_f(X) delta_f(Y)`` is
    the rank of its matrix, which is this identity of order |A|.
    """
    if size < 0:
        raise InvalidInput("size must be >= 0")
    if size == 0:
        return 0
    spec = spec or field_build(2)
    eye = [[1 if i == j else 0 for j in range(size)] for i in range(size)]
    return matrix_rank(eye, spec)


def delta_poly(f: Sequence[int], spec: FieldSpec, budget: int = DEFAULT_BUDGET) -> MultiPoly:
    """``prod_i (1 - (x_i - f_i)^(q-1))``: 1 at the point f, 0 elsewhere."""
    n = len(f)
    out = MultiPoly.one(spec, n)
    for i, fi in enumerate(f):
        shifted = MultiPoly.variable(spec, n, i) - MultiPoly.constant(spec, n, fi)
        factor = MultiPoly.one(spec, n) - multipoly_pow_reduced(shifted, spec.q - 1, budget)
        out = multipoly_mul_reduced(out, factor, budget=budget)
    return out


def diagonal_indicator(A: Sequence[Sequence[int]], k: int, spec: FieldSpec,
                       budget: int = DEFAULT_BUDGET) -> MultiPoly:
    """``sum_{f in A} prod_j delta_f(X_j)`` on ``(F_q^n)^k``."""
    if not A:
        raise InvalidInput("need a nonempty set to fix n")
    n = len(A[0])
    N = k * n
    total = MultiPoly.zero(spec, N)
    for f in A:
        d = delta_poly(f, spec, budget)
        term = MultiPoly.one(spec, N)
        for j in range(k):
            term = multipoly_mul_reduced(term, d.embed(N, j * n), budget=budget)
        total = total + term
    return total


def _as_table(P, k, n, spec, budget) -> np.ndarray:
    size = spec.q ** (k * n)
    if isinstance(P, MultiPoly):
        if P.nvars != k * n:
            raise DimensionMismatch("polynomial has the wrong number of variables")
        return value_table(P, budget).ravel()
    table = np.asarray(P, dtype=np.intp).ravel()
    if table.size != size:
        raise DimensionMismatch(f"function table must have {size} entries")
    return table


def slice_rank_exhaustive(P, k: int, n: int, spec: FieldSpec,
                          budget: int = DEFAULT_BUDGET) -> int:
    """Exact slice rank by enumerating covers of increasing size.

    A size-s cover is a multiset of s terms ``g(X_j) h(X_without_j)`` with g
    and h arbitrary nonzero functions (given by value tables).  Every
    multiset of s-1 terms is enumerated and the residual looked up among
    single terms.  Only tiny instances (q = 2, n = 1, k <= 3) fit a budget.
    """
    q = spec.q
    target = _as_table(P, k, n, spec, budget)
    if not target.any():
        return 0
    slot_size, rest_size = q**n, q ** ((k - 1) * n)
    n_g, n_h = q**slot_size - 1, q**rest_size - 1
    n_terms = k * n_g * n_h
    if n_terms > budget:
        raise SizeBudgetExceeded("single slice terms", n_terms, budget)
    tabs = spec.np_tables
    pts = all_points(spec, k * n)
    weights = q ** np.arange(n - 1, -1, -1)
    funcs_g = np.array(np.unravel_index(np.arange(1, n_g + 1), (q,) * slot_size)).T
    funcs_h = np.array(np.unravel_index(np.arange(1, n_h + 1), (q,) * rest_size)).T
    terms = []
    for j in range(k):
        slot_idx = pts[:, j * n:(j + 1) * n] @ weights
        rest = np.delete(pts, np.s_[j * n:(j + 1) * n], axis=1)
        rest_idx = rest @ (q ** np.arange(rest.shape[1] - 1, -1, -1))
        g_vals = funcs_g[:, slot_idx]  # (n_g, points)
        h_vals = funcs_h[:, rest_idx]  # (n_h, points)
        terms.append(tabs.mul[g_vals[:, None, :], h_vals[None, :, :]].reshape(-1, len(pts)))
    terms = np.concatenate(terms)
    single = {t.tobytes() for t in terms}
    neg = np.array(spec.neg_t, dtype=np.intp)
    spent = 0
    s = 1
    while True:
        # enumerate multisets of s-1 terms; the s-th term must equal the residual
        for combo in combinations_with_replacement(range(n_terms), s - 1):
            spent += 1
            if spent > budget:
                raise SizeBudgetExceeded("slice-rank enumeration", spent, budget)
            acc = np.zeros_like(target)
            for t in combo:
                acc = tabs.add[acc, terms[t]]
            residual = tabs.add[target, neg[acc]]
            if residual.tobytes() in single:
                return s
        s += 1
