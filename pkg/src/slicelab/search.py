"""Brute-force ground truth for solutions of sum a_i f_i^r = 0.

Everything here evaluates the equation with plain univariate arithmetic and
never touches the vector encoding, so it can serve as an oracle for it.
Polynomials of degree < n are enumerated lexicographically on their
ascending coefficient vectors (element codes compared as integers).
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Sequence

from .algebra import DEFAULT_BUDGET, FieldSpec, UniPoly, unipoly_pow
from .encoding import EquationSpec
from .errors import ArityMismatch, InvalidInput, SizeBudgetExceeded


@dataclass(frozen=True)
class PolySet:
    """A deduplicated set of polynomials of degree < n, in enumeration order."""

    field: FieldSpec
    n: int
    members: tuple = ()

    def __post_init__(self):
        seen, out = set(), []
        for f in self.members:
            if not isinstance(f, UniPoly):
                f = UniPoly(self.field, f)
            if f.field != self.field:
                raise InvalidInput("member over a different field")
            if f.degree >= self.n:
                raise InvalidInput(f"member {f} has degree >= n = {self.n}")
            if f.coeffs not in seen:
                seen.add(f.coeffs)
                out.append(f)
        out.sort(key=lambda f: _lex_key(f, self.n))
        object.__setattr__(self, "members", tuple(out))

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


@dataclass
class SolutionReport:
    status: str  # "free" or "witness"
    witness: tuple | None = None
    tuples_examined: int = 0
    warnings: list = field(default_factory=list)

    @property
    def free(self) -> bool:
        return self.status == "free"


def _lex_key(f: UniPoly, n: int):
    return tuple(f.coefficient(i) for i in range(n))


def enumerate_polys(spec: FieldSpec, n: int) -> list[UniPoly]:
    """All of P_{q,n} in lexicographic order of coefficient vectors."""
    return [UniPoly(spec, c) for c in product(range(spec.q), repeat=n)]


def is_trivial(tup: Sequence) -> bool:
    return all(f == tup[0] for f in tup[1:])


def equation_value(eq: EquationSpec, tup: Sequence[UniPoly]) -> UniPoly:
    if len(tup) != eq.k:
        raise ArityMismatch(f"expected {eq.k} polynomials, got {len(tup)}")
    total = UniPoly.zero(eq.field)
    for a, f in zip(eq.coeffs, tup):
        if not f.is_zero():
            total = total + a * unipoly_pow(f, eq.r)
    return total


def is_solution(eq: EquationSpec, tup: Sequence[UniPoly], spec: FieldSpec | None = None) -> bool:
    if spec is not None and spec != eq.field:
        raise InvalidInput("field mismatch")
    return equation_value(eq, tup).is_zero()


class _Terms:
    """Cached a_i * f^r so tuple sums are k additions."""

    def __init__(self, eq, members):
        self.eq = eq
        self.members = list(members)
        self.table = []
        for a in eq.coeffs:
            row = []
            for f in self.members:
                row.append(a * unipoly_pow(f, eq.r) if not f.is_zero() else UniPoly.zero(eq.field))
            self.table.append(row)

    def is_zero_at(self, idx) -> bool:
        total = self.table[0][idx[0]]
        for i in range(1, len(idx)):
            total = total + self.table[i][idx[i]]
        return total.is_zero()


def _scan(terms: _Terms, firsts, size, k):
    """First non-trivial solution over tuples whose first index is in ``firsts``."""
    examined = 0
    for i0 in firsts:
        for rest in product(range(size), repeat=k - 1):
            idx = (i0,) + rest
            examined += 1
            if all(x == i0 for x in rest):
                continue
            if terms.is_zero_at(idx):
                return idx, examined
    return None, examined


def _check_budget(what, size, budget):
    if size > budget:
        raise SizeBudgetExceeded(what, size, budget)


def verify_solution_free(A: PolySet, eq: EquationSpec, spec: FieldSpec | None = None,
                         budget: int = DEFAULT_BUDGET, threads: int = 1) -> SolutionReport:
    """Scan ``A^k`` lexicographically for a non-trivial solution.

    With ``threads > 1`` the scan is split by first coordinate; the reported
    witness and count are those of a sequential scan regardless.
    """
    if spec is not None and spec != eq.field:
        raise InvalidInput("field mismatch")
    if A.field != eq.field:
        raise InvalidInput("set and equation over different fields")
    k, size = eq.k, len(A)
    _check_budget("tuple enumeration", size**k, budget)
    warn = eq.zero_coefficient_warnings()
    if size == 0:
        return SolutionReport("free", None, 0, warn)
    terms = _Terms(eq, A.members)
    per_first = size ** (k - 1)
    if threads <= 1 or size == 1:
        idx, examined = _scan(terms, range(size), size, k)
    else:
        chunks = [range(i, min(i + -(-size // threads), size))
                  for i in range(0, size, -(-size // threads))]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda c: _scan(terms, c, size, k), chunks))
        idx, examined = None, size**k
        for chunk, (found, count) in zip(chunks, results):
            if found is not None:
                idx, examined = found, chunk.start * per_first + count
                break
    if idx is None:
        return SolutionReport("free", None, examined, warn)
    return SolutionReport("witness", tuple(A.members[i] for i in idx), examined, warn)


def _forbidden_supports(eq: EquationSpec, members, budget, threads):
    """Minimal bitmasks of supports of non-trivial solutions over ``members``."""
    k, size = eq.k, len(members)
    _check_budget("tuple enumeration", size**k, budget)
    terms = _Terms(eq, members)

    def collect(firsts):
        found = set()
        for i0 in firsts:
            for rest in product(range(size), repeat=k - 1):
                idx = (i0,) + rest
                if all(x == i0 for x in rest):
                    continue
                if terms.is_zero_at(idx):
                    mask = 0
                    for i in idx:
                        mask |= 1 << i
                    found.add(mask)
        return found

    if threads <= 1:
        masks = collect(range(size))
    else:
        step = -(-size // threads)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = pool.map(collect, [range(i, min(i + step, size)) for i in range(0, size, step)])
        masks = set().union(*parts)
    minimal = []
    for m in sorted(masks, key=lambda x: (bin(x).count("1"), x)):
        if not any(s & m == s for s in minimal):
            minimal.append(m)
    return minimal


def exhaustive_max_free(q: int, n: int, eq: EquationSpec, spec: FieldSpec | None = None,
                        budget: int = DEFAULT_BUDGET, threads: int = 1) -> tuple[int, PolySet]:
    """Largest solution-free subset of P_{q,n}, lexicographically least witness."""
    spec = spec or eq.field
    if spec != eq.field or spec.q != q:
        raise InvalidInput("field mismatch")
    if q**n > 16:
        raise SizeBudgetExceeded("subset enumeration over q^n elements", q**n, 16)
    members = enumerate_polys(spec, n)
    forbidden = _forbidden_supports(eq, members, budget, threads)
    total = len(members)
    for size in range(total, 0, -1):
        for combo in combinations(range(total), size):
            mask = 0
            for i in combo:
                mask |= 1 << i
            if not any(f & mask == f for f in forbidden):
                return size, PolySet(spec, n, tuple(members[i] for i in combo))
    return 0, PolySet(spec, n, ())


def greedy_free(q: int, n: int, eq: EquationSpec, spec: FieldSpec | None = None,
                seed: int = 0, budget: int = DEFAULT_BUDGET) -> PolySet:
    """Solution-free set grown in a seeded random order of P_{q,n}."""
    spec = spec or eq.field
    if spec != eq.field or spec.q != q:
        raise InvalidInput("field mismatch")
    _check_budget("P_{q,n} size", q**n, budget)
    order = enumerate_polys(spec, n)
    random.Random(seed).shuffle(order)
    k = eq.k
    chosen: list[UniPoly] = []
    spent = 0
    for cand in order:
        pool = chosen + [cand]
        terms = _Terms(eq, pool)
        last = len(pool) - 1
        ok = True
        # only tuples that use the candidate; the rest were checked before
        for idx in product(range(len(pool)), repeat=k):
            if last not in idx:
                continue
            spent += 1
            if spent > budget:
                raise SizeBudgetExceeded("greedy tuple checks", spent, budget)
            if len(set(idx)) > 1 and terms.is_zero_at(idx):
                ok = False
                break
        if ok:
            chosen.append(cand)
    return PolySet(spec, n, tuple(chosen))
