"""Coefficient-vector encoding of the diagonal equation sum a_i f_i^r = 0.

A polynomial of degree < n over F_q is identified with its coefficient
vector in F_q^n.  Under that identification ``f -> f^r`` and ``f -> a*f``
are polynomial maps; summing them slot by slot gives a vector-valued map
``(F_q^n)^k -> F_q^m`` with ``m = (n-1)r + d + 1`` whose zero set is exactly
the solution set of the equation.

Input variable ``(j, i)`` (slot j, coefficient i; both 0-based) is flat
index ``j*n + i``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .algebra import (
    FieldSpec,
    MultiPoly,
    UniPoly,
    multipoly_eval,
    reduce_exponents,
)
from .errors import DegreeTooLarge, DimensionMismatch, InvalidEquation, InvalidInput


@dataclass(frozen=True)
class EquationSpec:
    """``sum_i coeffs[i] * f_i**r = 0`` with coefficients summing to zero."""

    field: FieldSpec
    r: int
    coeffs: tuple
    d: int | None = None

    def __post_init__(self):
        coeffs = tuple(a if isinstance(a, UniPoly) else UniPoly(self.field, a) for a in self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        if any(a.field != self.field for a in coeffs):
            raise InvalidEquation("coefficients over a different field")
        if self.r < 1:
            raise InvalidEquation("r must be >= 1")
        if len(coeffs) < 2:
            raise InvalidEquation("need k >= 2 coefficients")
        maxdeg = max((a.degree for a in coeffs if not a.is_zero()), default=0)
        if self.d is None:
            object.__setattr__(self, "d", int(maxdeg))
        elif self.d < 0 or maxdeg > self.d:
            raise InvalidEquation(f"coefficient degree {maxdeg} exceeds d={self.d}")
        total = UniPoly.zero(self.field)
        for a in coeffs:
            total = total + a
        if not total.is_zero():
            raise InvalidEquation(f"coefficients must sum to 0, got {total}")

    @property
    def k(self) -> int:
        return len(self.coeffs)

    def m(self, n: int) -> int:
        return (n - 1) * self.r + self.d + 1

    def zero_coefficient_warnings(self) -> list[str]:
        return [f"coefficient a_{i + 1} is zero; variable f_{i + 1} is vacuous"
                for i, a in enumerate(self.coeffs) if a.is_zero()]

    def describe(self) -> str:
        parts = [f"({a})*f{i + 1}^{self.r}" for i, a in enumerate(self.coeffs)]
        return " + ".join(parts) + f" = 0 over {self.field}"


@dataclass(frozen=True)
class PolyMap:
    """Vector-valued polynomial map ``F_q^nvars_in -> F_q^m``.

    ``degree`` is the declared bound ell; every coordinate has total degree
    at most ``degree`` (``actual_degree`` gives the realized maximum, which
    may drop after exponent folding).
    """

    field: FieldSpec
    nvars_in: int
    coords: tuple
    degree: int

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.coords))
        for c in self.coords:
            if c.nvars != self.nvars_in:
                raise DimensionMismatch(f"coordinate has {c.nvars} variables, expected {self.nvars_in}")
        if self.actual_degree > self.degree:
            raise InvalidInput(f"coordinate degree {self.actual_degree} exceeds declared {self.degree}")

    @property
    def m(self) -> int:
        return len(self.coords)

    @property
    def actual_degree(self) -> int:
        return max((c.total_degree for c in self.coords if not c.is_zero()), default=0)

    def __call__(self, point):
        return map_eval(self, point)


def vectorize(f: UniPoly, n: int) -> tuple:
    """Coefficient codes of f padded to length n."""
    if f.degree >= n:
        raise DegreeTooLarge(f"deg f = {f.degree} is not < n = {n}")
    return tuple(f.coefficient(i) for i in range(n))


def devectorize(vec: Sequence, field: FieldSpec) -> UniPoly:
    return UniPoly(field, tuple(field.code(x) for x in vec))


def _exponent_vectors(n, r):
    # all (alpha_0..alpha_{n-1}) >= 0 summing to r
    if n == 1:
        yield (r,)
        return
    for first in range(r + 1):
        for rest in _exponent_vectors(n - 1, r - first):
            yield (first,) + rest


def power_map(n: int, r: int, spec: FieldSpec) -> PolyMap:
    """The map ``vec(f) -> vec(f^r)``, unreduced, of degree exactly r.

    Coordinate s collects the monomials prod f_i^alpha_i with
    sum alpha_i = r and sum i*alpha_i = s, weighted by the multinomial
    coefficient reduced mod p.
    """
    if n < 1 or r < 1:
        raise InvalidInput("power_map needs n >= 1 and r >= 1")
    m = (n - 1) * r + 1
    coords = [dict() for _ in range(m)]
    for alpha in _exponent_vectors(n, r):
        mult = math.factorial(r)
        for a in alpha:
            mult //= math.factorial(a)
        c = spec.from_int(mult)
        if c:
            s = sum(i * a for i, a in enumerate(alpha))
            coords[s][alpha] = c
    return PolyMap(spec, n, [MultiPoly(spec, n, t) for t in coords], r)


def scalar_mul_map(a: UniPoly, n: int, d: int, spec: FieldSpec) -> PolyMap:
    """The linear map ``vec(f) -> vec(a*f)`` from F_q^n to F_q^(n+d)."""
    if a.degree > d:
        raise DegreeTooLarge(f"deg a = {a.degree} exceeds d = {d}")
    coords = []
    for s in range(n + d):
        terms = {}
        for i in range(max(0, s - d), min(n - 1, s) + 1):
            c = a.coefficient(s - i)
            if c:
                terms[tuple(1 if v == i else 0 for v in range(n))] = c
        coords.append(MultiPoly(spec, n, terms))
    return PolyMap(spec, n, coords, 1)


def compose_linear(outer: PolyMap, inner: PolyMap) -> PolyMap:
    """``outer(inner(x))`` for a linear ``outer`` (degree <= 1, no constants needed)."""
    if outer.nvars_in != inner.m:
        raise DimensionMismatch("composition dimensions disagree")
    F = outer.field
    coords = []
    for coord in outer.coords:
        acc = MultiPoly.zero(F, inner.nvars_in)
        for mono, c in coord.terms.items():
            if sum(mono) == 0:
                acc = acc + MultiPoly.constant(F, inner.nvars_in, c)
            elif sum(mono) == 1:
                acc = acc + inner.coords[mono.index(1)].scale(c)
            else:
                raise InvalidInput("outer map is not linear")
        coords.append(acc)
    return PolyMap(F, inner.nvars_in, coords, inner.degree * max(outer.degree, 1))


def build_equation_map(eq: EquationSpec, n: int, spec: FieldSpec | None = None) -> PolyMap:
    """The map ``(vec f_1, ..., vec f_k) -> vec(sum a_i f_i^r)`` with reduced exponents."""
    spec = spec or eq.field
    if spec != eq.field:
        raise InvalidInput("field mismatch")
    if n < 1:
        raise InvalidInput("n must be >= 1")
    k, r, d = eq.k, eq.r, eq.d
    Q = power_map(n, r, spec)
    m = eq.m(n)
    total = [MultiPoly.zero(spec, k * n) for _ in range(m)]
    for j, a in enumerate(eq.coeffs):
        slot = compose_linear(scalar_mul_map(a, Q.m, d, spec), Q)
        for s, c in enumerate(slot.coords):
            total[s] = total[s] + c.embed(k * n, j * n)
    return PolyMap(spec, k * n, [reduce_exponents(c) for c in total], r)


def map_eval(phi: PolyMap, point: Sequence) -> tuple:
    """Coordinatewise evaluation; returns a tuple of element codes."""
    if len(point) != phi.nvars_in:
        raise DimensionMismatch(f"point has {len(point)} coordinates, map takes {phi.nvars_in}")
    return tuple(multipoly_eval(c, point).code for c in phi.coords)


def join_vectors(polys: Sequence[UniPoly], n: int) -> tuple:
    """Concatenated coefficient vectors of a tuple of polynomials."""
    out = ()
    for f in polys:
        out += vectorize(f, n)
    return out
