"""Finite fields F_q and polynomial arithmetic over them.

Field elements are carried internally as integer *codes* in ``[0, q)``: the
element with F_p-coordinates ``(c_0, ..., c_{e-1})`` in the basis
``1, t, ..., t^{e-1}`` has code ``sum(c_i * p**i)``.  Prime-field elements
therefore have their natural integer codes.  :class:`FieldElement` wraps a
code for interactive use; the heavy paths (``MultiPoly``) work on raw codes
with precomputed tables.

Multivariate polynomials are sparse term maps.  Since they are mostly used
as functions on ``F_q^N``, :func:`reduce_exponents` folds every exponent into
``[0, q-1]`` (using ``x^q = x``), which gives the unique representative of a
function.  For dense instances the product in that quotient ring is computed
by evaluating both factors on the whole grid, multiplying pointwise and
interpolating back.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import product
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidInput,
    NonPrimeP,
    ReducibleModulus,
    SizeBudgetExceeded,
    UnsupportedSize,
)

NEG_INF = float("-inf")

#: Default cap on term counts, grid sizes and tuple enumerations.
DEFAULT_BUDGET = 2**20
BUDGET_ENV = "SLICELAB_BUDGET"

#: Largest field order we build tables for.
MAX_FIELD_ORDER = 256

# Monic irreducible moduli (ascending coefficients) for the small extension fields.
CONWAY_MODULI = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (5, 2): (2, 4, 1),
    (7, 2): (3, 6, 1),
}

Monomial = tuple  # exponent vector, one entry per variable


def budget_from_env(default=DEFAULT_BUDGET):
    raw = os.environ.get(BUDGET_ENV)
    if not raw:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise InvalidInput(f"{BUDGET_ENV} must be an integer, got {raw!r}") from None
    if value < 1:
        raise InvalidInput(f"{BUDGET_ENV} must be positive")
    return value


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Split ``q = p**e``; raise if q is not a prime power."""
    if q < 2:
        raise NonPrimeP("q must be a prime power >= 2")
    p = next(f for f in range(2, q + 1) if q % f == 0)
    e, rest = 0, q
    while rest % p == 0:
        rest //= p
        e += 1
    if rest != 1:
        raise NonPrimeP(f"q={q} is not a prime power")
    return p, e


# -- polynomials over F_p as coefficient lists, used only to set up F_q ------

def _fp_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mod(a, b, p):
    a = _fp_trim(a)
    b = _fp_trim(b)
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) >= len(b):
        c = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        a = _fp_trim(a)
    return a


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Exhaustive test: no monic factor of degree 1..deg/2 divides ``modulus``."""
    e = len(modulus) - 1
    for deg in range(1, e // 2 + 1):
        for low in product(range(p), repeat=deg):
            if not _fp_mod(modulus, list(low) + [1], p):
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The field F_q, q = p**e, with arithmetic tables on element codes."""

    p: int
    e: int
    modulus: tuple = (0, 1)

    add_t: list = dc_field(init=False, repr=False, compare=False)
    mul_t: list = dc_field(init=False, repr=False, compare=False)
    neg_t: list = dc_field(init=False, repr=False, compare=False)
    inv_t: list = dc_field(init=False, repr=False, compare=False)
    log_t: list = dc_field(init=False, repr=False, compare=False)
    exp_t: list = dc_field(init=False, repr=False, compare=False)

    def __post_init__(self):
        p, e, q = self.p, self.e, self.p**self.e
        add = [[self._rep_add(a, b) for b in range(q)] for a in range(q)]
        neg = [next(b for b in range(q) if add[a][b] == 0) for a in range(q)]
        # multiplication through discrete logs of a primitive element
        exp_t, log_t = self._log_tables()
        mul = [[0] * q for _ in range(q)]
        for a in range(1, q):
            for b in range(1, q):
                mul[a][b] = exp_t[(log_t[a] + log_t[b]) % (q - 1)]
        inv = [0] + [exp_t[(-log_t[a]) % (q - 1)] for a in range(1, q)]
        for name, val in (("add_t", add), ("mul_t", mul), ("neg_t", neg),
                          ("inv_t", inv), ("log_t", log_t), ("exp_t", exp_t)):
            object.__setattr__(self, name, val)

    @property
    def q(self) -> int:
        return self.p**self.e

    def __str__(self):
        if self.e == 1:
            return f"F_{self.p}"
        return f"F_{self.q} (modulus {','.join(map(str, self.modulus))})"

    # -- setup helpers -------------------------------------------------------

    def rep(self, code: int) -> tuple:
        out = []
        for _ in range(self.e):
            code, c = divmod(code, self.p)
            out.append(c)
        return tuple(out)

    def from_rep(self, rep: Sequence[int]) -> int:
        code = 0
        for c in reversed(rep):
            code = code * self.p + c % self.p
        return code

    def _rep_add(self, a, b):
        ra, rb = self.rep(a), self.rep(b)
        return self.from_rep([(x + y) % self.p for x, y in zip(ra, rb)])

    def _rep_mul(self, a, b):
        p = self.p
        ra, rb = self.rep(a), self.rep(b)
        prod = [0] * (2 * self.e - 1)
        for i, x in enumerate(ra):
            if x:
                for j, y in enumerate(rb):
                    prod[i + j] = (prod[i + j] + x * y) % p
        if self.e > 1:
            prod = _fp_mod(prod, self.modulus, p)
        return self.from_rep(list(prod) + [0] * (self.e - len(prod)))

    def _log_tables(self):
        q = self.q
        if q == 2:
            return [1], [None, 0]
        for g in range(2, q):
            powers = [1]
            x = g
            while x != 1:
                powers.append(x)
                x = self._rep_mul(x, g)
            if len(powers) == q - 1:
                log_t = [None] * q
                for i, v in enumerate(powers):
                    log_t[v] = i
                return powers, log_t
        raise AssertionError("no primitive element found")  # pragma: no cover

    # -- arithmetic on codes -------------------------------------------------

    def add(self, a: int, b: int) -> int:
        return self.add_t[a][b]

    def sub(self, a: int, b: int) -> int:
        return self.add_t[a][self.neg_t[b]]

    def neg(self, a: int) -> int:
        return self.neg_t[a]

    def mul(self, a: int, b: int) -> int:
        return self.mul_t[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in " + str(self))
        return self.inv_t[a]

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            return self.pow(self.inv(a), -n)
        if a == 0:
            return 1 if n == 0 else 0
        return self.exp_t[(self.log_t[a] * n) % (self.q - 1)]

    def from_int(self, n: int) -> int:
        """Image of the integer n in the prime subfield."""
        return n % self.p

    def code(self, x) -> int:
        if isinstance(x, FieldElement):
            if x.field != self:
                raise InvalidInput(f"element of {x.field} used in {self}")
            return x.code
        x = int(x)
        if not 0 <= x < self.q:
            raise InvalidInput(f"{x} is not an element code of {self}")
        return x

    def __call__(self, x) -> "FieldElement":
        return FieldElement(self, self.code(x))

    def elements(self) -> list["FieldElement"]:
        return [FieldElement(self, c) for c in range(self.q)]

    def fold_exponent(self, n: int) -> int:
        """Exponent of the reduced monomial equal to x**n as a function on F_q."""
        if n < self.q:
            return n
        return (n - 1) % (self.q - 1) + 1

    # -- numpy views, built lazily --------------------------------------------

    @property
    def np_tables(self) -> "_NumpyTables":
        return _numpy_tables(self)


@dataclass(frozen=True)
class _NumpyTables:
    add: np.ndarray
    mul: np.ndarray
    pow: np.ndarray  # pow[x, e] = x**e for 0 <= e <= q-1, with 0**0 = 1
    vandermonde: np.ndarray  # the same matrix indexed [point, exponent]
    interpolation: np.ndarray  # its inverse, indexed [exponent, point]


@lru_cache(maxsize=None)
def _numpy_tables(spec: FieldSpec) -> _NumpyTables:
    q = spec.q
    add = np.array(spec.add_t, dtype=np.intp)
    mul = np.array(spec.mul_t, dtype=np.intp)
    powt = np.array([[spec.pow(x, n) for n in range(q)] for x in range(q)], dtype=np.intp)
    inv = matrix_inverse(powt.tolist(), spec)
    return _NumpyTables(add, mul, powt, powt, np.array(inv, dtype=np.intp))


@lru_cache(maxsize=None)
def field_build(p: int, e: int = 1, modulus: tuple | None = None) -> FieldSpec:
    """Validated F_{p^e}; for e > 1 the modulus defaults to a built-in table."""
    if not is_prime(p):
        raise NonPrimeP(f"p={p} is not prime")
    if e < 1:
        raise InvalidInput("extension degree must be >= 1")
    q = p**e
    if q > MAX_FIELD_ORDER:
        raise UnsupportedSize(f"q={q} exceeds the supported maximum {MAX_FIELD_ORDER}")
    if e == 1:
        return FieldSpec(p, 1, (0, 1))
    if modulus is None:
        if (p, e) not in CONWAY_MODULI:
            raise UnsupportedSize(f"no built-in modulus for q={p}^{e}; supply one")
        modulus = CONWAY_MODULI[(p, e)]
    modulus = tuple(int(c) % p for c in modulus)
    if len(modulus) != e + 1 or modulus[-1] != 1:
        raise ReducibleModulus(f"modulus must be monic of degree {e}")
    if not is_irreducible(modulus, p):
        raise ReducibleModulus(f"modulus {modulus} is reducible over F_{p}")
    return FieldSpec(p, e, modulus)


def field_of_order(q: int, modulus: Sequence[int] | None = None) -> FieldSpec:
    p, e = prime_power(q)
    return field_build(p, e, tuple(modulus) if modulus is not None else None)


class FieldElement:
    """An element of a :class:`FieldSpec`, with operator overloads."""

    __slots__ = ("field", "code")

    def __init__(self, field: FieldSpec, code: int):
        self.field = field
        self.code = code

    @property
    def rep(self) -> tuple:
        return self.field.rep(self.code)

    def _other(self, other):
        return self.field.code(other)

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.code, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.code, self._other(other)))

    def __rsub__(self, other):
        return FieldElement(self.field, self.field.sub(self._other(other), self.code))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.code, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * self.field.inv(self._other(other))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.code))

    def __pow__(self, n: int):
        return FieldElement(self.field, self.field.pow(self.code, n))

    def inverse(self):
        return FieldElement(self.field, self.field.inv(self.code))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.code == other.code
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.e, self.code))

    def __bool__(self):
        return self.code != 0

    def __int__(self):
        return self.code

    def __repr__(self):
        return f"FieldElement({self.code} in {self.field})"


def matrix_rank(rows: Sequence[Sequence[int]], spec: FieldSpec) -> int:
    """Rank over F_q of a matrix of element codes, by Gaussian elimination."""
    m = [list(r) for r in rows]
    rank, ncols = 0, len(m[0]) if m else 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = spec.inv(m[rank][col])
        m[rank] = [spec.mul(inv, x) for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][col]:
                c = m[i][col]
                m[i] = [spec.sub(x, spec.mul(c, y)) for x, y in zip(m[i], m[rank])]
        rank += 1
    return rank


def matrix_inverse(rows: Sequence[Sequence[int]], spec: FieldSpec) -> list[list[int]]:
    n = len(rows)
    aug = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(rows)]
    for col in range(n):
        pivot = next((i for i in range(col, n) if aug[i][col]), None)
        if pivot is None:
            raise InvalidInput("matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = spec.inv(aug[col][col])
        aug[col] = [spec.mul(inv, x) for x in aug[col]]
        for i in range(n):
            if i != col and aug[i][col]:
                c = aug[i][col]
                aug[i] = [spec.sub(x, spec.mul(c, y)) for x, y in zip(aug[i], aug[col])]
    return [r[n:] for r in aug]


# -- univariate polynomials ------------------------------------------------

@dataclass(frozen=True)
class UniPoly:
    """Polynomial in F_q[t]; ``coeffs[i]`` is the code of the t**i coefficient."""

    field: FieldSpec
    coeffs: tuple = ()

    def __post_init__(self):
        c = [self.field.code(x) for x in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def zero(cls, field):
        return cls(field, ())

    @classmethod
    def one(cls, field):
        return cls(field, (1,))

    @classmethod
    def monomial(cls, field, i, c=1):
        return cls(field, (0,) * i + (c,))

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self):
        return not self.coeffs

    def coefficient(self, i: int) -> int:
        return self.coeffs[i] if i < len(self.coeffs) else 0

    def _check(self, other):
        if not isinstance(other, UniPoly):
            return NotImplemented
        if other.field != self.field:
            raise InvalidInput("polynomials over different fields")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        F = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(F, [F.add(self.coefficient(i), other.coefficient(i)) for i in range(n)])

    def __neg__(self):
        return UniPoly(self.field, [self.field.neg(c) for c in self.coeffs])

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        F = self.field
        if self.is_zero() or other.is_zero():
            return UniPoly(F, ())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        mul, add = F.mul_t, F.add_t
        for i, a in enumerate(self.coeffs):
            if a:
                row = mul[a]
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] = add[out[i + j]][row[b]]
        return UniPoly(F, out)

    def scale(self, c) -> "UniPoly":
        c = self.field.code(c)
        return UniPoly(self.field, [self.field.mul(c, x) for x in self.coeffs])

    def __pow__(self, r: int):
        return unipoly_pow(self, r)

    def __str__(self):
        return " ".join(map(str, self.coeffs)) if self.coeffs else "0"


def unipoly_pow(f: UniPoly, r: int, spec: FieldSpec | None = None) -> UniPoly:
    """``f**r`` by square-and-multiply convolution."""
    if spec is not None and spec != f.field:
        raise InvalidInput("field mismatch")
    if r < 1:
        raise InvalidInput("exponent must be >= 1")
    result, base = None, f
    while r:
        if r & 1:
            result = base if result is None else result * base
        r >>= 1
        if r:
            base = base * base
    return result


# -- multivariate polynomials ----------------------------------------------

class MultiPoly:
    """Sparse polynomial in ``nvars`` variables over a finite field.

    ``terms`` maps exponent tuples to nonzero coefficient codes.  Instances
    are treated as immutable.
    """

    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field: FieldSpec, nvars: int, terms: Mapping | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean = {}
        add = field.add_t
        for mono, c in items:
            mono = tuple(int(x) for x in mono)
            if len(mono) != nvars:
                raise DimensionMismatch(f"monomial {mono} has {len(mono)} exponents, expected {nvars}")
            if any(x < 0 for x in mono):
                raise InvalidInput(f"negative exponent in {mono}")
            c = field.code(c)
            clean[mono] = add[clean.get(mono, 0)][c]
        self.field = field
        self.nvars = nvars
        self.terms = {m: c for m, c in clean.items() if c}

    @classmethod
    def _raw(cls, field, nvars, terms):
        # trusted constructor: terms already clean
        obj = cls.__new__(cls)
        obj.field, obj.nvars, obj.terms = field, nvars, terms
        return obj

    @classmethod
    def zero(cls, field, nvars):
        return cls._raw(field, nvars, {})

    @classmethod
    def constant(cls, field, nvars, c=1):
        c = field.code(c)
        return cls._raw(field, nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def one(cls, field, nvars):
        return cls.constant(field, nvars, 1)

    @classmethod
    def variable(cls, field, nvars, i):
        if not 0 <= i < nvars:
            raise DimensionMismatch(f"variable index {i} out of range for {nvars} variables")
        mono = tuple(1 if j == i else 0 for j in range(nvars))
        return cls._raw(field, nvars, {mono: 1})

    def __len__(self):
        return len(self.terms)

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(not any(m) for m in self.terms)

    @property
    def total_degree(self):
        return max((sum(m) for m in self.terms), default=NEG_INF)

    @property
    def max_var_degree(self):
        return max((max(m, default=0) for m in self.terms), default=NEG_INF)

    def sorted_terms(self):
        return sorted(self.terms.items())

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return (self.field == other.field and self.nvars == other.nvars
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self):
        return f"MultiPoly({self.field}, {self.nvars}, {dict(self.sorted_terms())})"

    def _check(self, other):
        if not isinstance(other, MultiPoly):
            raise TypeError(f"expected MultiPoly, got {type(other).__name__}")
        if other.field != self.field:
            raise InvalidInput("polynomials over different fields")
        if other.nvars != self.nvars:
            raise DimensionMismatch(f"{self.nvars} vs {other.nvars} variables")

    def __add__(self, other):
        self._check(other)
        add = self.field.add_t
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = add[out.get(m, 0)][c]
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return MultiPoly._raw(self.field, self.nvars, out)

    def __neg__(self):
        neg = self.field.neg_t
        return MultiPoly._raw(self.field, self.nvars, {m: neg[c] for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "MultiPoly":
        c = self.field.code(c)
        if not c:
            return MultiPoly.zero(self.field, self.nvars)
        row = self.field.mul_t[c]
        return MultiPoly._raw(self.field, self.nvars, {m: row[v] for m, v in self.terms.items()})

    def __mul__(self, other):
        """Exact product in the polynomial ring (no exponent folding)."""
        self._check(other)
        return _sparse_product(self, other, fold=None, cap=None)

    def __call__(self, *point):
        if len(point) == 1 and isinstance(point[0], (list, tuple, np.ndarray)):
            point = point[0]
        return multipoly_eval(self, point)

    def embed(self, nvars: int, offset: int) -> "MultiPoly":
        """Same polynomial with variable i renamed to ``offset + i`` among ``nvars``."""
        if offset < 0 or offset + self.nvars > nvars:
            raise DimensionMismatch("embedding does not fit")
        pre, post = (0,) * offset, (0,) * (nvars - offset - self.nvars)
        return MultiPoly._raw(self.field, nvars, {pre + m + post: c for m, c in self.terms.items()})


def _sparse_product(P, Q, fold, cap):
    F = P.field
    mul, add = F.mul_t, F.add_t
    out: dict = {}
    for m1, c1 in P.terms.items():
        row = mul[c1]
        for m2, c2 in Q.terms.items():
            if fold is None:
                m = tuple(a + b for a, b in zip(m1, m2))
            else:
                m = tuple(fold[a + b] for a, b in zip(m1, m2))
            v = add[out.get(m, 0)][row[c2]]
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        if cap is not None and len(out) > cap:
            raise SizeBudgetExceeded("intermediate term count", len(out), cap)
    return MultiPoly._raw(F, P.nvars, out)


def reduce_exponents(P: MultiPoly, spec: FieldSpec | None = None) -> MultiPoly:
    """Canonical representative of P as a function on ``F_q^N``.

    Each exponent ``e >= q`` becomes ``((e - 1) mod (q - 1)) + 1``; colliding
    coefficients are summed.
    """
    F = P.field
    if spec is not None and spec != F:
        raise InvalidInput("field mismatch")
    q = F.q
    if all(x < q for m in P.terms for x in m):
        return P
    fold = F.fold_exponent
    out: dict = {}
    add = F.add_t
    for m, c in P.terms.items():
        r = tuple(fold(x) for x in m)
        v = add[out.get(r, 0)][c]
        if v:
            out[r] = v
        else:
            out.pop(r, None)
    return MultiPoly._raw(F, P.nvars, out)


def _check_domain(spec, nvars, budget):
    size = spec.q**nvars
    if size > budget:
        raise SizeBudgetExceeded(f"grid F_{spec.q}^{nvars}", size, budget)
    return size


def _axis_transform(arr: np.ndarray, matrix: np.ndarray, spec: FieldSpec) -> np.ndarray:
    """Apply ``out[.., i, ..] = sum_j matrix[i, j] * arr[.., j, ..]`` along every axis."""
    q = spec.q
    tabs = spec.np_tables
    for axis in range(arr.ndim):
        a = np.moveaxis(arr, axis, 0).reshape(q, -1)
        if spec.e == 1:
            out = (matrix @ a) % spec.p
        else:
            out = np.zeros_like(a)
            for i in range(q):
                acc = out[i]
                for j in range(q):
                    if matrix[i, j]:
                        acc = tabs.add[acc, tabs.mul[matrix[i, j], a[j]]]
                out[i] = acc
        arr = np.moveaxis(out.reshape((q,) * arr.ndim), 0, axis)
    return np.ascontiguousarray(arr)


def to_dense(P: MultiPoly, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """Coefficient array of shape ``(q,)*nvars`` of the reduced polynomial."""
    _check_domain(P.field, P.nvars, budget)
    P = reduce_exponents(P)
    arr = np.zeros((P.field.q,) * P.nvars, dtype=np.intp)
    for m, c in P.terms.items():
        arr[m] = c
    return arr


def from_dense(arr: np.ndarray, spec: FieldSpec) -> MultiPoly:
    if arr.ndim == 0:
        return MultiPoly.constant(spec, 0, int(arr))
    idx = np.nonzero(arr)
    vals = arr[idx]
    terms = {tuple(int(i) for i in m): int(c) for m, c in zip(zip(*idx), vals)}
    return MultiPoly._raw(spec, arr.ndim, terms)


def value_table(P: MultiPoly, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """Values of P at every point of ``F_q^nvars``, indexed by point coordinates.

    Flattening in C order enumerates points lexicographically.
    """
    return _axis_transform(to_dense(P, budget), P.field.np_tables.vandermonde, P.field)


def interpolate(table: np.ndarray, spec: FieldSpec) -> MultiPoly:
    """The reduced polynomial whose value table is ``table``."""
    table = np.asarray(table, dtype=np.intp)
    return from_dense(_axis_transform(table, spec.np_tables.interpolation, spec), spec)


def multipoly_mul_reduced(P: MultiPoly, Q: MultiPoly, spec: FieldSpec | None = None,
                          budget: int = DEFAULT_BUDGET) -> MultiPoly:
    """``reduce_exponents(P * Q)``, never holding more than ``budget`` terms."""
    P._check(Q)
    F = P.field
    if spec is not None and spec != F:
        raise InvalidInput("field mismatch")
    if P.is_zero() or Q.is_zero():
        return MultiPoly.zero(F, P.nvars)
    P, Q = reduce_exponents(P), reduce_exponents(Q)
    if len(P) > len(Q):
        P, Q = Q, P
    if P.is_constant():
        return Q.scale(P.terms[(0,) * P.nvars])
    domain = F.q**P.nvars
    if domain <= budget and len(P) * len(Q) > 4 * domain:
        prod = F.np_tables.mul[value_table(P, budget), value_table(Q, budget)]
        return interpolate(prod, F)
    fold = [F.fold_exponent(x) for x in range(2 * F.q - 1)]
    return _sparse_product(P, Q, fold, budget)


def multipoly_pow_reduced(P: MultiPoly, n: int, budget: int = DEFAULT_BUDGET) -> MultiPoly:
    result = MultiPoly.one(P.field, P.nvars)
    base = reduce_exponents(P)
    while n:
        if n & 1:
            result = multipoly_mul_reduced(result, base, budget=budget)
        n >>= 1
        if n:
            base = multipoly_mul_reduced(base, base, budget=budget)
    return result


def multipoly_eval(P: MultiPoly, point: Sequence) -> FieldElement:
    F = P.field
    if len(point) != P.nvars:
        raise DimensionMismatch(f"point has {len(point)} coordinates, polynomial has {P.nvars} variables")
    x = [F.code(v) for v in point]
    mul, add = F.mul_t, F.add_t
    total = 0
    for m, c in P.terms.items():
        v = c
        for xi, ei in zip(x, m):
            if ei:
                v = mul[v][F.pow(xi, ei)]
                if not v:
                    break
        total = add[total][v]
    return FieldElement(F, total)


def eval_many(P: MultiPoly, points: np.ndarray) -> np.ndarray:
    """Vectorized evaluation at the rows of an integer array of codes."""
    F = P.field
    pts = np.asarray(points, dtype=np.intp)
    if pts.ndim != 2 or pts.shape[1] != P.nvars:
        raise DimensionMismatch(f"points must have shape (M, {P.nvars})")
    tabs = F.np_tables
    acc = np.zeros(len(pts), dtype=np.intp)
    for m, c in P.terms.items():
        v = np.full(len(pts), c, dtype=np.intp)
        for i, ei in enumerate(m):
            if ei:
                v = tabs.mul[v, tabs.pow[pts[:, i], F.fold_exponent(ei)]]
        acc = tabs.add[acc, v]
    return acc


def all_points(spec: FieldSpec, nvars: int) -> np.ndarray:
    """Every point of ``F_q^nvars`` as rows, in lexicographic order."""
    q = spec.q
    if nvars == 0:
        return np.zeros((1, 0), dtype=np.intp)
    grid = np.indices((q,) * nvars).reshape(nvars, -1).T
    return np.ascontiguousarray(grid, dtype=np.intp)
