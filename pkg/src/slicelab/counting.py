"""Monomial counts and the bound/threshold arithmetic of the slice-rank argument.

``exact_monomial_count(n, d, q)`` is the size of the set of monomials in n
variables with every exponent in ``[0, q-1]`` and total degree at most d.
Divided by ``q**n`` it is the probability that a sum of n independent
uniform variables on ``{0, .., q-1}`` is at most d, which the concentration
bound ``q**n * exp(-n*eps**2/2)`` controls when ``d = (q-1) n (1/2 - eps)``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .errors import EpsilonOutOfRange, InvalidInput


def as_fraction(x) -> Fraction:
    """Exact rational for ints, Fractions and decimal-literal floats/strings."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(str(x))


def _check_epsilon(epsilon):
    eps = as_fraction(epsilon)
    if not 0 < eps < Fraction(1, 2):
        raise EpsilonOutOfRange(f"epsilon must lie in (0, 1/2), got {epsilon}")
    return eps


def exact_monomial_count(n: int, d, q: int) -> int:
    """``|{e in [0, q-1]^n : sum(e) <= floor(d)}|`` by prefix-sum convolution."""
    if n < 0 or q < 2:
        raise InvalidInput("need n >= 0 and q >= 2")
    cap = math.floor(d)
    if cap < 0:
        return 0
    cap = min(cap, n * (q - 1))
    ways = [1] + [0] * cap  # ways[s]: exponent vectors so far with sum s
    for _ in range(n):
        prefix = [0]
        for w in ways:
            prefix.append(prefix[-1] + w)
        ways = [prefix[s + 1] - prefix[max(0, s - q + 1)] for s in range(cap + 1)]
    return sum(ways)


def log_hoeffding_bound(n: int, epsilon, q: int) -> float:
    """Natural log of ``q**n * exp(-n * eps**2 / 2)``."""
    eps = float(_check_epsilon(epsilon))
    return n * math.log(q) - n * eps * eps / 2


def hoeffding_bound(n: int, epsilon, q: int) -> float:
    return math.exp(log_hoeffding_bound(n, epsilon, q))


def log_hoeffding_sharp(n: int, epsilon, q: int) -> float:
    """Natural log of ``q**n * exp(-2 n eps**2)``, the sharp Hoeffding constant."""
    eps = float(_check_epsilon(epsilon))
    return n * math.log(q) - 2 * n * eps * eps


def hoeffding_degree_cap(n: int, epsilon, q: int) -> Fraction:
    """The degree ``(q-1) n (1/2 - eps)`` whose monomial count the bound controls."""
    return (q - 1) * n * (Fraction(1, 2) - _check_epsilon(epsilon))


def c_exponent(epsilon, q: int) -> float:
    """``1 - eps**2 / (2 ln q)``, so that ``q**(c n) = q**n exp(-n eps**2 / 2)``."""
    eps = float(_check_epsilon(epsilon))
    if q < 2:
        raise InvalidInput("q must be >= 2")
    return 1 - eps * eps / (2 * math.log(q))


def epsilon_of_r(r: int) -> Fraction:
    if r < 1:
        raise InvalidInput("r must be >= 1")
    return Fraction(1, 4 * (2 * r * r + 1))


def proposition_condition(m: int, l: int, k: int, n: int, epsilon) -> bool:
    """Exact test of ``m*l/k <= (1/2 - eps) * n``."""
    eps = _check_epsilon(epsilon)
    return Fraction(m * l, k) <= (Fraction(1, 2) - eps) * n


@dataclass
class BoundReport:
    q: int
    r: int
    k: int
    d: int
    n: int
    m: int
    l: int
    epsilon: Fraction
    c_exponent: float
    C_constant: int
    logq_C: int
    logq_bound: float
    bound_value: float | None
    conditions: dict = field(default_factory=dict)
    applicable: bool = True
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["epsilon"] = str(self.epsilon)
        out["C_constant"] = str(self.C_constant)
        return out


def theorem_bound(q: int, r: int, k: int, d: int, n: int) -> BoundReport:
    """Evaluate the cardinality bound ``k * C * q**(c n)`` and its hypotheses."""
    if q < 2 or k < 2 or r < 1 or d < 0 or n < 1:
        raise InvalidInput("need q >= 2, k >= 2, r >= 1, d >= 0, n >= 1")
    eps = epsilon_of_r(r)
    c = c_exponent(eps, q)
    logq_C = 4 * (d + 1) * r
    logq_bound = math.log(k, q) + logq_C + c * n
    m = (n - 1) * r + d + 1
    conditions = {
        "k_ge_2r2_plus_1": k >= 2 * r * r + 1,
        "n_ge_4(d+1)r": n >= 4 * (d + 1) * r,
        "proposition": proposition_condition(m, r, k, n, eps),
    }
    bound_value = q**logq_bound if logq_bound * math.log2(q) < 64 else None
    report = BoundReport(
        q=q, r=r, k=k, d=d, n=n, m=m, l=r, epsilon=eps, c_exponent=c,
        C_constant=q**logq_C, logq_C=logq_C, logq_bound=logq_bound,
        bound_value=bound_value, conditions=conditions,
        applicable=conditions["k_ge_2r2_plus_1"],
    )
    if not report.applicable:
        report.notes.append(f"k = {k} < 2r^2+1 = {2 * r * r + 1}: no conclusion")
    if report.applicable and logq_bound >= n:
        report.notes.append("bound is at least q^n, vacuous at this n")
    return report
