"""Command-line entry point: ``slicelab {bound,count,cover,verify,search}``.

Exit codes: 0 success, 2 invalid input, 3 budget exceeded.  The budget
defaults to 2^20 and can be overridden with ``--budget`` or the
``SLICELAB_BUDGET`` environment variable.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from math import exp
from dataclasses import dataclass
from fractions import Fraction

from . import formats
from .algebra import budget_from_env, field_of_order, prime_power
from .counting import (
    as_fraction,
    exact_monomial_count,
    hoeffding_degree_cap,
    log_hoeffding_bound,
    log_hoeffding_sharp,
    theorem_bound,
)
from .encoding import EquationSpec, build_equation_map
from .errors import InvalidInput, NoAdmissibleSlot, SizeBudgetExceeded
from .search import exhaustive_max_free, greedy_free, verify_solution_free
from .slicerank import build_cover, indicator_degree_bound, indicator_poly, verify_cover

EXIT_OK, EXIT_INVALID, EXIT_BUDGET = 0, 2, 3

BOUND_COLUMNS = ["q", "r", "k", "d", "n", "epsilon", "c", "logq_bound", "flags"]
COUNT_COLUMNS = ["q", "n", "d", "epsilon", "exact", "hoeffding", "ratio", "hoeffding_sharp"]


@dataclass
class RunConfig:
    command: str
    fmt: str
    budget: int
    seed: int
    threads: int


def parse_range(text) -> list[int]:
    """``"5"``, ``"1:30"`` (inclusive) or ``"1:30:2"``."""
    parts = str(text).split(":")
    try:
        nums = [int(p) for p in parts]
    except ValueError:
        raise InvalidInput(f"bad integer or range {text!r}") from None
    if len(nums) == 1:
        return nums
    if len(nums) in (2, 3):
        step = nums[2] if len(nums) == 3 else 1
        if step < 1 or nums[1] < nums[0]:
            raise InvalidInput(f"bad range {text!r}")
        return list(range(nums[0], nums[1] + 1, step))
    raise InvalidInput(f"bad integer or range {text!r}")


def _check_q(q_text) -> int:
    try:
        q, _ = formats.parse_q(q_text)
        prime_power(q)
    except InvalidInput:
        raise InvalidInput("q must be a prime power >= 2") from None
    return q


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for key in sorted(obj):
            yield from _flatten(obj[key], f"{prefix}{key}.")
    else:
        yield prefix[:-1], obj


def _as_text(obj: dict) -> str:
    lines = []
    for key, value in _flatten(obj):
        if isinstance(value, list):
            value = ", ".join(map(str, value)) if value else "-"
        lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"


def _as_csv(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def emit(cfg: RunConfig, obj, columns=None, rows=None, text=None):
    if cfg.fmt == "json":
        out = formats.dumps(obj) + "\n"
    elif cfg.fmt == "csv":
        if columns is None:
            raise InvalidInput(f"{cfg.command} has no CSV form")
        out = _as_csv(columns, rows)
    else:
        out = text if text is not None else _as_text(obj)
    sys.stdout.write(out)


# -- bound -------------------------------------------------------------------

def cmd_bound(args, cfg: RunConfig) -> int:
    q = _check_q(args.q)
    reports = [theorem_bound(q, args.r, args.k, args.d, n) for n in parse_range(args.n)]
    dicts = [r.to_dict() for r in reports]
    rows = [{
        "q": r.q, "r": r.r, "k": r.k, "d": r.d, "n": r.n, "epsilon": str(r.epsilon),
        "c": repr(r.c_exponent), "logq_bound": repr(r.logq_bound),
        "flags": ";".join(f"{k}={int(v)}" for k, v in r.conditions.items()),
    } for r in reports]
    if len(dicts) == 1:
        emit(cfg, dicts[0], BOUND_COLUMNS, rows)
    else:
        emit(cfg, {"reports": dicts}, BOUND_COLUMNS, rows,
             text="".join(_as_text(d) + "\n" for d in dicts))
    return EXIT_OK


# -- count -------------------------------------------------------------------

def cmd_count(args, cfg: RunConfig) -> int:
    q = _check_q(args.q)
    if (args.d is None) == (args.epsilon is None):
        raise InvalidInput("give exactly one of --d or --epsilon")
    rows = []
    for n in parse_range(args.n):
        if n < 0:
            raise InvalidInput("n must be >= 0")
        row = {"q": q, "n": n}
        if args.epsilon is not None:
            eps = as_fraction(args.epsilon)
            cap = hoeffding_degree_cap(n, eps, q)
            exact = exact_monomial_count(n, cap, q)
            bound = log_hoeffding_bound(n, eps, q)
            sharp = log_hoeffding_sharp(n, eps, q)
            row.update(d=str(cap), epsilon=str(eps), exact=exact, hoeffding=repr(exp(bound)),
                       ratio=repr(exact / exp(bound)), hoeffding_sharp=repr(exp(sharp)))
        else:
            d = as_fraction(args.d)
            row.update(d=str(d), epsilon="", exact=exact_monomial_count(n, d, q),
                       hoeffding="", ratio="", hoeffding_sharp="")
        rows.append(row)
    obj = rows[0] if len(rows) == 1 else {"rows": rows}
    if args.epsilon is not None:
        note = ("bound uses exp(-n*eps^2/2); the sharp Hoeffding constant gives "
                "exp(-2*n*eps^2) (column hoeffding_sharp)")
        obj = dict(obj, note=note)
    if cfg.fmt == "text" and len(rows) == 1 and args.epsilon is None:
        emit(cfg, obj, COUNT_COLUMNS, rows, text=f"{rows[0]['exact']}\n")
    else:
        emit(cfg, obj, COUNT_COLUMNS, rows)
    return EXIT_OK


# -- equations from flags or files --------------------------------------------

def _equation_from_args(args) -> EquationSpec:
    if args.eq:
        return formats.load_equation(args.eq)
    if args.q is None or args.r is None or args.a is None:
        raise InvalidInput("give --eq FILE or all of --q, --r, --a")
    q = _check_q(args.q)
    spec = field_of_order(q, formats.parse_modulus(args.modulus))
    coeffs = formats.parse_coeff_list(args.a, spec)
    if args.k is not None and args.k != len(coeffs):
        raise InvalidInput(f"--k {args.k} disagrees with {len(coeffs)} coefficients in --a")
    return EquationSpec(spec, args.r, coeffs, args.d)


# -- cover -------------------------------------------------------------------

def cmd_cover(args, cfg: RunConfig) -> int:
    warnings = []
    if args.map:
        phi, k, n = formats.polymap_from_json(formats.loads(formats._read(args.map)))
        instance = {"map": args.map, "k": k, "n": n}
    else:
        if args.n is None:
            raise InvalidInput("--n is required")
        eq = _equation_from_args(args)
        k, n = eq.k, args.n
        phi = build_equation_map(eq, n)
        warnings = eq.zero_coefficient_warnings()
        instance = {"q": eq.field.q, "r": eq.r, "k": k, "d": eq.d, "n": n,
                    "coefficients": [str(a) for a in eq.coeffs]}
    spec = phi.field
    P = indicator_poly(phi, budget=cfg.budget)
    threshold = Fraction((spec.q - 1) * phi.m * phi.degree, k)
    cover = build_cover(P, k, n, threshold)
    mode = args.mode
    if mode == "auto":
        mode = "exhaustive" if spec.q ** (k * n) <= cfg.budget else "sampled"
    verdict = verify_cover(P, cover, mode=mode, samples=args.samples, seed=cfg.seed,
                           budget=cfg.budget)
    size_bound = k * exact_monomial_count(n, threshold, spec.q)
    cert = formats.cover_to_json(P, cover)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(formats.dumps(cert) + "\n")
    obj = {
        "instance": instance,
        "field": formats.format_field(spec),
        "m": phi.m,
        "l": phi.degree,
        "indicator_terms": len(P),
        "indicator_degree": P.total_degree if not P.is_zero() else None,
        "indicator_degree_bound": indicator_degree_bound(phi),
        "threshold": str(threshold),
        "cover_size": cover.size,
        "slot_sizes": cover.slot_sizes(),
        "size_bound": size_bound,
        "verification": verdict.to_dict(),
        "warnings": warnings,
    }
    if cfg.fmt == "json":
        obj["certificate"] = cert
    emit(cfg, obj)
    return EXIT_OK if verdict.passed else 1


# -- verify / search ------------------------------------------------------------

def _witness_text(tup) -> str:
    return "(" + ", ".join(str(f) for f in tup) + ")"


def cmd_verify(args, cfg: RunConfig) -> int:
    if args.cert:
        P, cover = formats.cover_from_json(formats.loads(formats._read(args.cert)))
        verdict = verify_cover(P, cover, mode=args.mode if args.mode != "auto" else "exhaustive",
                               samples=args.samples, seed=cfg.seed, budget=cfg.budget)
        emit(cfg, dict(verdict.to_dict(), cover_size=cover.size))
        return EXIT_OK if verdict.passed else 1
    if not (args.set and args.eq):
        raise InvalidInput("give --set FILE and --eq FILE, or --cert FILE")
    eq = formats.load_equation(args.eq)
    A = formats.load_polyset(args.set, eq.field)
    rep = verify_solution_free(A, eq, budget=cfg.budget, threads=cfg.threads)
    obj = formats.solution_report_dict(rep)
    text = f"{rep.status}\n"
    if rep.witness:
        text = f"witness {_witness_text(rep.witness)}\n"
    text += f"tuples examined: {rep.tuples_examined}\n"
    text += "".join(f"warning: {w}\n" for w in rep.warnings)
    emit(cfg, obj, text=text)
    return EXIT_OK


def cmd_search(args, cfg: RunConfig) -> int:
    if args.n is None:
        raise InvalidInput("--n is required")
    eq = _equation_from_args(args)
    q = eq.field.q
    if args.mode == "exhaustive":
        size, A = exhaustive_max_free(q, args.n, eq, budget=cfg.budget, threads=cfg.threads)
    else:
        A = greedy_free(q, args.n, eq, seed=cfg.seed, budget=cfg.budget)
        size = len(A)
    members = [str(f) for f in A.members]
    obj = {"mode": args.mode, "q": q, "n": args.n, "size": size, "witness": members,
           "seed": cfg.seed if args.mode == "greedy" else None,
           "warnings": eq.zero_coefficient_warnings()}
    label = "max" if args.mode == "exhaustive" else "size"
    text = f"{label}={size}, witness {{{', '.join(members)}}}\n"
    text += "".join(f"warning: {w}\n" for w in obj["warnings"])
    emit(cfg, obj, text=text)
    return EXIT_OK


# -- argument parsing -----------------------------------------------------------

def _add_common(p):
    p.add_argument("--format", dest="fmt", choices=["json", "csv", "text"], default="text")
    p.add_argument("--budget", type=int, default=None,
                   help="size cap for grids, terms and enumerations (default 2^20 or $SLICELAB_BUDGET)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)


def _add_equation(p):
    p.add_argument("--eq", help="equation file")
    p.add_argument("--q", help="field order q or p^e")
    p.add_argument("--modulus", help="extension modulus c0,c1,...,ce")
    p.add_argument("--r", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--a", help='coefficients, e.g. "1;1;1" or "1 2;2 1"')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="slicelab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="cardinality bound and its hypotheses")
    p.add_argument("--q", required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", required=True, help="n or an inclusive range a:b[:step]")
    _add_common(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("count", help="monomial counts against the concentration bound")
    p.add_argument("--q", required=True)
    p.add_argument("--n", required=True, help="n or an inclusive range a:b[:step]")
    p.add_argument("--d", help="total degree cap (floored)")
    p.add_argument("--epsilon", help="use the cap (q-1) n (1/2 - epsilon)")
    _add_common(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("cover", help="build and verify a slice-rank cover certificate")
    _add_equation(p)
    p.add_argument("--n", type=int)
    p.add_argument("--map", help="JSON polynomial map instead of an equation")
    p.add_argument("--mode", choices=["auto", "exhaustive", "sampled"], default="auto")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--out", help="write the certificate JSON here")
    _add_common(p)
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("verify", help="certify a set as solution-free, or re-check a certificate")
    p.add_argument("--set", help="polynomial set file")
    p.add_argument("--eq", help="equation file")
    p.add_argument("--cert", help="cover certificate JSON")
    p.add_argument("--mode", choices=["auto", "exhaustive", "sampled"], default="auto")
    p.add_argument("--samples", type=int, default=1000)
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", help="largest solution-free subsets of P_{q,n}")
    _add_equation(p)
    p.add_argument("--n", type=int)
    p.add_argument("--mode", choices=["exhaustive", "greedy"], default="exhaustive")
    _add_common(p)
    p.set_defaults(func=cmd_search)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        budget = args.budget if args.budget is not None else budget_from_env()
        if budget < 1 or args.threads < 1:
            raise InvalidInput("--budget and --threads must be positive")
        cfg = RunConfig(args.command, args.fmt, budget, args.seed, args.threads)
        return args.func(args, cfg)
    except SizeBudgetExceeded as exc:
        print(f"slicelab: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InvalidInput, NoAdmissibleSlot) as exc:
        print(f"slicelab: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
