"""Text and JSON formats for polynomials, equations, sets, maps and covers.

Polynomials over F_q are written as ascending coefficient codes separated by
spaces (``"1 2 0 1"`` is 1 + 2t + t^3; ``"0"`` is zero).  In F_{p^e} the code
of an element is ``sum c_i p^i`` over its coordinates in the basis 1, t, ...

Equation file::

    # f1^2 + f2^2 + f3^2 = 0 over F_3
    q: 3
    r: 2
    k: 3
    d: 0
    a1: 1
    a2: 1
    a3: 1

An optional ``modulus: c0,c1,...,ce`` line selects the extension modulus.

Set file: a header line ``q=3 n=1`` (optionally ``modulus=...``, and a leading
``#`` is allowed) then one polynomial per line.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path

from .algebra import FieldSpec, MultiPoly, UniPoly, field_of_order
from .encoding import EquationSpec, PolyMap
from .errors import InvalidInput
from .search import PolySet, SolutionReport
from .slicerank import SliceCover

CERT_FORMAT = "slicelab-cover/1"


def parse_q(text) -> tuple[int, int]:
    """``"9"`` or ``"3^2"`` -> (p**e, e hint); raises on malformed input."""
    text = str(text).strip()
    m = re.fullmatch(r"(\d+)(?:\^(\d+))?", text)
    if not m:
        raise InvalidInput(f"bad field order {text!r}; use q or p^e")
    base, exp = int(m.group(1)), int(m.group(2) or 1)
    return base**exp, exp


def parse_modulus(text) -> tuple | None:
    if text is None or str(text).strip() == "":
        return None
    try:
        return tuple(int(c) for c in str(text).replace(" ", "").split(","))
    except ValueError:
        raise InvalidInput(f"bad modulus {text!r}") from None


def parse_field(text: str) -> FieldSpec:
    """``"q=9 modulus=2,2,1"`` or ``"q=3^2"`` style field specifications."""
    fields = dict(part.split("=", 1) for part in text.replace(";", " ").split() if "=" in part)
    if "q" not in fields:
        raise InvalidInput(f"field spec {text!r} lacks q=")
    q, _ = parse_q(fields["q"])
    return field_of_order(q, parse_modulus(fields.get("modulus")))


def format_field(spec: FieldSpec) -> str:
    out = f"q={spec.q}"
    if spec.e > 1:
        out += " modulus=" + ",".join(map(str, spec.modulus))
    return out


def parse_poly(text: str, spec: FieldSpec) -> UniPoly:
    parts = text.split()
    if not parts:
        raise InvalidInput("empty polynomial")
    try:
        coeffs = [int(c) for c in parts]
    except ValueError:
        raise InvalidInput(f"bad polynomial {text!r}") from None
    return UniPoly(spec, coeffs)


def format_poly(f: UniPoly) -> str:
    return str(f)


def parse_coeff_list(text: str, spec: FieldSpec) -> tuple:
    """Inline coefficients ``"1;1;1"`` or ``"1 2;0 1;..."``."""
    return tuple(parse_poly(part, spec) for part in text.split(";"))


# -- equations ---------------------------------------------------------------

def _key_values(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise InvalidInput(f"line {lineno}: expected 'key: value', got {raw!r}")
        key, value = line.split(":", 1)
        yield lineno, key.strip().lower(), value.strip()


def parse_equation(text: str) -> EquationSpec:
    header, coeffs = {}, {}
    for lineno, key, value in _key_values(text):
        m = re.fullmatch(r"a(\d+)", key)
        if m:
            coeffs[int(m.group(1))] = value
        elif key in ("q", "r", "k", "d", "modulus"):
            header[key] = value
        else:
            raise InvalidInput(f"line {lineno}: unknown key {key!r}")
    for key in ("q", "r"):
        if key not in header:
            raise InvalidInput(f"equation file lacks {key}")
    q, _ = parse_q(header["q"])
    spec = field_of_order(q, parse_modulus(header.get("modulus")))
    k = int(header.get("k", len(coeffs)))
    if sorted(coeffs) != list(range(1, k + 1)):
        raise InvalidInput(f"expected coefficient lines a1..a{k}, got {sorted(coeffs)}")
    polys = tuple(parse_poly(coeffs[i], spec) for i in range(1, k + 1))
    d = int(header["d"]) if "d" in header else None
    return EquationSpec(spec, int(header["r"]), polys, d)


def format_equation(eq: EquationSpec) -> str:
    lines = [f"# {eq.describe()}"]
    lines.append(f"q: {eq.field.q}")
    if eq.field.e > 1:
        lines.append("modulus: " + ",".join(map(str, eq.field.modulus)))
    lines += [f"r: {eq.r}", f"k: {eq.k}", f"d: {eq.d}"]
    lines += [f"a{i}: {a}" for i, a in enumerate(eq.coeffs, 1)]
    return "\n".join(lines) + "\n"


def load_equation(path) -> EquationSpec:
    return parse_equation(_read(path))


def _read(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc.strerror}") from None


# -- polynomial sets -----------------------------------------------------------

def parse_polyset(text: str, spec: FieldSpec | None = None) -> PolySet:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise InvalidInput("empty set file")
    header = lines[0].lstrip("#")
    if "n=" not in header or "q=" not in header:
        raise InvalidInput("set file must start with a header 'q=<q> n=<n>'")
    fields = dict(part.split("=", 1) for part in header.split() if "=" in part)
    declared = parse_field(header)
    if spec is not None and declared != spec:
        raise InvalidInput(f"set file is over {declared}, expected {spec}")
    try:
        n = int(fields["n"])
    except ValueError:
        raise InvalidInput(f"bad n in header {header!r}") from None
    return PolySet(declared, n, tuple(parse_poly(ln, declared) for ln in lines[1:]
                                       if not ln.startswith("#")))


def format_polyset(A: PolySet) -> str:
    lines = [f"# {format_field(A.field)} n={A.n}"]
    lines += [format_poly(f) for f in A.members]
    return "\n".join(lines) + "\n"


def load_polyset(path, spec: FieldSpec | None = None) -> PolySet:
    return parse_polyset(_read(path), spec)


def solution_report_dict(rep: SolutionReport) -> dict:
    return {
        "status": rep.status,
        "witness": [format_poly(f) for f in rep.witness] if rep.witness else None,
        "tuples_examined": rep.tuples_examined,
        "warnings": list(rep.warnings),
    }


# -- multivariate polynomials, maps, covers -------------------------------------

def field_dict(spec: FieldSpec) -> dict:
    return {"q": spec.q, "p": spec.p, "e": spec.e, "modulus": list(spec.modulus) if spec.e > 1 else None}


def field_from_dict(obj: dict) -> FieldSpec:
    return field_of_order(int(obj["q"]), obj.get("modulus"))


def terms_to_json(P: MultiPoly) -> list:
    return [[list(m), c] for m, c in P.sorted_terms()]


def terms_from_json(obj, spec: FieldSpec, nvars: int) -> MultiPoly:
    try:
        return MultiPoly(spec, nvars, [(tuple(m), int(c)) for m, c in obj])
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"bad term list: {exc}") from None


def polymap_from_json(obj: dict) -> tuple[PolyMap, int, int]:
    """Parse ``{"q", "k", "n", "degree", "coords": [[[exps], c], ...]}``."""
    spec = field_from_dict(obj)
    k, n = int(obj["k"]), int(obj["n"])
    coords = [terms_from_json(c, spec, k * n) for c in obj.get("coords", [])]
    return PolyMap(spec, k * n, coords, int(obj.get("degree", 1))), k, n


def polymap_to_json(phi: PolyMap, k: int, n: int) -> dict:
    out = field_dict(phi.field)
    out.update(k=k, n=n, degree=phi.degree, coords=[terms_to_json(c) for c in phi.coords])
    return out


def cover_to_json(P: MultiPoly, cover: SliceCover) -> dict:
    slots = []
    for j in range(cover.k):
        slots.append([{"monomial": list(p), "cofactor": terms_to_json(cover.slots[j][p])}
                      for p in cover.monomials(j)])
    return {
        "format": CERT_FORMAT,
        "field": field_dict(cover.field),
        "k": cover.k,
        "n": cover.n,
        "threshold": str(cover.threshold),
        "polynomial": terms_to_json(P),
        "slots": slots,
        "size": cover.size,
    }


def cover_from_json(obj: dict) -> tuple[MultiPoly, SliceCover]:
    if obj.get("format") != CERT_FORMAT:
        raise InvalidInput(f"not a cover certificate (format {obj.get('format')!r})")
    spec = field_from_dict(obj["field"])
    k, n = int(obj["k"]), int(obj["n"])
    P = terms_from_json(obj["polynomial"], spec, k * n)
    slots = []
    for slot in obj["slots"]:
        slots.append({tuple(e["monomial"]): terms_from_json(e["cofactor"], spec, (k - 1) * n)
                      for e in slot})
    if len(slots) != k:
        raise InvalidInput(f"certificate has {len(slots)} slots, expected {k}")
    cover = SliceCover(spec, k, n, Fraction(obj["threshold"]), slots)
    if obj.get("size") is not None and int(obj["size"]) != cover.size:
        raise InvalidInput("declared size disagrees with the slot contents")
    return P, cover


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"bad JSON: {exc}") from None
