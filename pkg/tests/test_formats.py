from fractions import Fraction

import pytest

from slicelab import formats
from slicelab.algebra import MultiPoly, UniPoly, field_build, field_of_order
from slicelab.encoding import EquationSpec, build_equation_map
from slicelab.errors import InvalidEquation, InvalidInput
from slicelab.search import PolySet
from slicelab.slicerank import build_cover, indicator_poly, verify_cover

F3 = field_build(3)


def test_poly_text():
    assert formats.parse_poly("1 2 0 1", F3) == UniPoly(F3, (1, 2, 0, 1))
    assert formats.format_poly(UniPoly(F3, (1, 2, 0, 1))) == "1 2 0 1"
    assert formats.parse_poly("0", F3).is_zero()
    with pytest.raises(InvalidInput):
        formats.parse_poly("1 x", F3)
    with pytest.raises(InvalidInput):
        formats.parse_poly("3", F3)


def test_field_text():
    assert formats.parse_field("q=3") == F3
    F9 = formats.parse_field("q=3^2 modulus=2,2,1")
    assert F9.q == 9 and F9.modulus == (2, 2, 1)
    assert formats.parse_field(formats.format_field(F9)) == F9
    F9b = formats.parse_field("q=9 modulus=1,0,1")  # t^2 + 1 is irreducible over F_3
    assert F9b.modulus == (1, 0, 1)


def test_equation_roundtrip():
    F4 = field_of_order(4)
    eq = EquationSpec(F4, 3, ((1, 2), (3,), (2, 2)), d=1)
    text = formats.format_equation(eq)
    assert formats.parse_equation(text) == eq


def test_equation_file_validation():
    with pytest.raises(InvalidEquation):
        formats.parse_equation("q: 3\nr: 2\nk: 2\na1: 1\na2: 1\n")
    with pytest.raises(InvalidInput):
        formats.parse_equation("q: 3\nr: 2\nk: 3\na1: 1\na2: 2\n")
    with pytest.raises(InvalidInput):
        formats.parse_equation("q: 3\nr 2\n")
    with pytest.raises(InvalidInput):
        formats.parse_equation("q: 6\nr: 1\na1: 1\na2: 5\n")


def test_polyset_roundtrip():
    A = PolySet(F3, 2, (UniPoly(F3, (1, 2)), UniPoly(F3, ()), UniPoly(F3, (1, 2))))
    assert len(A) == 2
    text = formats.format_polyset(A)
    assert text.splitlines()[0] == "# q=3 n=2"
    assert formats.parse_polyset(text) == A
    with pytest.raises(InvalidInput):
        formats.parse_polyset("0\n1\n")
    with pytest.raises(InvalidInput):
        formats.parse_polyset("q=3 n=1\n0 1\n")


def test_cover_certificate_roundtrip():
    eq = EquationSpec(F3, 2, ((1,), (1,), (1,)))
    P = indicator_poly(build_equation_map(eq, 1))
    cover = build_cover(P, 3, 1, Fraction(4, 3))
    text = formats.dumps(formats.cover_to_json(P, cover))
    P2, cover2 = formats.cover_from_json(formats.loads(text))
    assert P2 == P and cover2.slots == cover.slots and cover2.threshold == Fraction(4, 3)
    assert verify_cover(P2, cover2).passed
    assert formats.dumps(formats.cover_to_json(P2, cover2)) == text


def test_certificate_size_mismatch():
    obj = formats.cover_to_json(MultiPoly.one(F3, 2), build_cover(MultiPoly.one(F3, 2), 2, 1, 0))
    obj["size"] = 5
    with pytest.raises(InvalidInput):
        formats.cover_from_json(obj)


def test_polymap_json_roundtrip():
    eq = EquationSpec(F3, 2, ((1,), (2,)))
    phi = build_equation_map(eq, 2)
    obj = formats.polymap_to_json(phi, 2, 2)
    phi2, k, n = formats.polymap_from_json(obj)
    assert (k, n) == (2, 2) and phi2 == phi
