from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from strategies import two_root_equations
from tusi.extraction import certify
from tusi.forms import Form, GeneralPoly, ParseError
from tusi.numerics import QuadExt
from tusi.pipeline import decimal, solve

F = Fraction


def digits(rep):
    return [str(r.digits) for r in rep.roots]


def test_worked_c21():
    rep = solve("x^3 + 2 = 3x^2", digits=6)
    assert rep.variant == "TwoRoots" and rep.form is Form.C21
    assert digits(rep) == ["1.000000", "2.732050"]
    assert rep.roots[0].digits.exact
    assert rep.lemma2.value == "Equal"
    assert [s.kind for s in rep.steps] == ["shift_plus", "offset"]


def test_impossible_and_double():
    rep = solve("x^3 + 5 = 3x^2")
    assert rep.variant == "Impossible" and rep.c0 == 4 and rep.roots == []
    rep = solve("x^3 + 4 = 3x^2")
    assert rep.variant == "DoubleRoot" and rep.roots[0].multiplicity == 2
    assert rep.roots[0].exact == 2


def test_c22_order_note():
    rep = solve("x^3 + 1 = 3x", digits=6)
    assert digits(rep) == ["0.347296", "1.532088"]
    assert rep.notes and rep.oracle.agree


@pytest.mark.parametrize(
    "text, form, variant, expected",
    [
        ("x^2 + 2x = 3", Form.Q7, "UniqueRoot", ["1.0000"]),
        ("x^2 = 2x + 3", Form.Q8, "UniqueRoot", ["3.0000"]),
        ("x^2 + 2 = 3x", Form.Q9, "TwoRoots", ["1.0000", "2.0000"]),
        ("x^2 + 1 = 2x", Form.Q9, "DoubleRoot", ["1.0000"]),
        ("x^2 + 2 = x", Form.Q9, "Impossible", []),
        ("x^3 + x^2 = 2", Form.C15, "UniqueRoot", ["1.0000"]),
        ("x^3 + 11x = 6x^2 + 6", Form.OTHER, "SeveralRoots", ["1.0000", "2.0000", "3.0000"]),
        ("x^3 + x^2 + x = 3", Form.OTHER, "UniqueRoot", ["1.0000"]),
        ("x^3 = 2x^2", Form.LINEAR, "UniqueRoot", ["2.0000"]),
        ("x^3 + x + 1 = 0", Form.NONE, "Impossible", []),
        ("x^3 + 3x + 1 = x^2", Form.C24, "Impossible", []),
    ],
)
def test_other_forms(text, form, variant, expected):
    rep = solve(text, digits=4)
    assert (rep.form, rep.variant, digits(rep)) == (form, variant, expected)
    assert rep.oracle.agree, rep.oracle.discrepancies


def test_double_root_other_cubic():
    # (x - 1)^2 (x - 3) = x^3 - 5x^2 + 7x - 3
    rep = solve("x^3 + 7x = 5x^2 + 3", digits=4)
    assert [r.multiplicity for r in rep.roots] == [2, 1]
    assert rep.oracle.agree


def test_accepts_polynomials_and_rejects_garbage():
    rep = solve(GeneralPoly.from_coeffs([1, -3, 0, 2]), digits=3)
    assert rep.variant == "TwoRoots"
    with pytest.raises(ParseError):
        solve("x^3 + + 2")


def test_decimal_rendering():
    assert decimal(QuadExt(1, 1, F(3)), 6) == "2.732050"
    assert decimal(QuadExt(1, -1, F(3)), 6) == "-0.732050"


@given(two_root_equations(hi=60), st.sampled_from([10, 60]), st.integers(0, 10))
def test_pipeline_properties(eq, base, n):
    rep = solve(eq, base=base, digits=n)
    assert rep.oracle.agree, rep.oracle.discrepancies
    for r in rep.roots:
        assert certify(r.digits)
        assert r.enclosure.width <= r.digits.ulp
        assert len(r.chain) <= 4
    if rep.variant == "TwoRoots":
        x1, x2 = rep.roots
        assert x1.enclosure.hi <= x2.enclosure.lo


@given(st.integers(-9, 9), st.integers(-9, 9), st.integers(-9, 9), st.integers(1, 3))
def test_every_cubic_agrees_with_oracle(A, B, C, lead):
    poly = GeneralPoly.from_coeffs([lead, A, B, C])
    rep = solve(poly, digits=5)
    assert rep.oracle.agree, (str(poly), rep.oracle.discrepancies)


@given(two_root_equations(hi=60))
def test_base10_base60_overlap(eq):
    r10, r60 = solve(eq, 10, 12, oracle=False), solve(eq, 60, 7, oracle=False)
    for a, b in zip(r10.roots, r60.roots):
        assert a.enclosure.intersects(b.enclosure)
