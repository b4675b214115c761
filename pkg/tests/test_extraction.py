import math
from decimal import Decimal, getcontext
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from strategies import rationals
from tusi.analysis import Lemma2Class
from tusi.extraction import (
    DigitString,
    NoRootError,
    certify,
    digits_of_value,
    extract_c21_small,
    extract_monotone,
    guard_digits,
    render_rounded,
    taylor_shift,
)
from tusi.forms import CanonicalEquation, Form
from tusi.numerics import Interval, QuadExt
from tusi.oracle import isolate_positive_roots, refine

F = Fraction
getcontext().prec = 60
SQRT3_MINUS_1 = Decimal(3).sqrt() - 1


def sexagesimal(x: Decimal, n: int) -> list[int]:
    out = []
    frac = x - int(x)
    for _ in range(n):
        frac *= 60
        out.append(int(frac))
        frac -= int(frac)
    return out


def c15(a, c, n, base=10):
    return extract_monotone((1, F(a), 0, 0), F(c), Interval(F(0), max(F(1), F(c))), base, n)


def test_exact_integer_root():
    ds = c15(3, 4, 0)
    assert str(ds) == "1" and ds.exact


def test_sqrt3_minus_1_base10():
    ds = c15(3, 2, 6)
    assert str(ds) == "0.732050"
    assert str(SQRT3_MINUS_1).startswith("0.732050")
    assert ds.enclosure.lo <= F(str(SQRT3_MINUS_1)) <= ds.enclosure.hi


def test_sqrt3_minus_1_base60():
    ds = c15(3, 2, 4, base=60)
    assert list(ds.fraction_digits) == sexagesimal(SQRT3_MINUS_1, 4) == [43, 55, 22, 58]
    assert str(ds) == "0;43,55,22,58"


@pytest.mark.parametrize(
    "c, cls, text",
    [
        (2, Lemma2Class.EQUAL, "1.000000000000"),
        (1, Lemma2Class.BELOW, "0.652703644666"),
        (3, Lemma2Class.ABOVE, "1.347296355333"),
    ],
)
def test_extract_c21_small(c, cls, text):
    eq = CanonicalEquation(Form.C21, a=F(3), c=F(c))
    ds = extract_c21_small(eq, cls, 10, 12)
    assert str(ds) == text
    assert certify(ds)
    root = refine(isolate_positive_roots(eq.to_general())[0], eq.to_general(), F(1, 10**14))
    assert root.interval.intersects(ds.enclosure)


def test_c21_small_over_quadratic_field():
    # the reduced equation of x^3 + 1 = 3x, with x0 = 1: 3X^2 - X^3 = 1
    eq = CanonicalEquation(Form.C21, a=QuadExt(0, 1, F(9)), c=F(1))
    assert str(extract_c21_small(eq, Lemma2Class.BELOW, 10, 6)) == "0.652703"


def test_taylor_shift_examples():
    assert taylor_shift([1, 0, 0, 0], 1) == [1, 3, 3, 1]
    assert taylor_shift([-1, 3, 0, 0], 2) == [-1, -3, 0, 4]
    assert taylor_shift([-1, 3, 0, 0], 0) == [-1, 3, 0, 0]


def test_guard_digits():
    assert guard_digits(10) == 3 and guard_digits(60) == 2


def test_no_root():
    with pytest.raises(NoRootError):
        extract_monotone((1, F(3), 0, 0), F(100), Interval(F(0), F(1)))


def test_decreasing_extraction():
    # 3x^2 - x^3 = 2 on (2, 3) is decreasing: root 1 + sqrt(3)
    ds = extract_monotone((-1, F(3), 0, 0), F(2), Interval(F(5, 2), F(3)), 10, 12, increasing=False)
    assert str(ds) == "2.732050807568"


def test_digits_of_value():
    assert str(digits_of_value(QuadExt(0, 1, F(2)), 10, 12)) == "1.414213562373"
    assert str(digits_of_value(F(1, 3), 60, 2)) == "0;20,00"
    assert str(digits_of_value(F(3721, 60), 60, 1)) == "1,2;01"


def test_render_rounded():
    ds = c15(3, 2, 3)
    assert str(ds) == "0.732" and render_rounded(ds) == "0.732"
    ds = c15(3, 2, 5)
    assert str(ds) == "0.73205" and render_rounded(ds) == "0.73205"
    ds = c15(3, 2, 7)
    assert str(ds) == "0.7320508" and render_rounded(ds) == "0.7320508"
    ds = c15(3, 2, 2)
    assert render_rounded(ds) == "0.73"


def test_certificate_rejects_wrong_digits():
    good = c15(3, 2, 6)
    bad = DigitString(10, (0,), (7, 3, 2, 0, 6, 0), Interval(F(73206, 10**5), F(73207, 10**5)),
                      good.certificate)
    assert certify(good) and not certify(bad)


@given(rationals(1, 1000), rationals(1, 1000), st.integers(0, 14), st.sampled_from([10, 60]))
def test_c15_digits_properties(a, c, n, base):
    ds = extract_monotone((1, a, 0, 0), c, Interval(F(0), max(F(1), c)), base, n)
    assert all(0 <= d < base for d in ds.integer_digits + ds.fraction_digits)
    assert ds.enclosure.width <= ds.ulp
    v = ds.value
    assert v <= ds.enclosure.lo and ds.enclosure.hi <= v + ds.ulp
    assert certify(ds)
    p = lambda x: x**3 + a * x * x  # noqa: E731
    assert p(v) <= c and (ds.exact or c < p(v + ds.ulp))


@given(rationals(1, 1000), rationals(1, 1000))
def test_base_independence(a, c):
    d10 = c15(a, c, 12, 10)
    d60 = c15(a, c, 7, 60)
    assert d10.enclosure.intersects(d60.enclosure)
    # converting the base-60 value to base 10 agrees wherever the decimal cell is unambiguous
    k = 10
    lo, hi = d60.enclosure.lo, d60.enclosure.hi
    if math.floor(lo * 10**k) == math.floor(hi * 10**k):
        assert str(d10)[: str(d10).index(".") + k + 1] == str(digits_of_value(lo, 10, k))


@given(rationals(1, 1000), rationals(1, 1000), st.integers(0, 10))
def test_monotone_progress(a, c, n):
    coarse, fine = c15(a, c, n), c15(a, c, n + 1)
    if coarse.exact:
        assert fine.exact
        return
    assert coarse.value <= fine.value < coarse.value + coarse.ulp
    assert fine.ulp * 10 == coarse.ulp


@given(rationals(1, 1000), rationals(1, 1000))
def test_agrees_with_oracle(a, c):
    ds = c15(a, c, 12)
    poly = [1, a, 0, -c]
    (root,) = isolate_positive_roots(poly)
    assert refine(root, poly, F(1, 10**12)).interval.intersects(ds.enclosure)
