from dataclasses import dataclass, field
from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from tusi.forms import CanonicalEquation, Form
from tusi.numerics import Interval, QuadExt, horner
from tusi.oracle import (
    cauchy_bound,
    count_roots,
    differential_check,
    isolate_positive_roots,
    refine,
    squarefree,
    sturm_sequence,
)
from tusi.pipeline import solve

F = Fraction


def test_isolate_examples():
    roots = isolate_positive_roots([1, -3, 0, 2])
    assert len(roots) == 2
    assert refine(roots[0], [1, -3, 0, 2], F(1, 10**12)).interval == Interval(1, 1)
    r = refine(roots[1], [1, -3, 0, 2], F(1, 10**12))
    assert r.interval.width <= F(1, 10**12)
    assert r.interval.lo <= QuadExt(1, 1, F(3)) <= r.interval.hi
    assert all(x.multiplicity == 1 for x in roots)

    (double,) = isolate_positive_roots([1, -3, 0, 4])
    assert double.multiplicity == 2
    assert refine(double, [1, -3, 0, 4], F(1, 10**12)).interval == Interval(2, 2)
    assert isolate_positive_roots([1, -3, 0, 5]) == []


def test_isolate_rational_roots_exact():
    roots = isolate_positive_roots([1, -6, 11, -6])
    roots = [refine(r, [1, -6, 11, -6], F(1, 10**6)) for r in roots]
    assert [r.interval for r in roots] == [Interval(1, 1), Interval(2, 2), Interval(3, 3)]
    (triple,) = isolate_positive_roots([1, -3, 3, -1])
    assert triple.multiplicity == 3


def test_refine_keeps_narrow_interval():
    (r,) = isolate_positive_roots([1, 0, -2])
    narrow = refine(r, [1, 0, -2], F(1, 100))
    assert refine(narrow, [1, 0, -2], F(1, 2)) == narrow


@given(st.lists(st.integers(-12, 12), min_size=1, max_size=3), st.integers(1, 3))
def test_constructed_roots(roots, lead):
    poly = [F(lead)]
    for r in roots:
        r = F(r, 2)
        poly = [a - r * b for a, b in zip(poly + [0], [0] + poly)]
    found = isolate_positive_roots(poly)
    positive = sorted(set(F(r, 2) for r in roots if r > 0))
    assert len(found) == len(positive)
    for iso, r in zip(found, positive):
        assert refine(iso, poly, F(1, 10**9)).interval == Interval(r, r)
        assert iso.multiplicity == sum(1 for x in roots if F(x, 2) == r)


@given(st.integers(1, 5), st.integers(-20, 20), st.integers(-20, 20), st.integers(-20, 20))
def test_sturm_count_vs_grid(a3, a2, a1, a0):
    p = [F(a3), F(a2), F(a1), F(a0)]
    if a0 == 0:
        return
    s = squarefree(p)
    U = cauchy_bound(s)
    n = count_roots(sturm_sequence(s), F(0), U)
    grid = [U * k / 2000 for k in range(2001)]
    signs = [horner(s, x) for x in grid]
    changes = sum(1 for u, v in zip(signs, signs[1:]) if u * v < 0 or (v == 0 and u != 0))
    assert changes <= n <= 3
    assert (changes - n) % 2 == 0


@dataclass
class Fake:
    case: str
    roots: list = field(default_factory=list)
    x0: object = None


@dataclass
class FakeRoot:
    enclosure: Interval
    multiplicity: int = 1


def test_differential_check_examples():
    for text in ("x^3 + 2 = 3x^2", "x^3 + 8x + 4 = 7x^2", "x^3 + 5 = 3x^2", "x^3 + 4 = 3x^2"):
        assert solve(text, oracle=False) is not None
        rep = solve(text)
        assert rep.oracle.agree, rep.oracle.discrepancies
    c24 = solve("x^3 + 8x + 4 = 7x^2")
    assert c24.roots[0].digits.exact and c24.roots[0].enclosure.lo == 2
    large = QuadExt(F(5, 2), F(1, 2), F(33))
    assert c24.roots[1].enclosure.lo <= large <= c24.roots[1].enclosure.hi


def test_differential_check_flags_errors():
    eq = CanonicalEquation(Form.C21, a=F(3), c=F(2))
    wrong_case = differential_check(eq, Fake("impossible"))
    assert not wrong_case.agree and wrong_case.verdict == "disagree"
    misplaced = Fake("two", [FakeRoot(Interval(1, 1)), FakeRoot(Interval(F(5, 2), F(26, 10)))], x0=F(2))
    assert not differential_check(eq, misplaced).agree
    good = Fake("two", [FakeRoot(Interval(1, 1)), FakeRoot(Interval(F(27, 10), F(28, 10)))], x0=F(2))
    assert differential_check(eq, good).agree
