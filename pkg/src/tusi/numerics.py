"""Exact arithmetic substrate: rationals, elements of Q(sqrt d), rational intervals.

Rationals are plain :class:`fractions.Fraction`.  ``QuadExt`` holds ``p + q*sqrt(d)``
with rational ``p, q, d``; all comparisons are decided exactly, never by
floating point.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Union

Rational = Fraction
Number = Union[int, Fraction, "QuadExt"]


class RadicandMismatch(ValueError):
    """Two Q(sqrt d) elements with different radicands were combined."""


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not a rational: {x!r}")


def _isqrt_exact(n: int) -> int | None:
    if n < 0:
        return None
    r = isqrt(n)
    return r if r * r == n else None


@lru_cache(maxsize=4096)
def rational_sqrt(r: Fraction) -> Fraction | None:
    """Exact square root of ``r`` if it is the square of a rational, else None."""
    if r < 0:
        return None
    num = _isqrt_exact(r.numerator)
    if num is None:
        return None
    den = _isqrt_exact(r.denominator)
    if den is None:
        return None
    return Fraction(num, den)


def surd_sign(p, q, d) -> int:
    """Sign of p + q*sqrt(d) for rationals (or ints) with d >= 0."""
    sp = (p > 0) - (p < 0)
    sq = (q > 0) - (q < 0) if d else 0
    if sq == 0:
        return sp
    if sp == 0 or sp == sq:
        return sq
    # opposite signs: compare magnitudes through squares
    lhs = p * p
    rhs = q * q * d
    if lhs > rhs:
        return sp
    if lhs < rhs:
        return sq
    return 0


@dataclass(frozen=True, eq=False)
class QuadExt:
    """The real number ``p + q*sqrt(d)``.

    A perfect-square radicand collapses the element into the rational
    subfield (``q == 0``) at construction time.
    """

    p: Fraction
    q: Fraction = Fraction(0)
    d: Fraction = Fraction(0)

    def __post_init__(self):
        p, q, d = as_fraction(self.p), as_fraction(self.q), as_fraction(self.d)
        if d < 0:
            raise ValueError(f"negative radicand {d}")
        if q:
            r = rational_sqrt(d)
            if r is not None:
                p, q = p + q * r, Fraction(0)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "d", d)

    @classmethod
    def sqrt(cls, d) -> "QuadExt":
        return cls(Fraction(0), Fraction(1), as_fraction(d))

    @property
    def is_rational(self) -> bool:
        return self.q == 0

    def _coerce(self, other) -> "QuadExt":
        if isinstance(other, QuadExt):
            if other.d != self.d and not (other.q == 0 and self.q == 0):
                if other.q == 0:
                    return QuadExt(other.p, 0, self.d)
                if self.q != 0:
                    # sqrt(d') = r * sqrt(d) when d'/d is a rational square
                    r = rational_sqrt(other.d / self.d)
                    if r is None:
                        raise RadicandMismatch(f"sqrt({self.d}) vs sqrt({other.d})")
                    return QuadExt(other.p, other.q * r, self.d)
            return other
        if isinstance(other, (int, Fraction)):
            return QuadExt(Fraction(other), Fraction(0), self.d)
        return NotImplemented

    def _radicand(self, other: "QuadExt") -> Fraction:
        return self.d if self.q != 0 else other.d

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.p + o.p, self.q + o.q, self._radicand(o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.p - o.p, self.q - o.q, self._radicand(o))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d = self._radicand(o)
        return QuadExt(self.p * o.p + self.q * o.q * d, self.p * o.q + self.q * o.p, d)

    __rmul__ = __mul__

    def __neg__(self):
        return QuadExt(-self.p, -self.q, self.d)

    def __pos__(self):
        return self

    def conjugate(self) -> "QuadExt":
        return QuadExt(self.p, -self.q, self.d)

    def norm(self) -> Fraction:
        return self.p * self.p - self.q * self.q * self.d

    def inverse(self) -> "QuadExt":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("QuadExt zero has no inverse")
        return QuadExt(self.p / n, -self.q / n, self.d)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuadExt(self.p / other, self.q / other, self.d)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = QuadExt(Fraction(1), Fraction(0), self.d)
        for _ in range(n):
            out = out * self
        return out

    def sign(self) -> int:
        return surd_sign(self.p, self.q, self.d)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.q == 0 and self.p == other
        if isinstance(other, QuadExt):
            if self.q == 0 and other.q == 0:
                return self.p == other.p
            if self.q == 0 or other.q == 0 or self.p != other.p:
                return False
            if self.d == other.d:
                return self.q == other.q
            r = rational_sqrt(other.d / self.d)
            return r is not None and self.q == other.q * r
        return NotImplemented

    def __hash__(self):
        if self.q == 0:
            return hash(self.p)
        return hash((self.p, self.q * self.q * self.d, self.q > 0))

    def _cmp(self, other) -> int:
        diff = self - other
        if diff is NotImplemented:
            raise TypeError(f"cannot compare QuadExt with {other!r}")
        return diff.sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __float__(self):
        # display only
        return float(self.p) + float(self.q) * float(self.d) ** 0.5

    def __repr__(self):
        return f"QuadExt({self.p}, {self.q}, {self.d})"

    def __str__(self):
        return format_quad(self)


def lift(x, d) -> QuadExt:
    """View a rational (or QuadExt) as an element of Q(sqrt d)."""
    if isinstance(x, QuadExt):
        return x
    return QuadExt(as_fraction(x), Fraction(0), as_fraction(d))


def format_quad(x) -> str:
    if not isinstance(x, QuadExt):
        return str(x)
    if x.q == 0:
        return str(x.p)
    root = f"sqrt({x.d})"
    q = x.q
    if q == 1:
        term = root
    elif q == -1:
        term = f"-{root}"
    else:
        term = f"{q}*{root}"
    if x.p == 0:
        return term
    if term.startswith("-"):
        return f"{x.p} - {term[1:]}"
    return f"{x.p} + {term}"


def qe_arith(x: QuadExt, y: QuadExt, op: str) -> QuadExt:
    """Field arithmetic in Q(sqrt d); ``op`` is ``add``, ``sub`` or ``mul``."""
    if isinstance(x, QuadExt) and isinstance(y, QuadExt) and x.d != y.d:
        raise RadicandMismatch(f"sqrt({x.d}) vs sqrt({y.d})")
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    raise ValueError(f"unknown op {op!r}")


def qe_sign(x) -> int:
    """Exact sign of a rational or of ``p + q*sqrt(d)``."""
    if isinstance(x, QuadExt):
        return x.sign()
    return (x > 0) - (x < 0)


sign = qe_sign


@dataclass(frozen=True)
class Interval:
    """Closed rational interval ``[lo, hi]``."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = as_fraction(self.lo), as_fraction(self.hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, x) -> "Interval":
        return cls(x, x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, x) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    def __contains__(self, x) -> bool:
        return self.contains(x)

    def intersects(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def intersect(self, other: "Interval") -> "Interval":
        return Interval(max(self.lo, other.lo), min(self.hi, other.hi))

    def __add__(self, other):
        if isinstance(other, Interval):
            return Interval(self.lo + other.lo, self.hi + other.hi)
        return Interval(self.lo + other, self.hi + other)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Interval) else -as_fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Interval):
            other = Interval.point(other)
        ends = [self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi]
        return Interval(min(ends), max(ends))

    __rmul__ = __mul__

    def __str__(self):
        return f"[{self.lo}, {self.hi}]"


def _dyadic_exponent(width: Fraction) -> int:
    k = 0
    while Fraction(1, 1 << k) > width:
        k += 1
    return k


def sqrt_enclosure(r, width) -> Interval:
    """Rational ``[lo, hi]`` with ``lo**2 <= r <= hi**2`` and ``hi - lo <= width``.

    Endpoints live on the dyadic grid ``2**-k``; the grids nest, so asking for a
    smaller width never loosens either endpoint.
    """
    r, width = as_fraction(r), as_fraction(width)
    if r < 0:
        raise ValueError(f"square root of negative number {r}")
    if width <= 0:
        raise ValueError("width must be positive")
    exact = rational_sqrt(r)
    if exact is not None:
        return Interval(exact, exact)
    k = _dyadic_exponent(width)
    scale = 1 << k
    # floor(r * 4**k), then the integer square root seeds the bracket
    t = (r.numerator << (2 * k)) // r.denominator
    s = isqrt(t)
    return Interval(Fraction(s, scale), Fraction(s + 1, scale))


def qe_to_interval(x, width) -> Interval:
    """Rational enclosure of ``x`` (rational or QuadExt) of width at most ``width``."""
    width = as_fraction(width)
    if width <= 0:
        raise ValueError("width must be positive")
    if not isinstance(x, QuadExt):
        return Interval.point(as_fraction(x))
    if x.q == 0:
        return Interval.point(x.p)
    root = sqrt_enclosure(x.d, width / abs(x.q))
    if x.q > 0:
        return Interval(x.p + x.q * root.lo, x.p + x.q * root.hi)
    return Interval(x.p + x.q * root.hi, x.p + x.q * root.lo)


def horner(coeffs, x):
    """Evaluate a polynomial given highest-degree-first coefficients."""
    acc = coeffs[0]
    for c in coeffs[1:]:
        acc = acc * x + c
    return acc


_MAX_HALVINGS = 400


def strictly_below(x, pred, start=Fraction(1, 2)) -> Fraction:
    """Rational ``t < x`` satisfying ``pred(t)``, approaching ``x`` from below."""
    w = as_fraction(start)
    for _ in range(_MAX_HALVINGS):
        t = qe_to_interval(x, w).lo - w
        if pred(t):
            return t
        w /= 2
    raise ArithmeticError(f"no rational below {x} satisfies the predicate")


def strictly_above(x, pred, start=Fraction(1, 2)) -> Fraction:
    """Rational ``t > x`` satisfying ``pred(t)``, approaching ``x`` from above."""
    w = as_fraction(start)
    for _ in range(_MAX_HALVINGS):
        t = qe_to_interval(x, w).hi + w
        if pred(t):
            return t
        w /= 2
    raise ArithmeticError(f"no rational above {x} satisfies the predicate")
