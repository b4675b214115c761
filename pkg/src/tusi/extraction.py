"""Digit-by-digit root extraction in base 10 or 60.

A modern Ruffini-Horner reconstruction: the polynomial (with coefficients in
Z[sqrt D] after clearing denominators) is re-centred on the current estimate
by synthetic division and its root scaled by the base, so that each new digit
is the integer part of the root of the transformed polynomial.  Digits are
truncated: the value v satisfies v <= root < v + base**-n.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .forms import CanonicalEquation, Form, FormError
from .numerics import (
    Interval,
    QuadExt,
    as_fraction,
    horner,
    qe_sign,
    qe_to_interval,
    strictly_below,
    surd_sign,
)


class ExtractionError(ArithmeticError):
    """Sign tests were inconsistent with a monotone bracket (a bug signal)."""


class NoRootError(ValueError):
    """The target value is not attained on the bracket."""


class CertificationError(ArithmeticError):
    """A digit string failed its exact sign-change certificate."""


def guard_digits(base: int) -> int:
    """ceil(8 * log_base 2) extra digits carried in compound computations."""
    return math.ceil(8 * math.log(2) / math.log(base))


@dataclass(frozen=True)
class DigitString:
    base: int
    integer_digits: tuple
    fraction_digits: tuple
    enclosure: Interval
    certificate: tuple | None = field(default=None, compare=False, repr=False)

    @property
    def n(self) -> int:
        return len(self.fraction_digits)

    @property
    def ulp(self) -> Fraction:
        return Fraction(1, self.base**self.n)

    @property
    def value(self) -> Fraction:
        v = 0
        for dgt in self.integer_digits:
            v = v * self.base + dgt
        frac = 0
        for dgt in self.fraction_digits:
            frac = frac * self.base + dgt
        return v + Fraction(frac, self.base**self.n)

    @property
    def exact(self) -> bool:
        return self.enclosure.is_point

    def __str__(self):
        return render(self)


def _int_digits(m: int, base: int) -> tuple:
    if m == 0:
        return (0,)
    out = []
    while m:
        m, r = divmod(m, base)
        out.append(r)
    return tuple(reversed(out))


def _from_scaled(k: int, base: int, n: int) -> tuple[tuple, tuple]:
    """Split k / base**n (k >= 0) into integer and fraction digits."""
    ip, fp = divmod(k, base**n)
    frac = []
    for _ in range(n):
        fp, r = divmod(fp, base)
        frac.append(r)
    return _int_digits(ip, base), tuple(reversed(frac))


def render(ds: DigitString) -> str:
    if ds.base <= 10:
        head = "".join(str(x) for x in ds.integer_digits)
        if not ds.fraction_digits:
            return head
        return head + "." + "".join(str(x) for x in ds.fraction_digits)
    head = ",".join(str(x) for x in ds.integer_digits)
    if not ds.fraction_digits:
        return head
    return head + ";" + ",".join(f"{x:02d}" for x in ds.fraction_digits)


def render_rounded(ds: DigitString) -> str:
    """Display-only rounding to nearest at the same number of digits.

    Whether the root lies past v + ulp/2 is decided exactly from the
    certificate when there is one.
    """
    half = ds.value + ds.ulp / 2
    if ds.exact or ds.certificate is None:
        up = ds.enclosure.mid >= half
    else:
        poly, target, increasing = ds.certificate
        s = evaluate_sign(poly, target, half)
        up = (s <= 0) if increasing else (s >= 0)
    k = math.floor(ds.value * ds.base**ds.n) + (1 if up else 0)
    ip, fp = _from_scaled(k, ds.base, ds.n)
    return render(DigitString(ds.base, ip, fp, ds.enclosure))


# ----------------------------------------------------------------------------
# exact polynomial helpers


def taylor_shift(poly, pivot):
    """Coefficients of p(pivot + X), highest degree first, by repeated synthetic division."""
    a = list(poly)
    n = len(a) - 1
    for i in range(n):
        for j in range(1, n - i + 1):
            a[j] = a[j] + a[j - 1] * pivot
    return a


def _surd_ints(coeffs) -> tuple[list[list[int]], int]:
    """Clear denominators: coefficients p + q*sqrt(d) -> integer pairs over sqrt(D)."""
    d = None
    for c in coeffs:
        if isinstance(c, QuadExt) and c.q != 0:
            if d is not None and c.d != d:
                raise ValueError("coefficients use different radicands")
            d = c.d
    d = d if d is not None else Fraction(0)
    D = d.numerator * d.denominator  # sqrt(d) = sqrt(D) / d.denominator
    pairs = []
    for c in coeffs:
        if isinstance(c, QuadExt):
            pairs.append((c.p, c.q / d.denominator if c.q else Fraction(0)))
        else:
            pairs.append((as_fraction(c), Fraction(0)))
    L = lcm(*(x.denominator for pq in pairs for x in pq))
    return [[int(p * L), int(q * L)] for p, q in pairs], D


def _sign_int(pairs, D, t: int) -> int:
    ap, aq = pairs[0]
    for p, q in pairs[1:]:
        ap, aq = ap * t + p, aq * t + q
    return surd_sign(ap, aq, D)


def _sign_rat(pairs, D, t: Fraction) -> int:
    k, s = t.numerator, t.denominator
    ap, aq = pairs[0]
    spow = s
    for p, q in pairs[1:]:
        ap, aq = ap * k + p * spow, aq * k + q * spow
        spow *= s
    return surd_sign(ap, aq, D)


def _shift_int(pairs, k: int):
    a = [list(c) for c in pairs]
    n = len(a) - 1
    for i in range(n):
        for j in range(1, n - i + 1):
            a[j][0] += a[j - 1][0] * k
            a[j][1] += a[j - 1][1] * k
    return a


def _scale_int(pairs, base: int):
    return [[p * base**i, q * base**i] for i, (p, q) in enumerate(pairs)]


def _greatest(lo: int, hi: int, ok) -> int:
    """Greatest integer in [lo, hi] with ok(); ok(lo) must hold and ok be monotone."""
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if ok(mid):
            lo = mid
        else:
            hi = mid - 1
    return lo


def evaluate_sign(poly, target, t) -> int:
    """Exact sign of poly(t) - target for rational or Q(sqrt d) data."""
    return qe_sign(horner(poly, t) - target)


def certify(ds: DigitString) -> bool:
    """Exact sign-change test on the enclosure: poly(lo) <= target < poly(hi)."""
    if ds.certificate is None:
        raise CertificationError("digit string carries no certificate")
    poly, target, increasing = ds.certificate
    s = 1 if increasing else -1
    enc = ds.enclosure
    if enc.is_point:
        return evaluate_sign(poly, target, enc.lo) == 0
    return s * evaluate_sign(poly, target, enc.lo) <= 0 < s * evaluate_sign(poly, target, enc.hi)


def _exact_rational(x: Fraction, base: int, n: int, certificate=None) -> DigitString:
    k = math.floor(x * base**n)
    ip, fp = _from_scaled(k, base, n)
    return DigitString(base, ip, fp, Interval.point(x), certificate)


def extract_monotone(poly, target, bracket: Interval, base: int = 10, n_digits: int = 12,
                     increasing: bool = True) -> DigitString:
    """Digits of the unique solution of poly(x) = target in ``bracket``.

    ``poly`` (highest degree first, rational or QuadExt coefficients) must be
    strictly monotone on the bracket in the stated direction.
    """
    if base < 2:
        raise ValueError("base must be >= 2")
    if n_digits < 0:
        raise ValueError("n_digits must be >= 0")
    lo, hi = as_fraction(bracket.lo), as_fraction(bracket.hi)
    if lo < 0:
        raise ValueError("bracket must lie in [0, inf)")
    cert = (tuple(poly), target, increasing)
    coeffs = list(poly)
    coeffs[-1] = coeffs[-1] - target
    if not increasing:
        coeffs = [-c for c in coeffs]
    P, D = _surd_ints(coeffs)

    s_lo, s_hi = _sign_rat(P, D, lo), _sign_rat(P, D, hi)
    if s_lo > 0 or s_hi < 0:
        raise NoRootError(f"target not attained on [{lo}, {hi}]")
    if s_lo == 0:
        return _exact_rational(lo, base, n_digits, cert)
    if s_hi == 0:
        return _exact_rational(hi, base, n_digits, cert)

    # root r lies in the open bracket; blo < r < bhi in the current variable
    blo, bhi = lo, hi

    def below(t: int, cur) -> bool:
        if t <= blo:
            return True
        if t >= bhi:
            return False
        return _sign_int(cur, D, t) <= 0

    m0 = _greatest(math.floor(lo), math.ceil(hi), lambda t: below(t, P))
    exact = m0 > lo and _sign_int(P, D, m0) == 0
    cur = _shift_int(P, m0)
    blo, bhi = blo - m0, bhi - m0
    digits = []
    for _ in range(n_digits):
        if exact:
            digits.append(0)
            continue
        cur = _scale_int(cur, base)
        blo, bhi = blo * base, bhi * base
        dgt = _greatest(0, base - 1, lambda t: below(t, cur))
        if dgt > blo and _sign_int(cur, D, dgt) == 0:
            exact = True
        digits.append(dgt)
        cur = _shift_int(cur, dgt)
        blo, bhi = blo - dgt, bhi - dgt

    k = m0
    for dgt in digits:
        k = k * base + dgt
    v = Fraction(k, base**n_digits)
    if exact:
        enc = Interval.point(v)
    else:
        enc = Interval(max(v, lo), min(v + Fraction(1, base**n_digits), hi))
    ds = DigitString(base, _int_digits(m0, base), tuple(digits), enc, cert)
    if not certify(ds):
        raise ExtractionError(f"certificate failed on {enc}; bracket not monotone?")
    return ds


def digits_from_enclosure(enc: Interval, base: int, n: int, below, certificate,
                          clamp: Interval | None = None) -> DigitString:
    """Truncated digits of a root known to lie in ``enc``.

    ``below(t)`` decides ``t <= root`` exactly for rational t.  The candidates
    are the grid points base**-n covering ``enc``; the greatest one below the
    root wins.  ``clamp`` (a bracket on the monotone stretch) bounds the
    reported enclosure.
    """
    scale = base**n
    k_lo = math.floor(enc.lo * scale)
    k_hi = math.floor(enc.hi * scale)
    k = _greatest(k_lo, k_hi, lambda j: below(Fraction(j, scale)))
    v = Fraction(k, scale)
    poly, target, _ = certificate
    if evaluate_sign(poly, target, v) == 0:
        out = Interval.point(v)
    else:
        lo, hi = max(v, enc.lo), min(v + Fraction(1, scale), enc.hi)
        if clamp is not None:
            lo, hi = max(lo, clamp.lo), min(hi, clamp.hi)
        out = Interval(lo, hi)
    ip, fp = _from_scaled(k, base, n)
    return DigitString(base, ip, fp, out, certificate)


def digits_of_value(x, base: int, n: int, certificate=None) -> DigitString:
    """Truncated digits of an exactly known rational or Q(sqrt d) value."""
    if not isinstance(x, QuadExt) or x.q == 0:
        x = x.p if isinstance(x, QuadExt) else as_fraction(x)
        return _exact_rational(x, base, n, certificate)
    scale = base**n
    y = x * scale
    iv = qe_to_interval(y, Fraction(1, 4))
    k = _greatest(math.floor(iv.lo), math.floor(iv.hi), lambda j: qe_sign(y - j) >= 0)
    v = Fraction(k, scale)
    tight = qe_to_interval(x, Fraction(1, scale * 2**20))
    enc = Interval(max(v, tight.lo), min(v + Fraction(1, scale), tight.hi))
    ip, fp = _from_scaled(k, base, n)
    return DigitString(base, ip, fp, enc, certificate)


def extract_c21_small(eq: CanonicalEquation, lemma2, base: int = 10, n_digits: int = 12) -> DigitString:
    """Small root of ax^2 - x^3 = c by the Lemma-2 dispatch.

    Equal: the root is a/3 exactly.  Below: extract directly on (0, a/3),
    where a - 3x > 0.  Above: extract y = 2a/3 - x1 < a/3 from the
    transformed equation a*y^2 - y^3 = c0 - c and map back.
    """
    return extract_c21_small_traced(eq, lemma2, base, n_digits)[0]


def extract_c21_small_traced(eq: CanonicalEquation, lemma2, base: int = 10, n_digits: int = 12):
    """As :func:`extract_c21_small`, also returning the lemma-2 step and y (or None, None)."""
    from .analysis import Lemma2Class
    from .reduction import lemma2_transform

    if eq.form is not Form.C21:
        raise FormError(f"expected form C21, got {eq.form}")
    a, c = eq.a, eq.c
    g = (-1, a, 0, 0)
    cert = (g, c, True)
    third = a / 3
    if lemma2 is Lemma2Class.EQUAL:
        return digits_of_value(third, base, n_digits, cert), None, None
    if lemma2 is Lemma2Class.BELOW:
        if isinstance(third, QuadExt) and third.q != 0:
            top = strictly_below(third, lambda t: t > 0 and qe_sign(horner(g, t) - c) > 0)
        else:
            top = as_fraction(third.p if isinstance(third, QuadExt) else third)
        return extract_monotone(g, c, Interval(Fraction(0), top), base, n_digits), None, None

    step = lemma2_transform(eq)
    pivot = step.pivot  # 2a/3
    guard = guard_digits(base)

    def below(t):
        if t <= 0:
            return True
        if qe_sign(pivot - t) <= 0:
            return False
        return qe_sign(horner(g, t) - c) <= 0

    for _ in range(6):
        y = extract_c21_small(step.target, Lemma2Class.BELOW, base, n_digits + guard)
        w = y.ulp / 4
        piv = qe_to_interval(pivot, w)
        enc = Interval(max(Fraction(0), piv.lo - y.enclosure.hi), piv.hi - y.enclosure.lo)
        ds = digits_from_enclosure(enc, base, n_digits, below, cert,
                                   clamp=Interval(qe_to_interval(third, w).lo, piv.hi))
        if certify(ds):
            return ds, step, y
        guard *= 2
    raise CertificationError("small root of C21 could not be certified")
