"""Positivity domain, exact maximum, existence trichotomy and root localization.

For the five forms that may be impossible, the equation is written f(x) = c
with f(x) = -x^3 + alpha*x^2 + beta*x.  Everything about the maximum lives
in Q(sqrt d), d = alpha^2 + 3*beta:

    x0 = (alpha + sqrt d) / 3,   c0 = f(x0).
"""
from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .forms import CanonicalEquation, Form, FormError, TargetFunction
from .numerics import (
    Interval,
    QuadExt,
    as_fraction,
    horner,
    qe_sign,
    qe_to_interval,
    strictly_above,
    strictly_below,
)


class PositivityImpossible(ValueError):
    """f(x) <= 0 for every x > 0, so f(x) = c has no positive root."""


@dataclass(frozen=True)
class MaximumReport:
    d: Fraction
    x0: QuadExt
    c0: QuadExt
    domain_hi: QuadExt
    domain_lo: QuadExt
    x_min: QuadExt  # local minimum of f, (alpha - sqrt d)/3


class Lemma2Class(str, enum.Enum):
    EQUAL = "Equal"
    ABOVE = "Above"
    BELOW = "Below"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class RootSite:
    """Where one distinct positive root lives.

    Either ``exact`` is known (a multiple root at a critical point), or
    ``bracket`` holds exactly one root on a stretch where ``poly - target``
    is strictly monotone in the direction given by ``increasing``.
    """

    poly: tuple
    target: object
    bracket: Interval | None = None
    increasing: bool = True
    exact: object = None
    multiplicity: int = 1


_VARIANTS = {
    "impossible": "Impossible",
    "double": "DoubleRoot",
    "two": "TwoRoots",
    "unique": "UniqueRoot",
    "several": "SeveralRoots",
}


@dataclass(frozen=True)
class CaseOutcome:
    kind: str
    x0: QuadExt | None = None
    sites: tuple = field(default=())
    reason: str = ""

    @property
    def variant(self) -> str:
        return _VARIANTS[self.kind]

    @property
    def bracket_small(self) -> Interval | None:
        return self.sites[0].bracket if self.kind == "two" else None

    @property
    def bracket_large(self) -> Interval | None:
        return self.sites[1].bracket if self.kind == "two" else None

    @property
    def bracket(self) -> Interval | None:
        return self.sites[0].bracket if self.kind == "unique" else None


def critical_point(tf: TargetFunction) -> MaximumReport:
    """Exact critical point, maximum and positivity domain of f."""
    alpha, beta = as_fraction(tf.alpha), as_fraction(tf.beta)
    # f(x) = x * (beta + alpha*x - x^2) is positive between the roots of the bracket
    e = alpha * alpha + 4 * beta
    if e <= 0 or (alpha <= 0 and beta <= 0):
        raise PositivityImpossible(
            f"f(x) <= 0 for all x > 0 (alpha={alpha}, beta={beta})"
        )
    d = alpha * alpha + 3 * beta
    x0 = QuadExt(alpha / 3, Fraction(1, 3), d)
    x_min = QuadExt(alpha / 3, Fraction(-1, 3), d)
    c0 = tf.f(x0)
    hi = QuadExt(alpha / 2, Fraction(1), e / 4)
    lo = QuadExt(alpha / 2, Fraction(-1), e / 4)
    if lo.sign() <= 0:
        lo = QuadExt(Fraction(0), Fraction(0), e / 4)
    return MaximumReport(d=d, x0=x0, c0=c0, domain_hi=hi, domain_lo=lo, x_min=x_min)


def _two_root_sites(tf: TargetFunction, mr: MaximumReport) -> tuple[RootSite, RootSite]:
    f, c, x0 = tf.f, tf.c, mr.x0
    dlo, dhi = mr.domain_lo, mr.domain_hi

    s_lo = strictly_above(dlo, lambda t: t > 0 and qe_sign(x0 - t) > 0 and f(t) < c)
    s_hi = strictly_below(x0, lambda t: t > s_lo and f(t) > c)
    l_lo = strictly_above(x0, lambda t: f(t) > c)
    l_hi = strictly_below(dhi, lambda t: t > l_lo and f(t) < c)
    poly = tf.coeffs
    small = RootSite(poly, c, Interval(s_lo, s_hi), increasing=True)
    large = RootSite(poly, c, Interval(l_lo, l_hi), increasing=False)
    return small, large


def decide_case(tf: TargetFunction, mr: MaximumReport | None = None) -> CaseOutcome:
    """Impossible / DoubleRoot / TwoRoots from the exact sign of c0 - c."""
    if mr is None:
        try:
            mr = critical_point(tf)
        except PositivityImpossible as exc:
            return CaseOutcome("impossible", reason=str(exc))
    s = qe_sign(mr.c0 - tf.c)
    if s < 0:
        return CaseOutcome("impossible", x0=mr.x0, reason="c > c0")
    if s == 0:
        site = RootSite(tf.coeffs, tf.c, exact=mr.x0, multiplicity=2)
        return CaseOutcome("double", x0=mr.x0, sites=(site,))
    return CaseOutcome("two", x0=mr.x0, sites=_two_root_sites(tf, mr))


def lemma2_classify(eq: CanonicalEquation) -> Lemma2Class:
    """Position of the small root of ax^2 - x^3 = c relative to a/3.

    Decided by comparing c with c0/2 = 2a^3/27.  Works for rational and
    Q(sqrt d) coefficients alike.
    """
    if eq.form is not Form.C21:
        raise FormError(f"Lemma 2 applies to form C21, not {eq.form}")
    a = eq.a
    s = qe_sign(eq.c - a * a * a * Fraction(2, 27))
    if s == 0:
        return Lemma2Class.EQUAL
    return Lemma2Class.ABOVE if s > 0 else Lemma2Class.BELOW


@dataclass
class MaximumCheck:
    passed: bool
    checked: int
    witnesses: list = field(default_factory=list)


def _inner_rationals(lo, hi) -> tuple[Fraction, Fraction]:
    """Rationals L <= R with lo <= L and R <= hi, R < hi strictly when hi is irrational."""
    w = Fraction(1, 4)
    for _ in range(200):
        L = qe_to_interval(lo, w).hi
        R = qe_to_interval(hi, w).lo
        if L < R:
            return L, R
        w /= 4
    raise ArithmeticError(f"empty stretch between {lo} and {hi}")


def verify_maximum(tf: TargetFunction, mr: MaximumReport, samples: int = 10, rng=None) -> MaximumCheck:
    """Sample rationals on both sides of x0 and check f < c0 exactly."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = rng or random.Random()
    left = _inner_rationals(mr.domain_lo, mr.x0)
    right = _inner_rationals(mr.x0, mr.domain_hi)
    out = MaximumCheck(passed=True, checked=0)
    scale = 10**9
    for L, R in (left, right):
        ts = [Fraction(rng.randint(1, scale - 1), scale) for _ in range(samples - 1)]
        ts.append(Fraction(1, scale) if (L, R) == right else Fraction(scale - 1, scale))
        for t in ts:
            u = L + t * (R - L)
            if u == mr.x0:
                continue
            out.checked += 1
            if qe_sign(tf.f(u) - mr.c0) >= 0:
                out.passed = False
                out.witnesses.append((u, tf.f(u)))
    return out


def monotone_sites(eq: CanonicalEquation) -> CaseOutcome:
    """Root sites for forms that are never impossible (C15, OtherCubic).

    The cubic P = x^3 + A x^2 + B x + C has P(0) < 0; its critical points
    split (0, inf) into monotone stretches that are examined exactly.
    """
    if eq.form is Form.C15:
        poly = (1, eq.a, 0, 0)
        hi = max(Fraction(1), qe_to_interval(eq.c, Fraction(1)).hi)
        site = RootSite(poly, eq.c, Interval(Fraction(0), hi))
        return CaseOutcome("unique", sites=(site,))
    if eq.form is not Form.OTHER:
        raise FormError(f"no monotone analysis for {eq.form}")
    coeffs = tuple(eq.poly.trimmed)
    _, A, B, C = coeffs
    P = lambda t: horner(coeffs, t)  # noqa: E731
    U = 1 + max(abs(A), abs(B), abs(C))
    D = A * A - 3 * B

    def rising_after(start) -> RootSite:
        if qe_sign(start) <= 0:
            lo = Fraction(0)
        else:
            lo = strictly_above(start, lambda t: P(t) < 0)
        return RootSite(coeffs, 0, Interval(lo, U), increasing=True)

    if D == 0 and P(-A / 3) == 0:
        site = RootSite(coeffs, 0, exact=-A / 3, multiplicity=3)
        return CaseOutcome("several", sites=(site,))
    if D <= 0:
        return CaseOutcome("unique", sites=(rising_after(Fraction(0)),))
    xm = QuadExt(-A / 3, Fraction(-1, 3), D)  # local max
    xM = QuadExt(-A / 3, Fraction(1, 3), D)  # local min
    if xm.sign() <= 0:
        return CaseOutcome("unique", sites=(rising_after(xM),))
    v1, v2 = P(xm).sign(), P(xM).sign()
    if v1 < 0:
        return CaseOutcome("unique", sites=(rising_after(xM),))
    if v1 == 0:
        sites = (RootSite(coeffs, 0, exact=xm, multiplicity=2), rising_after(xM))
        return CaseOutcome("several", sites=sites)
    first = RootSite(
        coeffs, 0, Interval(Fraction(0), strictly_below(xm, lambda t: t > 0 and P(t) > 0))
    )
    if v2 > 0:
        return CaseOutcome("unique", sites=(first,))
    if v2 == 0:
        return CaseOutcome("several", sites=(first, RootSite(coeffs, 0, exact=xM, multiplicity=2)))
    m_lo = strictly_above(xm, lambda t: qe_sign(xM - t) > 0 and P(t) > 0)
    m_hi = strictly_below(xM, lambda t: t > m_lo and P(t) < 0)
    middle = RootSite(coeffs, 0, Interval(m_lo, m_hi), increasing=False)
    last = rising_after(xM)
    return CaseOutcome("several", sites=(first, middle, last))
