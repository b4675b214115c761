"""Independent positive-root isolation for rational polynomials of degree <= 3.

Sturm sequences over exact rationals, bisection with exact sign tests.  Shares
nothing with the historical pipeline except :mod:`tusi.numerics`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .numerics import Interval, as_fraction, horner, qe_sign


def _trim(p):
    p = list(p)
    while len(p) > 1 and p[0] == 0:
        p.pop(0)
    return p


def _deg(p) -> int:
    p = _trim(p)
    return -1 if p == [0] else len(p) - 1


def _deriv(p):
    n = len(p) - 1
    if n == 0:
        return [Fraction(0)]
    return [c * (n - i) for i, c in enumerate(p[:-1])]


def _divmod(a, b):
    a, b = _trim(a), _trim(b)
    if _deg(b) < 0:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    r = [Fraction(c) for c in a]
    while _deg(r) >= _deg(b) and _deg(r) >= 0:
        shift = len(r) - len(b)
        f = r[0] / b[0]
        q[len(q) - 1 - shift] = f
        for i, c in enumerate(b):
            r[i] -= f * c
        r = _trim(r[1:] if len(r) > 1 else r)
    return _trim(q), r


def _monic(p):
    p = _trim(p)
    return [c / p[0] for c in p]


def poly_gcd(a, b):
    a, b = _trim(a), _trim(b)
    while _deg(b) >= 0:
        a, b = b, _divmod(a, b)[1]
    return _monic(a)


def squarefree(p):
    p = _trim(p)
    g = poly_gcd(p, _deriv(p))
    return _monic(_divmod(p, g)[0])


def sturm_sequence(p):
    seq = [_trim(p), _trim(_deriv(p))]
    while _deg(seq[-1]) > 0:
        r = _divmod(seq[-2], seq[-1])[1]
        if _deg(r) < 0:
            break
        seq.append([-c for c in r])
    return seq


def _variations(seq, x) -> int:
    signs = []
    for p in seq:
        v = horner(p, x)
        if v:
            signs.append(v > 0)
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def count_roots(seq, a, b) -> int:
    """Distinct real roots in ``(a, b]`` of the polynomial heading ``seq``."""
    return _variations(seq, a) - _variations(seq, b)


def cauchy_bound(p) -> Fraction:
    p = _trim(p)
    return 1 + max(abs(c / p[0]) for c in p[1:]) if len(p) > 1 else Fraction(1)


@dataclass(frozen=True)
class IsolatedRoot:
    """A root known to be the only distinct one in ``interval``.

    ``interval`` is closed for reporting; a non-point interval never has
    the root at its left endpoint.
    """

    interval: Interval
    multiplicity: int = 1

    @property
    def exact(self) -> bool:
        return self.interval.is_point


def _coeff_list(p) -> list[Fraction]:
    if hasattr(p, "trimmed"):
        return [as_fraction(c) for c in p.trimmed]
    return _trim([as_fraction(c) for c in p])


def _multiplicity(p, iv: Interval) -> int:
    m = 0
    g = p
    while _deg(g) >= 1:
        if iv.is_point:
            has = horner(g, iv.lo) == 0
        else:
            has = count_roots(sturm_sequence(squarefree(g)), iv.lo, iv.hi) > 0
        if not has:
            break
        m += 1
        g = poly_gcd(g, _deriv(g))
    return m


def isolate_positive_roots(p) -> list[IsolatedRoot]:
    """Disjoint rational isolating intervals for all roots in ``(0, inf)``."""
    coeffs = _coeff_list(p)
    if _deg(coeffs) < 0:
        raise ValueError("zero polynomial")
    if _deg(coeffs) == 0:
        return []
    s = squarefree(coeffs)
    seq = sturm_sequence(s)
    hi = cauchy_bound(s)
    found: list[Interval] = []
    todo = [(Fraction(0), hi, count_roots(seq, Fraction(0), hi))]
    while todo:
        a, b, n = todo.pop()
        if n == 0:
            continue
        if horner(s, b) == 0 and n == 1:
            found.append(Interval.point(b))
            continue
        if n == 1:
            found.append(Interval(a, b))
            continue
        m = (a + b) / 2
        left = count_roots(seq, a, m)
        todo.append((m, b, n - left))
        todo.append((a, m, left))
    found.sort(key=lambda iv: iv.lo)
    return [IsolatedRoot(iv, _multiplicity(coeffs, iv)) for iv in found]


def _integer_lead(s) -> int:
    den = lcm(*(c.denominator for c in s))
    return abs(int(s[0] * den))


def refine(r: IsolatedRoot, p, width) -> IsolatedRoot:
    """Bisect ``r`` until its interval is no wider than ``width``."""
    width = as_fraction(width)
    iv = r.interval
    if iv.is_point or iv.width <= width:
        return r
    s = squarefree(_coeff_list(p))
    lo, hi = iv.lo, iv.hi
    if horner(s, hi) == 0:
        return IsolatedRoot(Interval.point(hi), r.multiplicity)
    sign_hi = horner(s, hi) > 0
    # a rational root p/q has q | lead; once the bracket is narrower than
    # 1/lead^2 it holds at most one such fraction, so one probe settles it
    lead = _integer_lead([c for c in s])
    probe_at = Fraction(1, lead * lead)
    final = None
    while final is None or hi - lo >= probe_at:
        if final is None and hi - lo <= width:
            final = (lo, hi)
        m = (lo + hi) / 2
        v = horner(s, m)
        if v == 0:
            return IsolatedRoot(Interval.point(m), r.multiplicity)
        if (v > 0) == sign_hi:
            hi = m
        else:
            lo = m
    cand = ((lo + hi) / 2).limit_denominator(lead)
    if lo <= cand <= hi and horner(s, cand) == 0:
        return IsolatedRoot(Interval.point(cand), r.multiplicity)
    return IsolatedRoot(Interval(*final), r.multiplicity)


@dataclass
class DifferentialReport:
    agree: bool = True
    discrepancies: list[str] = field(default_factory=list)
    oracle_roots: list[IsolatedRoot] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return "agree" if self.agree else "disagree"

    def fail(self, msg: str):
        self.agree = False
        self.discrepancies.append(msg)


_EXPECTED_MULTS = {
    "impossible": [],
    "double": [2],
    "two": [1, 1],
    "unique": [1],
}


def differential_check(eq, result, width=Fraction(1, 10**12)) -> DifferentialReport:
    """Compare a pipeline result with the oracle's view of ``eq``.

    ``result`` needs ``case`` (a kind string), ``roots`` (objects with
    ``enclosure`` and ``multiplicity``) and optionally ``x0``.
    """
    width = as_fraction(width)
    poly = eq.to_general() if hasattr(eq, "to_general") else eq
    rep = DifferentialReport()
    oracle = [refine(r, poly, width) for r in isolate_positive_roots(poly)]
    rep.oracle_roots = oracle

    mults = sorted(r.multiplicity for r in oracle)
    expected = _EXPECTED_MULTS.get(result.case)
    pipeline_mults = sorted(r.multiplicity for r in result.roots)
    if expected is not None and sorted(expected) != mults:
        rep.fail(f"case {result.case!r} but oracle multiplicities {mults}")
    if pipeline_mults != mults:
        rep.fail(f"pipeline multiplicities {pipeline_mults} vs oracle {mults}")

    used = set()
    for root in result.roots:
        hits = [i for i, o in enumerate(oracle) if o.interval.intersects(root.enclosure)]
        if len(hits) != 1:
            rep.fail(f"enclosure {root.enclosure} meets {len(hits)} oracle intervals")
            continue
        if hits[0] in used:
            rep.fail(f"two pipeline roots share oracle root {oracle[hits[0]].interval}")
        used.add(hits[0])
        o = oracle[hits[0]]
        if o.multiplicity != root.multiplicity:
            rep.fail(f"multiplicity {root.multiplicity} vs oracle {o.multiplicity}")

    x0 = getattr(result, "x0", None)
    if result.case == "two" and x0 is not None and len(oracle) == 2:
        small, large = oracle
        if not (qe_sign(x0 - small.interval.hi) > 0 and qe_sign(large.interval.lo - x0) > 0):
            rep.fail("oracle roots do not straddle x0")
        if small.interval.lo < 0:
            rep.fail("small root not positive")
    if result.case == "double" and x0 is not None and len(oracle) == 1:
        if not (oracle[0].interval.is_point and oracle[0].interval.lo == x0):
            rep.fail(f"double root {x0} vs oracle {oracle[0].interval}")
    return rep


__all__ = [
    "IsolatedRoot",
    "DifferentialReport",
    "isolate_positive_roots",
    "refine",
    "differential_check",
    "sturm_sequence",
    "count_roots",
    "squarefree",
    "poly_gcd",
    "cauchy_bound",
]
