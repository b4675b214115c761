"""Affine changes of variable linking each equation to one already solved.

Every step records ``source = pivot + sign * target_variable``:

=============  =====================  ========================
kind           substitution           target form
=============  =====================  ========================
shift_plus     x = x0 + X             C15  X^3 + a'X^2 = c'
shift_minus    x = x0 - X             C21  a'X^2 - X^3 = c'
offset         y = x + k              Q7   x^2 + kx = c
lemma2         x = 2a/3 - y           C21  a y^2 - y^3 = c0 - c
=============  =====================  ========================
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .analysis import Lemma2Class, MaximumReport, lemma2_classify
from .forms import CanonicalEquation, Form, FormError, TargetFunction
from .numerics import (
    Interval,
    QuadExt,
    as_fraction,
    qe_sign,
    qe_to_interval,
    rational_sqrt,
)

_SIGN = {"shift_plus": 1, "shift_minus": -1, "offset": 1, "lemma2": -1}
MAX_CHAIN = 4


class ReductionError(ValueError):
    pass


def _to_interval(x, width) -> Interval:
    if isinstance(x, Interval):
        return x
    return qe_to_interval(x, width)


@dataclass(frozen=True)
class ReductionStep:
    kind: str
    pivot: object  # Fraction, QuadExt or Interval
    source_form: Form
    target: CanonicalEquation

    @property
    def sign(self) -> int:
        return _SIGN[self.kind]

    def back(self, x, width=Fraction(1, 10**30)):
        """Map a target-variable root (exact or Interval) to the source variable."""
        if isinstance(x, Interval) or isinstance(self.pivot, Interval):
            piv = _to_interval(self.pivot, width)
            xi = _to_interval(x, width)
            return piv + xi if self.sign > 0 else piv - xi
        return self.pivot + x if self.sign > 0 else self.pivot - x

    def describe(self, source_var: str = "x", target_var: str = "X") -> str:
        op = "+" if self.sign > 0 else "-"
        return f"{source_var} = {_fmt_pivot(self.pivot)} {op} {target_var}"


def _fmt_pivot(p) -> str:
    if isinstance(p, Interval):
        return f"[{float(p.lo):.15g}, {float(p.hi):.15g}]"
    return str(p)


@dataclass
class ReductionChain:
    steps: list = field(default_factory=list)

    def append(self, step: ReductionStep) -> "ReductionChain":
        if len(self.steps) >= MAX_CHAIN:
            raise ReductionError(f"reduction chain longer than {MAX_CHAIN}")
        self.steps.append(step)
        return self

    @property
    def terminal_form(self) -> Form | None:
        return self.steps[-1].target.form if self.steps else None

    def back(self, x, width=Fraction(1, 10**30)):
        for step in reversed(self.steps):
            x = step.back(x, width)
        return x

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)


def _shifted(tf: TargetFunction, mr: MaximumReport) -> list:
    """Coefficients of f(x0 + X) - c; the linear one must vanish."""
    from .extraction import taylor_shift

    coeffs = taylor_shift([-1, tf.alpha, tf.beta, -tf.c], mr.x0)
    if coeffs[2] != 0:
        raise ReductionError(f"linear term {coeffs[2]} survives the shift to x0")
    return coeffs


def _require_two_roots(tf: TargetFunction, mr: MaximumReport):
    if qe_sign(mr.c0 - tf.c) <= 0:
        raise ReductionError("shift reductions need c < c0 (two roots)")


def shift_for_large_root(tf: TargetFunction, mr: MaximumReport) -> ReductionStep:
    """x = x0 + X turns f(x) = c into X^3 + a'X^2 = c' with a' = sqrt(d), c' = c0 - c."""
    _require_two_roots(tf, mr)
    lead, quad, _, const = _shifted(tf, mr)
    a_new = -quad  # 3*x0 - alpha
    target = CanonicalEquation(Form.C15, a=a_new, c=const)
    return ReductionStep("shift_plus", mr.x0, tf.form, target)


def shift_for_small_root(tf: TargetFunction, mr: MaximumReport) -> ReductionStep:
    """x = x0 - X turns f(x) = c into a'X^2 - X^3 = c'; x1 = x0 - (small root)."""
    if tf.form is Form.C21:
        raise FormError("C21 maps to itself under x = x0 - X; use the quadratic route")
    _require_two_roots(tf, mr)
    _, quad, _, const = _shifted(tf, mr)
    target = CanonicalEquation(Form.C21, a=-quad, c=const)
    return ReductionStep("shift_minus", mr.x0, tf.form, target)


def reduce_q8_to_q7(eq: CanonicalEquation) -> ReductionStep:
    """y^2 - by = c becomes x^2 + bx = c under x = y - b."""
    if eq.form is not Form.Q8:
        raise FormError(f"expected form Q8, got {eq.form}")
    target = CanonicalEquation(Form.Q7, b=eq.b, c=eq.c)
    return ReductionStep("offset", eq.b, Form.Q8, target)


def _large_root_terms(a, x2):
    """(a - x2, x2*(a - x2)) exactly, or as intervals when x2 is enclosed."""
    if isinstance(x2, Interval):
        if not x2.hi < a:
            raise ReductionError(f"large root enclosure {x2} not below a = {a}")
        k = Interval(a - x2.hi, a - x2.lo)
        # x(a - x) decreases for x > a/2, and x2 > 2a/3
        if x2.lo > a / 2:
            prod = Interval(x2.hi * (a - x2.hi), x2.lo * (a - x2.lo))
        else:
            prod = x2 * k
        return k, prod
    if qe_sign(a - x2) <= 0:
        raise ReductionError(f"large root {x2} not below a = {a}")
    k = a - x2
    return k, x2 * k


def small_root_quadratic_q8(eq: CanonicalEquation, x2) -> CanonicalEquation:
    """The equation y^2 - (a - x2) y = x2 (a - x2) satisfied by y = x1."""
    if eq.form is not Form.C21:
        raise FormError(f"expected form C21, got {eq.form}")
    k, prod = _large_root_terms(eq.a, x2)
    return CanonicalEquation(Form.Q8, b=k, c=prod)


def small_root_via_quadratic(eq: CanonicalEquation, x2) -> ReductionStep:
    """Q7 instance X^2 + (a - x2) X = x2 (a - x2) with x1 = (a - x2) + X.

    Obtained from the Q8 equation for x1 by the offset y = x + (a - x2).
    ``x2`` may be exact (rational or QuadExt) or an Interval enclosure.
    """
    q8 = small_root_quadratic_q8(eq, x2)
    step = reduce_q8_to_q7(q8)
    return ReductionStep("offset", step.pivot, Form.C21, step.target)


def lemma2_transform(eq: CanonicalEquation) -> ReductionStep:
    """For c > c0/2: y = 2a/3 - x1 solves a y^2 - y^3 = c0 - c with y < a/3."""
    if lemma2_classify(eq) is not Lemma2Class.ABOVE:
        raise FormError("the 2a/3 - x transform is for the case c > c0/2")
    a = eq.a
    c0 = a * a * a * Fraction(4, 27)
    target = CanonicalEquation(Form.C21, a=a, c=c0 - eq.c)
    return ReductionStep("lemma2", a * Fraction(2, 3), Form.C21, target)


def _q7_exact(b: Fraction, c: Fraction) -> QuadExt:
    return QuadExt(-b / 2, Fraction(1, 2), b * b + 4 * c)


def solve_q7(eq: CanonicalEquation, width=Fraction(1, 10**15)):
    """Positive root of x^2 + bx = c.

    Exact (QuadExt) when the root lies in the coefficients' field, otherwise a
    certified Interval of width at most ``width`` (plus the spread of interval
    coefficients, if given).
    """
    if eq.form is not Form.Q7:
        raise FormError(f"expected form Q7, got {eq.form}")
    width = as_fraction(width)
    b, c = eq.b, eq.c
    if isinstance(b, Interval) or isinstance(c, Interval):
        bi, ci = _to_interval(b, width / 8), _to_interval(c, width / 8)
        if bi.lo < 0 or ci.lo <= 0:
            raise ReductionError("interval Q7 needs b >= 0 and c > 0")
        # the root increases with c and decreases with b
        low = qe_to_interval(_q7_exact(bi.hi, ci.lo), width / 4).lo
        high = qe_to_interval(_q7_exact(bi.lo, ci.hi), width / 4).hi
        return Interval(low, high)
    if not isinstance(b, QuadExt) and not isinstance(c, QuadExt):
        return _q7_exact(as_fraction(b), as_fraction(c))
    disc = b * b + 4 * c
    disc = disc if isinstance(disc, QuadExt) else QuadExt(disc)
    if disc.q == 0:
        r = rational_sqrt(disc.p)
        if r is not None:
            return (r - b) / 2
        d = b.d if isinstance(b, QuadExt) and b.q else getattr(c, "d", Fraction(0))
        if d:
            s = rational_sqrt(disc.p / d)
            if s is not None:
                return (QuadExt(0, s, d) - b) / 2
    from .extraction import extract_monotone

    n = 0
    while Fraction(1, 10**n) > width:
        n += 1
    hi = max(Fraction(1), qe_to_interval(c, Fraction(1)).hi)
    ds = extract_monotone((1, b, 0), c, Interval(Fraction(0), hi), 10, n)
    return ds.enclosure
