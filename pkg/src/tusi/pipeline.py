"""End-to-end solver: parse, classify, analyse, reduce, extract, cross-check.

The order of work follows the historical scheme: form, positivity domain,
maximum, case decision, reductions, digit extraction.  Every root carries
its DigitString, the reduction steps that produced it and the image of the
root in each step's target variable.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

from .analysis import (
    CaseOutcome,
    Lemma2Class,
    MaximumReport,
    PositivityImpossible,
    RootSite,
    critical_point,
    decide_case,
    lemma2_classify,
    monotone_sites,
)
from .extraction import (
    CertificationError,
    DigitString,
    certify,
    digits_from_enclosure,
    digits_of_value,
    extract_c21_small_traced,
    extract_monotone,
    guard_digits,
)
from .forms import (
    CUBIC_TWO_ROOT_FORMS,
    CanonicalEquation,
    Form,
    GeneralPoly,
    classify,
    parse,
    render_canonical,
    target_function,
)
from .numerics import Interval, QuadExt, format_quad, qe_sign, qe_to_interval
from .oracle import DifferentialReport, differential_check
from .reduction import (
    ReductionChain,
    ReductionStep,
    reduce_q8_to_q7,
    shift_for_large_root,
    shift_for_small_root,
    small_root_via_quadratic,
    solve_q7,
)

MAX_ATTEMPTS = 6


class InvariantError(RuntimeError):
    """A pipeline self-check failed; this signals a bug, not a bad input."""


@dataclass
class Root:
    label: str
    digits: DigitString
    multiplicity: int = 1
    chain: ReductionChain = field(default_factory=ReductionChain)
    images: list = field(default_factory=list)  # target-variable root for each step
    exact: object = None
    detour: tuple | None = None  # (offset step, Q7 root) cross-check for C21

    @property
    def enclosure(self) -> Interval:
        return self.digits.enclosure


@dataclass
class SolveReport:
    input: str
    equation: CanonicalEquation
    outcome: CaseOutcome
    base: int
    n_digits: int
    maximum: MaximumReport | None = None
    x0: object = None
    c0: object = None
    lemma2: Lemma2Class | None = None
    roots: list = field(default_factory=list)
    oracle: DifferentialReport | None = None
    timing: float = 0.0
    notes: list = field(default_factory=list)

    @property
    def form(self) -> Form:
        return self.equation.form

    @property
    def case(self) -> str:
        return self.outcome.kind

    @property
    def variant(self) -> str:
        return self.outcome.variant

    @property
    def steps(self) -> list:
        """Every reduction step used; the large root's come first."""
        out = []
        for r in reversed(self.roots):
            for s in list(r.chain) + ([r.detour[0]] if r.detour else []):
                if all(s is not t for t in out):
                    out.append(s)
        return out


# ----------------------------------------------------------------------------
# rendering helpers


def decimal(x, digits: int) -> str:
    """Truncated decimal rendering of a rational or QuadExt value."""
    neg = qe_sign(x) < 0
    ds = digits_of_value(-x if neg else x, 10, digits)
    return ("-" if neg else "") + str(ds)


class _Approx:
    """Stand-in for an interval coefficient when rendering an equation."""

    def __init__(self, iv: Interval, digits: int):
        self.text = "~" + decimal(iv.mid, digits)

    def __str__(self):
        return self.text


def render_target(eq: CanonicalEquation, var: str, digits: int) -> str:
    def shown(v):
        return _Approx(v, digits) if isinstance(v, Interval) else v

    if any(isinstance(v, Interval) for v in (eq.a, eq.b, eq.c)):
        eq = CanonicalEquation(eq.form, shown(eq.a), shown(eq.b), shown(eq.c))
    return render_canonical(eq, var)


def render_pivot(p, digits: int) -> str:
    if isinstance(p, Interval):
        return "~" + decimal(p.mid, digits)
    return format_quad(p)


TARGET_VAR = {"shift_plus": "X", "shift_minus": "X", "offset": "X", "lemma2": "y"}


def describe_step(step: ReductionStep, digits: int) -> str:
    var = TARGET_VAR[step.kind]
    op = "+" if step.sign > 0 else "-"
    return (f"{step.kind}: x = {render_pivot(step.pivot, digits)} {op} {var}"
            f"  ->  {render_target(step.target, var, digits)}")


# ----------------------------------------------------------------------------
# root builders


def _certified(ds: DigitString) -> DigitString:
    if not certify(ds):
        raise CertificationError(f"certificate failed for {ds} on {ds.enclosure}")
    return ds


def _value_root(label, x, base, n, certificate, multiplicity=1, chain=None, images=None) -> Root:
    ds = _certified(digits_of_value(x, base, n, certificate))
    return Root(label, ds, multiplicity, chain or ReductionChain(), images or [], exact=x)


def _large_root(tf, mr, outcome, base, n) -> Root:
    step = shift_for_large_root(tf, mr)
    a1, c1 = step.target.a, step.target.c
    c, x0 = tf.c, mr.x0
    bracket = outcome.bracket_large
    cert = (tf.coeffs, c, False)

    def below(t):
        # f decreases on (x0, inf)
        return qe_sign(x0 - t) >= 0 or qe_sign(tf.f(t) - c) >= 0

    guard = guard_digits(base)
    for _ in range(MAX_ATTEMPTS):
        m = n + guard
        x0i = qe_to_interval(x0, Fraction(1, 4 * base**m))
        top = bracket.hi - x0i.lo
        X = extract_monotone((1, a1, 0, 0), c1, Interval(Fraction(0), top), base, m)
        enc = x0i + X.enclosure
        ds = digits_from_enclosure(enc, base, n, below, cert, clamp=bracket)
        if certify(ds):
            exact = x0 + X.value if X.exact else None
            image = X.value if X.exact else X.enclosure
            return Root("x2", ds, 1, ReductionChain([step]), [image], exact=exact)
        guard *= 2
    raise CertificationError("large root could not be certified")


def _small_root_c21(eq, lemma2, large: Root, base, n) -> Root:
    ds, lstep, y = extract_c21_small_traced(eq, lemma2, base, n)
    _certified(ds)
    chain, images = ReductionChain(), []
    if lstep is not None:
        chain.append(lstep)
        images.append(y.value if y.exact else y.enclosure)
    exact = ds.enclosure.lo if ds.exact else None

    # the small root again, from the quadratic whose coefficients involve x2
    x2 = large.exact if large.exact is not None else large.enclosure
    detour = small_root_via_quadratic(eq, x2)
    X = solve_q7(detour.target, large.digits.ulp)
    back = detour.back(X)
    back_iv = back if isinstance(back, Interval) else qe_to_interval(back, ds.ulp / 4)
    if not back_iv.intersects(ds.enclosure):
        raise InvariantError(f"quadratic route gives {back_iv}, digit route {ds.enclosure}")
    return Root("x1", ds, 1, chain, images, exact=exact, detour=(detour, X))


def _small_root_shift(tf, mr, outcome, base, n) -> tuple[Root, Lemma2Class]:
    step = shift_for_small_root(tf, mr)
    reduced = step.target
    lemma2 = lemma2_classify(reduced)
    c, x0, x_min = tf.c, mr.x0, mr.x_min
    bracket = outcome.bracket_small
    cert = (tf.coeffs, c, True)

    def below(t):
        if t <= 0:
            return True
        if qe_sign(x0 - t) <= 0:
            return False
        if qe_sign(x_min - t) >= 0:
            return True  # f < 0 < c up to the local minimum
        return qe_sign(tf.f(t) - c) <= 0

    guard = guard_digits(base)
    for _ in range(MAX_ATTEMPTS):
        m = n + guard
        X1, lstep, y = extract_c21_small_traced(reduced, lemma2, base, m)
        x0i = qe_to_interval(x0, Fraction(1, 4 * base**m))
        enc = Interval(max(Fraction(0), x0i.lo - X1.enclosure.hi), x0i.hi - X1.enclosure.lo)
        ds = digits_from_enclosure(enc, base, n, below, cert, clamp=bracket)
        if certify(ds):
            chain = ReductionChain([step])
            images = [X1.value if X1.exact else X1.enclosure]
            if lstep is not None:
                chain.append(lstep)
                images.append(y.value if y.exact else y.enclosure)
            exact = x0 - X1.value if X1.exact else None
            return Root("x1", ds, 1, chain, images, exact=exact), lemma2
        guard *= 2
    raise CertificationError("small root could not be certified")


def _site_root(label, site: RootSite, base, n) -> Root:
    if site.exact is not None:
        return _value_root(label, site.exact, base, n, (site.poly, site.target, True),
                           multiplicity=site.multiplicity)
    ds = extract_monotone(site.poly, site.target, site.bracket, base, n, site.increasing)
    return Root(label, ds, 1, exact=ds.enclosure.lo if ds.exact else None)


# ----------------------------------------------------------------------------
# per-form solvers


def _solve_two_root_form(rep: SolveReport):
    eq, base, n = rep.equation, rep.base, rep.n_digits
    tf = target_function(eq)
    try:
        mr = critical_point(tf)
    except PositivityImpossible as exc:
        rep.outcome = CaseOutcome("impossible", reason=str(exc))
        return
    rep.maximum, rep.x0, rep.c0 = mr, mr.x0, mr.c0
    rep.outcome = out = decide_case(tf, mr)
    if out.kind == "double":
        rep.roots = [_value_root("x", mr.x0, base, n, (tf.coeffs, tf.c, True), multiplicity=2)]
        return
    if out.kind != "two":
        return
    large = _large_root(tf, mr, out, base, n)
    if eq.form is Form.C21:
        rep.lemma2 = lemma2_classify(eq)
        small = _small_root_c21(eq, rep.lemma2, large, base, n)
    else:
        small, rep.lemma2 = _small_root_shift(tf, mr, out, base, n)
    if eq.form is Form.C22:
        rep.notes.append("historical order computes the small root first; "
                         "roots do not depend on the order")
    rep.roots = [small, large]


def _solve_q9(rep: SolveReport):
    eq, base, n = rep.equation, rep.base, rep.n_digits
    b, c = eq.b, eq.c
    rep.x0, rep.c0 = b / 2, b * b / 4
    s = qe_sign(rep.c0 - c)
    poly = (-1, b, 0)
    if s < 0:
        rep.outcome = CaseOutcome("impossible", x0=rep.x0, reason="c > c0")
    elif s == 0:
        rep.outcome = CaseOutcome("double", x0=rep.x0)
        rep.roots = [_value_root("x", rep.x0, base, n, (poly, c, True), multiplicity=2)]
    else:
        disc = b * b - 4 * c
        small = QuadExt(b / 2, Fraction(-1, 2), disc)
        large = QuadExt(b / 2, Fraction(1, 2), disc)
        rep.outcome = CaseOutcome("two", x0=rep.x0)
        rep.roots = [
            _value_root("x1", small, base, n, (poly, c, True)),
            _value_root("x2", large, base, n, (poly, c, False)),
        ]


def _solve_quadratic(rep: SolveReport):
    eq, base, n = rep.equation, rep.base, rep.n_digits
    rep.outcome = CaseOutcome("unique")
    if eq.form is Form.Q7:
        x = solve_q7(eq)
        rep.roots = [_value_root("x", x, base, n, ((1, eq.b, 0), eq.c, True))]
        return
    step = reduce_q8_to_q7(eq)
    X = solve_q7(step.target)
    y = step.back(X)
    rep.roots = [_value_root("x", y, base, n, ((1, -eq.b, 0), eq.c, True),
                             chain=ReductionChain([step]), images=[X])]


def _solve_monotone(rep: SolveReport):
    rep.outcome = out = monotone_sites(rep.equation)
    labels = ["x"] if len(out.sites) == 1 else [f"x{i + 1}" for i in range(len(out.sites))]
    rep.roots = [_site_root(lab, s, rep.base, rep.n_digits) for lab, s in zip(labels, out.sites)]


def _solve_linear(rep: SolveReport):
    rep.outcome = CaseOutcome("unique")
    c = rep.equation.c
    rep.roots = [_value_root("x", c, rep.base, rep.n_digits, ((1, 0), c, True))]


def _as_equation(source) -> tuple[str, CanonicalEquation]:
    if isinstance(source, CanonicalEquation):
        return render_canonical(source), source
    if isinstance(source, GeneralPoly):
        return str(source), classify(source)
    return str(source), classify(parse(source))


def solve(source, base: int = 10, digits: int = 12, oracle: bool = True,
          oracle_width=None) -> SolveReport:
    """Run the whole pipeline on an equation string, polynomial or canonical form."""
    if base < 2:
        raise ValueError("base must be >= 2")
    if digits < 0:
        raise ValueError("digits must be >= 0")
    start = time.perf_counter()
    text, eq = _as_equation(source)
    rep = SolveReport(text, eq, CaseOutcome("impossible"), base, digits)
    if eq.form in CUBIC_TWO_ROOT_FORMS:
        _solve_two_root_form(rep)
    elif eq.form is Form.Q9:
        _solve_q9(rep)
    elif eq.form in (Form.Q7, Form.Q8):
        _solve_quadratic(rep)
    elif eq.form in (Form.C15, Form.OTHER):
        _solve_monotone(rep)
    elif eq.form is Form.LINEAR:
        _solve_linear(rep)
    else:
        rep.outcome = CaseOutcome("impossible", reason="every term has the same sign")
    for r in rep.roots:
        if len(r.chain) > 4:
            raise InvariantError(f"chain of length {len(r.chain)}")
    if oracle:
        width = oracle_width
        if width is None:
            width = min([Fraction(1, 10**12)] + [r.digits.ulp for r in rep.roots])
        rep.oracle = differential_check(eq, rep, width)
    rep.timing = time.perf_counter() - start
    return rep


__all__ = [
    "InvariantError",
    "Root",
    "SolveReport",
    "solve",
    "decimal",
    "describe_step",
    "render_target",
]
