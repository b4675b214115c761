"""Equation ingestion and al-Tusi's canonical positive-coefficient forms."""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .numerics import QuadExt, as_fraction, format_quad, horner


class ParseError(ValueError):
    def __init__(self, message: str, position: int | None = None):
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"{message}{where}")


class FormError(ValueError):
    """An operation was applied to an equation of the wrong canonical form."""


class Form(str, enum.Enum):
    Q7 = "Q7"  # x^2 + bx = c
    Q8 = "Q8"  # y^2 - by = c
    Q9 = "Q9"  # x^2 + c = bx
    C15 = "C15"  # X^3 + aX^2 = c
    C21 = "C21"  # x^3 + c = ax^2
    C22 = "C22"  # x^3 + c = bx
    C23 = "C23"  # x^3 + ax^2 + c = bx
    C24 = "C24"  # x^3 + bx + c = ax^2
    C25 = "C25"  # x^3 + c = ax^2 + bx
    OTHER = "OtherCubic"
    LINEAR = "Linear"  # x = c, only after factoring out x = 0
    NONE = "ImpossibleBySigns"

    def __str__(self):
        return self.value


CUBIC_TWO_ROOT_FORMS = (Form.C21, Form.C22, Form.C23, Form.C24, Form.C25)


@dataclass(frozen=True)
class GeneralPoly:
    """``c3*x^3 + c2*x^2 + c1*x + c0 = 0`` with rational coefficients."""

    c3: Fraction
    c2: Fraction
    c1: Fraction
    c0: Fraction

    def __post_init__(self):
        for name in ("c3", "c2", "c1", "c0"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))

    @classmethod
    def from_coeffs(cls, coeffs) -> "GeneralPoly":
        """Build from highest-degree-first coefficients (at most four)."""
        coeffs = list(coeffs)
        if len(coeffs) > 4:
            if any(coeffs[: len(coeffs) - 4]):
                raise ValueError("degree > 3")
            coeffs = coeffs[-4:]
        return cls(*([0] * (4 - len(coeffs)) + coeffs))

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return (self.c3, self.c2, self.c1, self.c0)

    @property
    def trimmed(self) -> tuple[Fraction, ...]:
        """Coefficients with leading zeros removed."""
        cs = self.coeffs
        i = 0
        while i < 3 and cs[i] == 0:
            i += 1
        return cs[i:]

    @property
    def degree(self) -> int:
        cs = self.trimmed
        if len(cs) == 1 and cs[0] == 0:
            return -1
        return len(cs) - 1

    def monic(self) -> "GeneralPoly":
        cs = self.trimmed
        lead = cs[0]
        if lead == 0:
            raise ValueError("zero polynomial")
        return GeneralPoly.from_coeffs([c / lead for c in cs])

    def __call__(self, x):
        return horner(self.trimmed, x)

    def __str__(self):
        return render_poly(self.trimmed) + " = 0"


def render_poly(coeffs, var: str = "x") -> str:
    coeffs = list(coeffs)
    deg = len(coeffs) - 1
    parts = []
    for i, c in enumerate(coeffs):
        e = deg - i
        if c == 0:
            continue
        neg = c < 0 if not isinstance(c, QuadExt) else c.sign() < 0
        mag = -c if neg else c
        if e == 0:
            body = _coef_str(mag)
        else:
            mono = var if e == 1 else f"{var}^{e}"
            body = mono if mag == 1 else f"{_coef_str(mag, True)}{mono}"
        if not parts:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(parts) if parts else "0"


def _coef_str(c, as_factor: bool = False) -> str:
    s = format_quad(c)
    if as_factor and (" " in s or "/" in s):
        return f"({s})*" if " " in s else f"{s}*"
    return s


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>x)|(?P<op>[-+*^=]))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            bad = pos
            while bad < len(text) and text[bad].isspace():
                bad += 1
            raise ParseError(f"unexpected character {text[bad]!r}", bad)
        start = m.start(m.lastgroup)
        tokens.append((m.lastgroup, m.group(m.lastgroup), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}", pos)

    def side(self) -> list[Fraction]:
        acc = [Fraction(0)] * 4  # index = exponent
        sign = 1
        kind, val, pos = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        while True:
            exp, coef = self.term()
            acc[exp] += sign * coef
            kind, val, pos = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                sign = -1 if val == "-" else 1
                continue
            return acc

    def term(self) -> tuple[int, Fraction]:
        kind, val, pos = self.take()
        coef = Fraction(1)
        if kind == "num":
            num, _, den = val.partition("/")
            if den and int(den) == 0:
                raise ParseError("division by zero", pos)
            coef = Fraction(int(num), int(den) if den else 1)
            nkind, nval, _ = self.peek()
            if nkind == "op" and nval == "*":
                self.take()
                kind, val, pos = self.take()
                if kind != "var":
                    raise ParseError("expected 'x' after '*'", pos)
            elif nkind == "var":
                kind, val, pos = self.take()
            else:
                return 0, coef
        if kind != "var":
            raise ParseError(f"unexpected {val or 'end of input'!r}", pos)
        nkind, nval, _ = self.peek()
        if nkind == "op" and nval == "^":
            self.take()
            ekind, eval_, epos = self.take()
            if ekind != "num" or "/" in eval_:
                raise ParseError("expected integer exponent", epos)
            e = int(eval_)
            if e > 3:
                raise ParseError("degree > 3", epos)
            if e < 1:
                raise ParseError("exponent must be 1, 2 or 3", epos)
            return e, coef
        return 1, coef


def parse(text: str) -> GeneralPoly:
    """Parse ``lhs = rhs`` into ``lhs - rhs = 0``.

    >>> parse("x^3 + 2 = 3x^2")
    GeneralPoly(c3=Fraction(1, 1), c2=Fraction(-3, 1), c1=Fraction(0, 1), c0=Fraction(2, 1))
    """
    p = _Parser(text)
    if p.peek()[0] == "end":
        raise ParseError("empty equation", 0)
    lhs = p.side()
    p.expect_op("=")
    rhs = p.side()
    kind, val, pos = p.peek()
    if kind != "end":
        raise ParseError(f"unexpected {val!r}", pos)
    diff = [l - r for l, r in zip(lhs, rhs)]
    poly = GeneralPoly(diff[3], diff[2], diff[1], diff[0])
    if poly.degree < 0:
        raise ParseError("zero polynomial")
    if poly.degree < 2:
        raise ParseError("not a quadratic or cubic equation")
    return poly


@dataclass(frozen=True)
class CanonicalEquation:
    """One of al-Tusi's forms with positive coefficients.

    Unused coefficients are zero.  For ``OtherCubic`` the monic polynomial is
    kept in ``poly``.  ``zero_roots`` counts factors of x removed before
    classification (x = 0 is never reported as a root).
    Coefficients may be rationals, QuadExt values (reduced equations) or
    Intervals (the small-root quadratic built from an enclosed large root).
    """

    form: Form
    a: object = Fraction(0)
    b: object = Fraction(0)
    c: object = Fraction(0)
    poly: GeneralPoly | None = field(default=None, compare=True)
    zero_roots: int = 0

    def monic_coeffs(self) -> tuple:
        """Highest-first coefficients of the monic quotient polynomial (= 0)."""
        a, b, c = self.a, self.b, self.c
        f = self.form
        table = {
            Form.C21: (1, -a, 0, c),
            Form.C22: (1, 0, -b, c),
            Form.C23: (1, a, -b, c),
            Form.C24: (1, -a, b, c),
            Form.C25: (1, -a, -b, c),
            Form.C15: (1, a, 0, -c),
            Form.Q7: (1, b, -c),
            Form.Q8: (1, -b, -c),
            Form.Q9: (1, -b, c),
            Form.LINEAR: (1, -c),
        }
        if f in table:
            return table[f]
        if f is Form.OTHER:
            return self.poly.trimmed
        raise FormError(f"{f} has no polynomial")

    def to_general(self) -> GeneralPoly:
        if self.form is Form.NONE and self.poly is not None:
            return self.poly
        cs = list(self.monic_coeffs()) + [0] * self.zero_roots
        return GeneralPoly.from_coeffs([as_fraction(c) for c in cs])

    def __str__(self):
        return render_canonical(self)


def render_canonical(eq: CanonicalEquation, var: str = "x") -> str:
    def t(c, mono):
        if mono == "":
            s = format_quad(c)
            return f"({s})" if " " in s else s
        if c == 1:
            return mono
        return f"{_coef_str(c, True)}{mono}"

    x, x2, x3 = var, f"{var}^2", f"{var}^3"
    a, b, c = eq.a, eq.b, eq.c
    f = eq.form
    if f is Form.Q7:
        return f"{x2} + {t(b, x)} = {t(c, '')}" if b != 0 else f"{x2} = {t(c, '')}"
    if f is Form.Q8:
        return f"{x2} - {t(b, x)} = {t(c, '')}" if b != 0 else f"{x2} = {t(c, '')}"
    if f is Form.Q9:
        return f"{x2} + {t(c, '')} = {t(b, x)}"
    if f is Form.C15:
        return f"{x3} + {t(a, x2)} = {t(c, '')}"
    if f is Form.C21:
        return f"{x3} + {t(c, '')} = {t(a, x2)}"
    if f is Form.C22:
        return f"{x3} + {t(c, '')} = {t(b, x)}"
    if f is Form.C23:
        return f"{x3} + {t(a, x2)} + {t(c, '')} = {t(b, x)}"
    if f is Form.C24:
        return f"{x3} + {t(b, x)} + {t(c, '')} = {t(a, x2)}"
    if f is Form.C25:
        return f"{x3} + {t(c, '')} = {t(a, x2)} + {t(b, x)}"
    if f is Form.LINEAR:
        return f"{x} = {t(c, '')}"
    if f is Form.OTHER:
        return _render_two_sided(eq.poly.trimmed, var)
    return "no positive root (all terms positive)"


def _render_two_sided(coeffs, var="x") -> str:
    left = [c if c > 0 else 0 for c in coeffs]
    right = [-c if c < 0 else 0 for c in coeffs]
    return f"{render_poly(left, var)} = {render_poly(right, var)}"


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


def classify(p: GeneralPoly) -> CanonicalEquation:
    """Route a polynomial to its canonical form by the signs of its monic coefficients."""
    cs = list(p.monic().trimmed)
    zero_roots = 0
    while len(cs) > 1 and cs[-1] == 0:
        cs.pop()
        zero_roots += 1
    deg = len(cs) - 1
    if deg == 0:
        return CanonicalEquation(Form.NONE, poly=p.monic(), zero_roots=zero_roots)
    if deg == 1:
        k = cs[1]
        if k < 0:
            return CanonicalEquation(Form.LINEAR, c=-k, zero_roots=zero_roots)
        return CanonicalEquation(Form.NONE, poly=p.monic(), zero_roots=zero_roots)
    if deg == 2:
        _, B, C = cs
        if C < 0:
            if B >= 0:
                return CanonicalEquation(Form.Q7, b=B, c=-C, zero_roots=zero_roots)
            return CanonicalEquation(Form.Q8, b=-B, c=-C, zero_roots=zero_roots)
        if B < 0:
            return CanonicalEquation(Form.Q9, b=-B, c=C, zero_roots=zero_roots)
        return CanonicalEquation(Form.NONE, poly=p.monic(), zero_roots=zero_roots)
    _, A, B, C = cs
    sa, sb = _sgn(A), _sgn(B)
    if C > 0:
        form = {
            (-1, 0): Form.C21,
            (0, -1): Form.C22,
            (1, -1): Form.C23,
            (-1, 1): Form.C24,
            (-1, -1): Form.C25,
        }.get((sa, sb))
        if form is None:
            return CanonicalEquation(Form.NONE, poly=p.monic(), zero_roots=zero_roots)
        return CanonicalEquation(form, a=abs(A), b=abs(B), c=C, zero_roots=zero_roots)
    if sa == 1 and sb == 0:
        return CanonicalEquation(Form.C15, a=A, c=-C, zero_roots=zero_roots)
    return CanonicalEquation(
        Form.OTHER, poly=GeneralPoly.from_coeffs(cs), zero_roots=zero_roots
    )


@dataclass(frozen=True)
class TargetFunction:
    """``f(x) = -x^3 + alpha*x^2 + beta*x`` together with the constant ``c``."""

    alpha: object
    beta: object
    c: object
    form: Form | None = None

    @property
    def coeffs(self) -> tuple:
        return (-1, self.alpha, self.beta, 0)

    def f(self, x):
        return ((self.alpha - x) * x + self.beta) * x

    def __call__(self, x):
        return self.f(x)

    def derivative(self, x):
        return (-3 * x + 2 * self.alpha) * x + self.beta


_ALPHA_BETA = {
    Form.C21: (1, 0),
    Form.C22: (0, 1),
    Form.C23: (-1, 1),
    Form.C24: (1, -1),
    Form.C25: (1, 1),
}


def target_function(eq: CanonicalEquation) -> TargetFunction:
    try:
        sa, sb = _ALPHA_BETA[eq.form]
    except KeyError:
        raise FormError(f"no f(x) = c arrangement for form {eq.form}") from None
    return TargetFunction(sa * eq.a, sb * eq.b, eq.c, eq.form)
