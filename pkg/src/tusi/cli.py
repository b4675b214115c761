"""Command-line front end.

    tusi solve "x^3 + 2 = 3x^2" --digits 6
    tusi solve --batch equations.txt --format json

Exit codes: 0 for a completed analysis (an impossible equation included),
2 for parse or usage errors, 3 when a self-check, certificate or the oracle
cross-check fails.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .extraction import CertificationError, ExtractionError
from .forms import FormError, ParseError, render_canonical
from .numerics import QuadExt, format_quad
from .pipeline import (
    TARGET_VAR,
    InvariantError,
    SolveReport,
    decimal,
    describe_step,
    render_pivot,
    render_target,
    solve,
)
from .reduction import ReductionError

EXIT_OK, EXIT_USAGE, EXIT_BUG = 0, 2, 3
USAGE_ERRORS = (ParseError, FormError, ReductionError)
BUG_ERRORS = (InvariantError, CertificationError, ExtractionError, ArithmeticError)


def _pqd(x) -> dict | None:
    if x is None:
        return None
    if not isinstance(x, QuadExt):
        x = QuadExt(Fraction(x))
    return {"p": str(x.p), "q": str(x.q), "d": str(x.d)}


def report_to_dict(rep: SolveReport) -> dict:
    """Structured report with a fixed key order."""
    n = rep.n_digits
    return {
        "input": rep.input,
        "form": rep.form.value,
        "x0": _pqd(rep.x0),
        "c0": _pqd(rep.c0),
        "case": rep.variant,
        "lemma2": rep.lemma2.value if rep.lemma2 else None,
        "chain": [
            {
                "kind": s.kind,
                "pivot": render_pivot(s.pivot, n),
                "target": render_target(s.target, TARGET_VAR[s.kind], n),
            }
            for s in rep.steps
        ],
        "roots": [
            {
                "digits": str(r.digits),
                "base": r.digits.base,
                "enclosure": [str(r.enclosure.lo), str(r.enclosure.hi)],
                "multiplicity": r.multiplicity,
            }
            for r in rep.roots
        ],
        "oracle": {"verdict": rep.oracle.verdict if rep.oracle else "skipped"},
    }


def to_json(d: dict) -> str:
    return json.dumps(d, ensure_ascii=False)


def _with_decimal(x, n: int) -> str:
    s = format_quad(x)
    if isinstance(x, QuadExt) and x.q != 0:
        return f"{s} ~ {decimal(x, n)}"
    return s


def _root_line(r, n: int) -> str:
    tail = "exact" if r.digits.exact else (
        f"in [{decimal(r.enclosure.lo, n + 6)}, {decimal(r.enclosure.hi, n + 6)}]"
    )
    mult = f", multiplicity {r.multiplicity}" if r.multiplicity > 1 else ""
    return f"{r.label} = {r.digits}  ({tail}{mult})"


def _trace_blocks(rep: SolveReport) -> list[tuple[str, list[str]]]:
    n = rep.n_digits
    eq = rep.equation
    blocks = [("form", [f"{rep.form.value}: {render_canonical(eq)}"])]
    mr = rep.maximum
    if mr is not None:
        blocks.append(("domain", [
            f"f(x) > 0 on ({_with_decimal(mr.domain_lo, n)}, {_with_decimal(mr.domain_hi, n)})",
        ]))
    if rep.x0 is not None:
        lines = [f"x0 = {_with_decimal(rep.x0, n)}", f"c0 = {_with_decimal(rep.c0, n)}"]
        if mr is not None:
            lines.insert(0, f"d = {mr.d}")
        blocks.append(("maximum", lines))
    case = [rep.variant]
    if rep.outcome.reason:
        case.append(rep.outcome.reason)
    if rep.lemma2 is not None:
        case.append(f"lemma-2 class: {rep.lemma2.value}")
    blocks.append(("case", case))
    steps = [describe_step(s, n) for s in rep.steps]
    if steps:
        blocks.append(("reductions", steps))
    if rep.roots:
        lines = []
        for r in rep.roots:
            for s, img in zip(r.chain, r.images):
                shown = img if not hasattr(img, "lo") else f"[{decimal(img.lo, n + 6)}, {decimal(img.hi, n + 6)}]"
                lines.append(f"{r.label}: {s.kind} target root {shown}")
            lines.append(_root_line(r, n))
        lines.append("digits by a modern Ruffini-Horner reconstruction (truncated)")
        blocks.append(("extraction", lines))
    return blocks


def render_text(rep: SolveReport, trace: bool = False) -> str:
    n = rep.n_digits
    out = [f"input: {rep.input}"]
    if trace:
        for i, (name, lines) in enumerate(_trace_blocks(rep), 1):
            out.append("")
            out.append(f"[{i}] {name}")
            out.extend(f"    {ln}" for ln in lines)
        out.append("")
    else:
        out.append(f"form: {rep.form.value}  {render_canonical(rep.equation)}")
        if rep.x0 is not None:
            out.append(f"maximum: x0 = {_with_decimal(rep.x0, n)}, c0 = {_with_decimal(rep.c0, n)}")
        out.append(f"case: {rep.variant}" + (f"  ({rep.outcome.reason})" if rep.outcome.reason else ""))
        if rep.lemma2 is not None:
            out.append(f"lemma2: {rep.lemma2.value}")
        for s in rep.steps:
            out.append(f"step: {describe_step(s, n)}")
        for r in rep.roots:
            out.append(_root_line(r, n))
    for note in rep.notes:
        out.append(f"note: {note}")
    out.append(f"oracle: {rep.oracle.verdict if rep.oracle else 'skipped'}")
    if rep.oracle and not rep.oracle.agree:
        out.extend(f"  {d}" for d in rep.oracle.discrepancies)
    out.append(f"time: {rep.timing * 1000:.1f} ms")
    return "\n".join(out)


def _run_one(text: str, args) -> tuple[int, str, SolveReport | None]:
    """Solve one equation; returns (exit code, rendered output, report)."""
    try:
        rep = solve(text, base=args.base, digits=args.digits, oracle=not args.no_oracle)
    except USAGE_ERRORS as exc:
        return EXIT_USAGE, _error(text, "error", exc, args), None
    except BUG_ERRORS as exc:
        return EXIT_BUG, _error(text, "internal error", exc, args), None
    code = EXIT_OK if rep.oracle is None or rep.oracle.agree else EXIT_BUG
    if args.format == "json":
        return code, to_json(report_to_dict(rep)), rep
    return code, render_text(rep, args.trace), rep


def _error(text, kind, exc, args) -> str:
    msg = str(exc)
    if args.format == "json":
        return to_json({"input": text, "error": f"{kind}: {msg}"})
    return f"input: {text}\n{kind}: {msg}"


def run_batch(path: str, args, stdout=None, stderr=None) -> int:
    stdout, stderr = stdout or sys.stdout, stderr or sys.stderr
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        print(f"cannot read {path}: {exc}", file=stderr)
        return EXIT_USAGE
    summary = {"equations": 0, "agree": 0, "disagree": 0, "parse_errors": 0, "failures": 0}
    worst = EXIT_OK
    first = True
    for lineno, raw in enumerate(lines, 1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        summary["equations"] += 1
        code, body, rep = _run_one(text, args)
        if code == EXIT_USAGE:
            summary["parse_errors"] += 1
            body = body if args.format == "json" else f"line {lineno}: " + body
        elif code == EXIT_BUG:
            summary["failures"] += 1
            worst = EXIT_BUG
        if rep is not None and rep.oracle is not None:
            summary["agree" if rep.oracle.agree else "disagree"] += 1
        if args.format == "text" and not first:
            print(file=stdout)
        first = False
        print(body, file=stdout)
    if args.format == "json":
        print(to_json({"summary": summary}), file=stderr)
    else:
        if not first:
            print(file=stdout)
        print("summary: " + ", ".join(f"{k} {v}" for k, v in summary.items()), file=stdout)
    return worst


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tusi", description="Solve cubic equations in al-Tusi's canonical forms.")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("solve", help="analyse and solve one equation or a batch file")
    s.add_argument("equation", nargs="?", help='e.g. "x^3 + 2 = 3x^2"')
    s.add_argument("--digits", type=int, default=12, help="fraction digits (default 12)")
    s.add_argument("--base", type=int, choices=(10, 60), default=10)
    s.add_argument("--format", choices=("text", "json"), default="text")
    s.add_argument("--trace", action="store_true", help="show every step of the analysis")
    s.add_argument("--no-oracle", action="store_true", help="skip the independent cross-check")
    s.add_argument("--batch", metavar="FILE", help="one equation per line, # comments")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.digits < 0:
        parser.error("--digits must be >= 0")
    if args.batch:
        if args.equation:
            parser.error("give either an equation or --batch, not both")
        return run_batch(args.batch, args)
    if not args.equation:
        parser.error("an equation or --batch FILE is required")
    code, body, _ = _run_one(args.equation, args)
    stream = sys.stderr if code == EXIT_USAGE and args.format == "text" else sys.stdout
    print(body, file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
