"""Run the full pipeline on random instances and compare with the oracle.

    python3 scripts/differential_sweep.py --per-form 2000 --digits 12
"""
import argparse
import collections
import random
import time
from fractions import Fraction

from tusi.forms import CUBIC_TWO_ROOT_FORMS, CanonicalEquation, Form
from tusi.pipeline import solve


def random_instance(rng, form, hi):
    r = lambda: Fraction(rng.randint(1, hi), rng.randint(1, hi))  # noqa: E731
    a, b, c = r(), r(), r()
    if form is Form.C21:
        b = Fraction(0)
    if form is Form.C22:
        a = Fraction(0)
    return CanonicalEquation(form, a=a, b=b, c=c)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--per-form", type=int, default=1000)
    ap.add_argument("--max-coeff", type=int, default=1000)
    ap.add_argument("--digits", type=int, default=12)
    ap.add_argument("--base", type=int, choices=(10, 60), default=10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    print(f"{'form':<6}{'n':>7}{'impossible':>12}{'double':>8}{'two':>7}{'disagree':>10}{'ms/eq':>8}")
    for form in CUBIC_TWO_ROOT_FORMS:
        counts = collections.Counter()
        bad = []
        t0 = time.perf_counter()
        for _ in range(args.per_form):
            eq = random_instance(rng, form, args.max_coeff)
            rep = solve(eq, base=args.base, digits=args.digits)
            counts[rep.case] += 1
            if not rep.oracle.agree:
                bad.append((str(eq), rep.oracle.discrepancies))
        ms = 1000 * (time.perf_counter() - t0) / args.per_form
        print(f"{form.value:<6}{args.per_form:>7}{counts['impossible']:>12}{counts['double']:>8}"
              f"{counts['two']:>7}{len(bad):>10}{ms:>8.2f}")
        for eq, why in bad[:5]:
            print(f"    {eq}: {why}")


if __name__ == "__main__":
    main()
