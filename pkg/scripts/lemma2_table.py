"""Small root of ax^2 - x^3 = c as c sweeps (0, c0), with its lemma-2 class.

The class flips from Below to Above at c = c0/2, where the root is a/3.
"""
import argparse
from fractions import Fraction

from tusi.analysis import lemma2_classify
from tusi.extraction import extract_c21_small
from tusi.forms import CanonicalEquation, Form


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--a", type=Fraction, default=Fraction(3))
    ap.add_argument("--steps", type=int, default=12)
    ap.add_argument("--digits", type=int, default=10)
    ap.add_argument("--base", type=int, choices=(10, 60), default=10)
    args = ap.parse_args()

    a = args.a
    c0 = 4 * a**3 / 27
    print(f"a = {a}, c0 = {c0}, a/3 = {a / 3}")
    print(f"{'c/c0':>8}  {'class':<6}  x1")
    for k in range(1, args.steps):
        c = c0 * Fraction(k, args.steps)
        eq = CanonicalEquation(Form.C21, a=a, c=c)
        cls = lemma2_classify(eq)
        x1 = extract_c21_small(eq, cls, args.base, args.digits)
        print(f"{float(c / c0):>8.4f}  {cls.value:<6}  {x1}")


if __name__ == "__main__":
    main()
