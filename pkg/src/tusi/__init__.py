"""Exact analysis and digit extraction for al-Tusi's cubic equations."""
from .forms import CanonicalEquation, Form, classify, parse
from .numerics import Interval, QuadExt
from .pipeline import SolveReport, solve

__all__ = ["CanonicalEquation", "Form", "Interval", "QuadExt", "SolveReport", "classify", "parse", "solve"]
__version__ = "0.1.0"
