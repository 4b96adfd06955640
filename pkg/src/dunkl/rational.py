"""Exact rational scalars.

All symbolic computation in this package runs over the rational numbers.
`Q` is the scalar constructor: it prefers ``gmpy2.mpq`` (fast, C-implemented)
and falls back to ``fractions.Fraction``.  Both keep values in lowest terms
with a positive denominator and interoperate freely (equality, hashing,
arithmetic), so everything downstream is agnostic to the backend.
"""

from __future__ import annotations

import numbers
import re
from fractions import Fraction

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    Q = Fraction

ZERO = Q(0)
ONE = Q(1)

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/[1-9]\d*)?$")


def is_rational(value: object) -> bool:
    """True for exact rational scalars (int, Fraction, mpq)."""
    return isinstance(value, numbers.Rational)


def parse_rational(text: str):
    """Parse a "p/q" or integer string into an exact rational.

    Floating notation ("0.5", "1e-3") is rejected: exact-mode inputs must
    stay exact end to end.
    """
    text = text.strip()
    if not _RATIONAL_RE.match(text):
        raise ValueError(f"not a rational 'p/q' literal: {text!r}")
    return Q(text)


def format_rational(value) -> str:
    """Canonical "p/q" form, omitting "/1" for integers."""
    return str(Q(value))


def rational_pow(base, exponent: int):
    """base**exponent for integer exponents, exact (negative exponents allowed)."""
    if exponent >= 0:
        return Q(base) ** exponent
    if base == 0:
        raise ZeroDivisionError("0 cannot be raised to a negative power")
    return ONE / (Q(base) ** (-exponent))
