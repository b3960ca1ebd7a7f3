"""Exact rational arithmetic shared by every solver path.

All quantities in this package are `fractions.Fraction` values; nothing is
ever rounded.  This module provides the constructors, the canonical "p/q"
text form used by the file formats, and a display-only decimal renderer for
reports.
"""

from __future__ import annotations

from fractions import Fraction

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def rat(num: int, den: int = 1) -> Fraction:
    """Exact num/den in canonical form (positive denominator, reduced)."""
    if den == 0:
        raise ValueError("zero denominator")
    return Fraction(num, den)


def pow_int(base, exp: int) -> Fraction:
    """Exact base**exp for integer exp; negative exp requires base != 0."""
    base = Fraction(base)
    if exp < 0 and base == 0:
        raise ValueError("zero base with negative exponent")
    return base ** exp


def parse_rat(text: str) -> Fraction:
    """Parse the "p/q" (or bare "p") text form; whitespace is rejected."""
    if not isinstance(text, str) or text != text.strip() or " " in text:
        raise ValueError(f"malformed rational {text!r}")
    try:
        if "/" in text:
            num, den = text.split("/")
            return rat(int(num), int(den))
        return Fraction(int(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed rational {text!r}") from exc


def render_rat(x) -> str:
    """Render as "p/q", or "p" when the denominator is 1."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def decimal_str(x, digits: int = 20) -> str:
    """Fixed-point decimal rendering, display only (round half to even)."""
    x = Fraction(x)
    scaled = x * 10 ** digits
    units = round(scaled)  # Fraction.__round__ is exact banker's rounding
    sign = "-" if units < 0 else ""
    units = abs(units)
    whole, frac = divmod(units, 10 ** digits)
    return f"{sign}{whole}.{str(frac).zfill(digits)}"
