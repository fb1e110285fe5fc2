"""Directed-rounding arithmetic for the bound verifier.

Real-valued claims ("this quantity is strictly below that one") are decided
on interval enclosures from mpmath's interval context, never on bare
floats; exact rationals are enclosed before any comparison so no conversion
can round across a boundary.  Series tails are bounded with exact Fraction
arithmetic.  A comparison that stays ambiguous after precision escalation
raises instead of guessing.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

import mpmath
from mpmath import iv

from .errors import PrecisionError

iv.dps = 60
_ESCALATION_DPS = (60, 120, 240)

Exact = int | Fraction


def enclose(x):
    """Interval enclosure of an int, Fraction, or existing interval."""
    if isinstance(x, Fraction):
        return iv.mpf(x.numerator) / iv.mpf(x.denominator)
    if isinstance(x, int):
        return iv.mpf(x)
    return x  # already an interval


def ln_i(x):
    return iv.log(enclose(x))


def sqrt_i(x):
    return iv.sqrt(enclose(x))


def surely_lt(x, y) -> bool:
    """True only when every point of x is below every point of y."""
    return enclose(x).b < enclose(y).a


def surely_gt(x, y) -> bool:
    return enclose(y).b < enclose(x).a


def surely_le(x, y) -> bool:
    return enclose(x).b <= enclose(y).a


def within(x, target: Exact, tol: Exact) -> bool:
    """Certified |x - target| <= tol (slightly conservative: the whole
    enclosure of x must sit strictly inside the enclosed tolerance band)."""
    lo = enclose(Fraction(target) - Fraction(tol))
    hi = enclose(Fraction(target) + Fraction(tol))
    ex = enclose(x)
    return lo.b < ex.a and ex.b < hi.a


def _resolve(builder: Callable[[], object], decide: Callable[[object], object]):
    """Evaluate builder at escalating precision until decide() commits."""
    saved = iv.dps
    try:
        for dps in _ESCALATION_DPS:
            iv.dps = dps
            result = decide(builder())
            if result is not None:
                return result
    finally:
        iv.dps = saved
    raise PrecisionError("enclosure still ambiguous at maximum precision")


def floor_certified(builder: Callable[[], object]) -> int:
    """floor of the real number enclosed by builder(), certified by the
    two endpoints flooring identically."""

    def decide(x):
        lo = int(mpmath.floor(x.a))
        hi = int(mpmath.floor(x.b))
        return lo if lo == hi else None

    return _resolve(builder, decide)


def ceil_certified(builder: Callable[[], object]) -> int:
    def decide(x):
        lo = int(mpmath.ceil(x.a))
        hi = int(mpmath.ceil(x.b))
        return lo if lo == hi else None

    return _resolve(builder, decide)


def fmt(x, digits: int = 12) -> str:
    """Deterministic human-readable form of an enclosure's midpoint."""
    return mpmath.nstr(mpmath.mpf(x.mid), digits)


def bounds_str(x, digits: int = 17) -> list[str]:
    """Deterministic [lower, upper] decimal strings of an enclosure."""
    return [mpmath.nstr(mpmath.mpf(x.a), digits), mpmath.nstr(mpmath.mpf(x.b), digits)]


def exp_upper(t: Fraction, terms: int = 40) -> Fraction:
    """Exact rational upper bound on e^t for 0 <= t < 1.

    Taylor series plus the geometric tail bound t^terms/terms! * 1/(1-t),
    valid because successive term ratios are at most t < 1.
    """
    if not 0 <= t < 1:
        raise ValueError("exp_upper needs 0 <= t < 1")
    total, term = Fraction(0), Fraction(1)
    for k in range(terms):
        total += term
        term = term * t / (k + 1)
    return total + term / (1 - t)
