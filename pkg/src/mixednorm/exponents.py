"""Exponents for mixed norms: exact rationals in (0, inf) plus infinity.

Finite exponents are stored as fractions.Fraction so that harmonic means,
Holder complements, and derived exponent tables come out exact; INF is a
singleton that compares greater than every finite value and has reciprocal
exactly 0.  Floats are converted only at evaluation time.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import ValidationError


class _Infinity:
    """Positive infinity as a distinguished exponent value (not a float)."""

    __slots__ = ()

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __eq__(self, other):
        if other is self:
            return True
        if isinstance(other, float):
            return math.isinf(other) and other > 0
        return NotImplemented

    def __hash__(self):
        return hash(math.inf)

    # INF is strictly greater than every finite number and equal to itself.
    def __lt__(self, other):
        return False

    def __gt__(self, other):
        eq = self.__eq__(other)
        if eq is NotImplemented:
            if isinstance(other, (int, Fraction)):
                return True
            return NotImplemented
        return not eq

    def __le__(self, other):
        gt = self.__gt__(other)
        if gt is NotImplemented:
            return NotImplemented
        return not gt

    def __ge__(self, other):
        if other is self or isinstance(other, (int, float, Fraction)):
            return True
        return NotImplemented


INF = _Infinity()

Exponent = Fraction | _Infinity


def as_exponent(value) -> Exponent:
    """Coerce a number, Fraction, 'inf', or 'a/b' string to an exponent in (0, inf]."""
    if isinstance(value, _Infinity):
        return INF
    if isinstance(value, bool):
        raise ValidationError(f"not an exponent: {value!r}")
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ("inf", "+inf", "infinity"):
            return INF
        try:
            frac = Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"not an exponent: {value!r}") from exc
    elif isinstance(value, (int, Fraction)):
        frac = Fraction(value)
    elif isinstance(value, float):
        if math.isnan(value):
            raise ValidationError("exponent may not be NaN")
        if math.isinf(value):
            if value < 0:
                raise ValidationError("exponent must be positive")
            return INF
        frac = Fraction(value)  # exact binary value of the float
    else:
        raise ValidationError(f"not an exponent: {value!r}")
    if frac <= 0:
        raise ValidationError(f"exponent must be positive, got {value!r}")
    return frac


def reciprocal(e: Exponent) -> Fraction:
    """1/e with the exact convention 1/inf = 0."""
    if e is INF or isinstance(e, _Infinity):
        return Fraction(0)
    return 1 / e


def to_float(e: Exponent) -> float:
    if isinstance(e, _Infinity):
        return math.inf
    return float(e)


def exponent_str(e: Exponent) -> str:
    """Canonical string form: 'inf', '2', '4/3'."""
    if isinstance(e, _Infinity):
        return "inf"
    return str(e)


def exponent_to_doc(e: Exponent):
    """JSON form: 'inf', an int, a float when binary-exact, else 'a/b'."""
    if isinstance(e, _Infinity):
        return "inf"
    if e.denominator == 1:
        return int(e)
    f = float(e)
    if Fraction(f) == e:
        return f
    return str(e)


def harmonic_mean(exponents) -> Exponent:
    """Exact harmonic mean: n / sum(1/p_j), with 1/inf = 0; inf if all are inf."""
    exps = [as_exponent(e) for e in exponents]
    if not exps:
        raise ValidationError("harmonic mean of an empty exponent list")
    s = sum((reciprocal(e) for e in exps), Fraction(0))
    if s == 0:
        return INF
    return Fraction(len(exps)) / s
