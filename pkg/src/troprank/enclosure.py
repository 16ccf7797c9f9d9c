"""Rational interval enclosures for sqrt, ln, exp and powers.

Every transcendental quantity in this package is sandwiched between two
rationals with an explicit rounding direction, so no verified inequality
ever rests on floating-point rounding.  Precision is absolute: enclosures
are correct to roughly 2^-prec.
"""

from __future__ import annotations

import decimal
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt

from .errors import NegativeRadicand, PreconditionViolated

__all__ = [
    "Interval",
    "interval_mul",
    "interval_square",
    "sqrt_fraction",
    "sqrt_interval",
    "ln_fraction",
    "ln_interval",
    "exp_fraction",
    "exp_interval",
    "pow_interval",
    "format_fraction",
    "format_interval",
    "DEFAULT_PREC",
]

DEFAULT_PREC = 96


@dataclass(frozen=True)
class Interval:
    """A closed rational interval [lo, hi] containing the exact value."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise PreconditionViolated(f"interval endpoints out of order: {self}")

    @classmethod
    def point(cls, x) -> "Interval":
        x = Fraction(x)
        return cls(x, x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __add__(self, other: "Interval") -> "Interval":
        return Interval(self.lo + other.lo, self.hi + other.hi)

    def __sub__(self, other: "Interval") -> "Interval":
        return Interval(self.lo - other.hi, self.hi - other.lo)

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def scale(self, c) -> "Interval":
        c = Fraction(c)
        if c >= 0:
            return Interval(self.lo * c, self.hi * c)
        return Interval(self.hi * c, self.lo * c)

    def __contains__(self, x) -> bool:
        return self.lo <= Fraction(x) <= self.hi

    def __str__(self):
        return f"[{self.lo}, {self.hi}]"


def interval_mul(a: Interval, b: Interval) -> Interval:
    corners = (a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi)
    return Interval(min(corners), max(corners))


def interval_square(a: Interval) -> Interval:
    if a.lo >= 0:
        return Interval(a.lo * a.lo, a.hi * a.hi)
    if a.hi <= 0:
        return Interval(a.hi * a.hi, a.lo * a.lo)
    return Interval(Fraction(0), max(a.lo * a.lo, a.hi * a.hi))


def sqrt_fraction(x, prec: int = DEFAULT_PREC) -> Interval:
    """Enclosure of √x for rational x ≥ 0, exact on perfect squares."""
    x = Fraction(x)
    if x < 0:
        raise NegativeRadicand(f"square root of negative value {x}")
    if x == 0:
        return Interval.point(0)
    # √(p/q) = √(pq)/q; scale by 4^prec so the integer root carries prec bits.
    n = x.numerator * x.denominator
    scaled = n << (2 * prec)
    r = isqrt(scaled)
    den = x.denominator << prec
    lo = Fraction(r, den)
    hi = lo if r * r == scaled else Fraction(r + 1, den)
    return Interval(lo, hi)


def sqrt_interval(a: Interval, prec: int = DEFAULT_PREC) -> Interval:
    return Interval(sqrt_fraction(a.lo, prec).lo, sqrt_fraction(a.hi, prec).hi)


def _atanh_twice(z: Fraction, prec: int) -> Interval:
    """Enclosure of 2·atanh(z) for |z| < 1 via the odd power series."""
    eps = Fraction(1, 1 << (prec + 2))
    z2 = z * z
    total = Fraction(0)
    term = z  # z^(2k+1)
    k = 0
    while True:
        total += term / (2 * k + 1)
        k += 1
        term *= z2
        tail = 2 * abs(term) / ((2 * k + 1) * (1 - z2))
        if tail < eps:
            return Interval(2 * total - tail, 2 * total + tail)


@lru_cache(maxsize=None)
def _ln2(prec: int) -> Interval:
    return _atanh_twice(Fraction(1, 3), prec)


def ln_fraction(x, prec: int = DEFAULT_PREC) -> Interval:
    """Enclosure of ln x for rational x > 0."""
    x = Fraction(x)
    if x <= 0:
        raise PreconditionViolated(f"logarithm of non-positive value {x}")
    e = 0
    m = x
    while m > Fraction(3, 2):
        m /= 2
        e += 1
    while m < Fraction(3, 4):
        m *= 2
        e -= 1
    core = _atanh_twice((m - 1) / (m + 1), prec)
    if e == 0:
        return core
    return core + _ln2(prec).scale(e)


def ln_interval(a: Interval, prec: int = DEFAULT_PREC) -> Interval:
    return Interval(ln_fraction(a.lo, prec).lo, ln_fraction(a.hi, prec).hi)


@lru_cache(maxsize=None)
def _euler(prec: int) -> Interval:
    """Enclosure of e by the Taylor series at 1."""
    eps = Fraction(1, 1 << (prec + 2))
    total = Fraction(0)
    term = Fraction(1)  # 1/k!
    k = 0
    while True:
        total += term
        k += 1
        term /= k
        tail = 2 * term
        if tail < eps:
            return Interval(total, total + tail)


def exp_fraction(x, prec: int = DEFAULT_PREC) -> Interval:
    """Enclosure of exp x for rational x."""
    x = Fraction(x)
    n = round(x)
    m = x - n  # |m| <= 1/2
    eps = Fraction(1, 1 << (prec + 2))
    total = Fraction(0)
    term = Fraction(1)  # m^k / k!
    k = 0
    while True:
        total += term
        k += 1
        term *= m / k
        tail = 2 * abs(term)
        if tail < eps:
            break
    lo, hi = total - tail, total + tail
    assert lo > 0, "exp core enclosure must stay positive"
    if n == 0:
        return Interval(lo, hi)
    base = _euler(prec)
    if n > 0:
        return Interval(lo * base.lo**n, hi * base.hi**n)
    return Interval(lo / base.hi ** (-n), hi / base.lo ** (-n))


def exp_interval(a: Interval, prec: int = DEFAULT_PREC) -> Interval:
    return Interval(exp_fraction(a.lo, prec).lo, exp_fraction(a.hi, prec).hi)


def pow_interval(base: Interval, exponent: Interval, prec: int = DEFAULT_PREC) -> Interval:
    """Enclosure of base^exponent for base > 0, via exp(exponent·ln base)."""
    if base.lo <= 0:
        raise PreconditionViolated(f"power base must be positive, got {base}")
    return exp_interval(interval_mul(ln_interval(base, prec), exponent), prec)


# Exact "p/q" strings stay readable up to this many bits per side; past that a
# fraction can have tens of thousands of digits (probability bounds routinely
# do), so switch to a directed-rounded decimal that still encloses the value.
_EXACT_STR_BITS = 256
_APPROX_DIGITS = 24


def format_fraction(x, *, round_up: bool) -> str:
    """Render a rational exactly when compact, else as a decimal rounded
    toward +inf (round_up) or -inf, so interval endpoints stay conservative."""
    fr = Fraction(x)
    if (
        abs(fr.numerator).bit_length() <= _EXACT_STR_BITS
        and fr.denominator.bit_length() <= _EXACT_STR_BITS
    ):
        return str(fr)
    with decimal.localcontext() as ctx:
        ctx.prec = _APPROX_DIGITS
        ctx.rounding = decimal.ROUND_CEILING if round_up else decimal.ROUND_FLOOR
        approx = decimal.Decimal(fr.numerator) / decimal.Decimal(fr.denominator)
    return str(approx)


def format_interval(iv: Interval) -> list:
    """[lo, hi] strings whose parsed values still bracket the interval."""
    return [
        format_fraction(iv.lo, round_up=False),
        format_fraction(iv.hi, round_up=True),
    ]
