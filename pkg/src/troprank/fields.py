"""Coefficient fields for series arithmetic: the rationals and GF(p).

Both field objects expose the same tiny protocol — ``zero``/``one``,
arithmetic, parsing/formatting, and a deterministic enumeration of nonzero
elements used wherever a "first suitable constant" must be chosen
reproducibly.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import FormatError

__all__ = ["RationalField", "PrimeField", "QQ", "field_from_name", "field_name"]


class RationalField:
    """The field of rational numbers, with exact ``fractions.Fraction`` arithmetic."""

    name = "Q"
    size = None  # infinite

    zero = Fraction(0)
    one = Fraction(1)

    def coerce(self, x) -> Fraction:
        return Fraction(x)

    def parse(self, text: str) -> Fraction:
        try:
            return Fraction(str(text).strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"bad rational coefficient {text!r}: {exc}") from None

    def format(self, x: Fraction) -> str:
        return str(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def div(self, a, b):
        return Fraction(a) / b

    def is_zero(self, a) -> bool:
        return a == 0

    def nonzero_iter(self):
        """1, 2, 3, ... — the fixed enumeration of nonzero rationals we pick from."""
        k = 1
        while True:
            yield Fraction(k)
            k += 1

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "RationalField()"


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


class PrimeField:
    """GF(p) for a prime ``p``; elements are ints in ``range(p)``."""

    size: int

    def __init__(self, p: int):
        if not _is_prime(p):
            raise FormatError(f"field order must be prime, got {p}")
        self.p = p
        self.size = p
        self.zero = 0
        self.one = 1 % p
        self.name = f"Fp:{p}"

    def coerce(self, x) -> int:
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator divisible by {self.p}")
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    def parse(self, text: str) -> int:
        s = str(text).strip()
        if s.endswith(f"mod {self.p}"):
            s = s[: -len(f"mod {self.p}")].strip()
        elif "mod" in s:
            raise FormatError(f"coefficient {text!r} names a different modulus than {self.p}")
        try:
            return int(s) % self.p
        except ValueError:
            raise FormatError(f"bad GF({self.p}) coefficient {text!r}") from None

    def format(self, x: int) -> str:
        return f"{x % self.p} mod {self.p}"

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def div(self, a, b):
        return (a * self.inv(b)) % self.p

    def is_zero(self, a) -> bool:
        return a % self.p == 0

    def nonzero_iter(self):
        """1, 2, ..., p-1 — the fixed enumeration of nonzero residues."""
        for k in range(1, self.p):
            yield k

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"


QQ = RationalField()


def field_from_name(name: str):
    """Resolve ``"Q"`` or ``"Fp:<p>"`` to a field object."""
    s = str(name).strip()
    if s == "Q":
        return QQ
    if s.startswith("Fp:"):
        try:
            p = int(s[3:])
        except ValueError:
            raise FormatError(f"bad field name {name!r}") from None
        return PrimeField(p)
    raise FormatError(f"unknown field {name!r}; expected 'Q' or 'Fp:<p>'")


def field_name(field) -> str:
    return field.name
