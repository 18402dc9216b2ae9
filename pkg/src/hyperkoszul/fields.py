"""Exact coefficient fields: GF(p) for an odd prime p, and the rationals.

Elements are plain Python values (``int`` in ``[0, p)`` for GF(p),
``fractions.Fraction`` for Q); the field object carries the arithmetic.
"""
from __future__ import annotations

import os
from fractions import Fraction
from typing import Union

Scalar = Union[int, Fraction]

DEFAULT_PRIME = 65521


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _parse_number(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not an integer or rational: {text!r}") from exc


class Field:
    """Common interface. Subclasses implement the primitive operations."""

    name: str = "?"

    def __call__(self, x) -> Scalar:
        raise NotImplementedError

    @property
    def zero(self) -> Scalar:
        return self(0)

    @property
    def one(self) -> Scalar:
        return self(1)

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return a == 0

    def sign(self, k: int):
        """(-1)**k as a field element."""
        return self.one if k % 2 == 0 else self.neg(self.one)

    def to_json(self, a):
        """JSON-friendly rendering: int when integral, else "a/b"."""
        raise NotImplementedError

    def __eq__(self, other):
        return type(self) is type(other) and self.name == other.name

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return self.name


class PrimeField(Field):
    def __init__(self, p: int = DEFAULT_PRIME):
        if p == 2 or not _is_prime(p):
            raise ValueError(f"coefficient modulus must be an odd prime, got {p}")
        self.p = p
        self.name = f"gf:{p}"

    def __call__(self, x) -> int:
        if isinstance(x, str):
            x = _parse_number(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} has no image in GF({self.p})")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

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

    def to_json(self, a):
        # symmetric representative reads better for signs
        return a - self.p if a > self.p // 2 else a


class RationalField(Field):
    name = "rational"

    def __call__(self, x) -> Fraction:
        if isinstance(x, str):
            return _parse_number(x)
        return Fraction(x)

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
        return 1 / a

    def to_json(self, a):
        a = Fraction(a)
        return a.numerator if a.denominator == 1 else f"{a.numerator}/{a.denominator}"


GF = PrimeField
QQ = RationalField()


def parse_field(spec: str) -> Field:
    """``"rational"`` / ``"q"`` or ``"gf:p"`` / ``"gf"`` (p defaults to 65521)."""
    s = spec.strip().lower()
    if s in ("rational", "q", "qq"):
        return QQ
    if s == "gf":
        return PrimeField(DEFAULT_PRIME)
    if s.startswith("gf:"):
        try:
            p = int(s[3:])
        except ValueError as exc:
            raise ValueError(f"bad coefficient spec {spec!r}") from exc
        return PrimeField(p)
    raise ValueError(f"bad coefficient spec {spec!r}; use 'rational' or 'gf:p'")


def default_field() -> Field:
    """Field named by $HG_COEFF, else GF(65521)."""
    env = os.environ.get("HG_COEFF")
    return parse_field(env) if env else PrimeField(DEFAULT_PRIME)
