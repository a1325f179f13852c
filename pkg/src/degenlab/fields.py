"""Scalar fields for exact linear algebra: prime fields F_p and the rationals.

Scalars are plain Python objects (int residues for F_p, Fraction for the
rationals) so matrix code can run tight loops without wrapper classes.  A
field object carries the arithmetic and normalization rules.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

_MACHINE_WORD_BOUND = 1 << 63


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class PrimeField:
    """The field F_p for a machine-word prime p."""

    p: int

    def __post_init__(self) -> None:
        if not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.p >= _MACHINE_WORD_BOUND:
            raise ValueError("prime does not fit in a machine word")

    @property
    def kind(self) -> str:
        return "prime"

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def normalize(self, x) -> int:
        return int(x) % self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def neg(self, a: int) -> int:
        return (-a) % self.p

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero in a prime field")
        return pow(a, -1, self.p)

    def elements(self) -> Iterator[int]:
        return iter(range(self.p))

    def random(self, rng) -> int:
        return rng.randbelow(self.p)

    def __repr__(self) -> str:
        return f"F{self.p}"


@dataclass(frozen=True)
class RationalField:
    """The field of exact rationals."""

    @property
    def kind(self) -> str:
        return "rational"

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def normalize(self, x) -> Fraction:
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
        return 1 / Fraction(a)

    def random(self, rng) -> Fraction:
        return rng.fraction()

    def __repr__(self) -> str:
        return "QQ"


Field = PrimeField | RationalField

QQ = RationalField()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_name(name: str) -> Field:
    """Parse "QQ" or "F<p>" (used by config files and JSON records)."""
    if name == "QQ":
        return QQ
    if name.startswith("F"):
        return GF(int(name[1:]))
    raise ValueError(f"unknown field name {name!r}")
