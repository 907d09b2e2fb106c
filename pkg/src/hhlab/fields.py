"""Exact scalar arithmetic over Q and over prime fields F_p.

Scalars are `fractions.Fraction` over Q and plain ints in [0, p) over F_p.
Nothing in the package ever touches a float.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class Field:
    """The ground field: Q when p is None, F_p for a prime p otherwise."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def is_prime_field(self) -> bool:
        return self.p is not None

    @property
    def char(self) -> int:
        return self.p or 0

    def zero(self):
        return 0 if self.p is not None else Fraction(0)

    def one(self):
        return 1 if self.p is not None else Fraction(1)

    def of(self, x):
        """Coerce an int, Fraction or decimal/fraction string into the field."""
        if isinstance(x, str):
            x = Fraction(x)
        if self.p is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator of {x} vanishes mod {self.p}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p if self.p is not None else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.p is not None else a - b

    def mul(self, a, b):
        return (a * b) % self.p if self.p is not None else a * b

    def neg(self, a):
        return (-a) % self.p if self.p is not None else -a

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        if self.p is not None:
            return pow(a, -1, self.p)
        return Fraction(1) / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def fmt(self, a) -> str:
        return str(a)

    def __str__(self):
        return "Q" if self.p is None else f"F{self.p}"


QQ = Field()


def parse_field(spec: str) -> Field:
    """Accepts "Q", "Fp:P" and the short form "FP" (e.g. "F2")."""
    s = spec.strip()
    if s in ("Q", "QQ", "q"):
        return Field()
    if s.lower().startswith("fp:"):
        return Field(int(s[3:]))
    if s[0] in "Ff" and s[1:].isdigit():
        return Field(int(s[1:]))
    raise ValueError(f"cannot parse field spec {spec!r}")
