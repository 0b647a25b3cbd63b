"""Base fields: the rationals and prime fields of odd characteristic.

Rational elements are ``gmpy2.mpq`` values (exact, and much faster than
:class:`fractions.Fraction`).  Prime field elements are :class:`FpElement`
instances, which interoperate with ``int``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from gmpy2 import mpq, mpz
from sympy import factorint, isprime

MPQ = type(mpq(0))
MPZ = type(mpz(0))


class FieldError(ValueError):
    """Raised for invalid field construction or mixed-field arithmetic."""


_new_fp = object.__new__


class FpElement:
    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.value = value % p
        self.p = p

    def _coerce(self, other) -> int:
        if isinstance(other, FpElement):
            if other.p != self.p:
                raise FieldError(f"mixed prime fields F_{self.p} and F_{other.p}")
            return other.value
        if isinstance(other, (int, MPZ)):
            return int(other)
        if isinstance(other, (Fraction, MPQ)):
            num, den = int(other.numerator), int(other.denominator)
            if den % self.p == 0:
                raise ZeroDivisionError(f"{other} has no image in F_{self.p}")
            return num * pow(den, -1, self.p)
        return NotImplemented

    def _fast(self, v: int) -> FpElement:
        out = _new_fp(FpElement)
        out.value = v % self.p
        out.p = self.p
        return out

    def __add__(self, other):
        if type(other) is FpElement and other.p == self.p:
            return self._fast(self.value + other.value)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._fast(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        if type(other) is FpElement and other.p == self.p:
            return self._fast(self.value - other.value)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._fast(self.value - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._fast(o - self.value)

    def __mul__(self, other):
        if type(other) is FpElement and other.p == self.p:
            return self._fast(self.value * other.value)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._fast(self.value * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o % self.p == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.p)
        return FpElement(self.value * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(o, self.p) / self

    def __neg__(self):
        return self._fast(-self.value)

    def __pos__(self):
        return self

    def __pow__(self, e: int):
        if e < 0:
            if self.value == 0:
                raise ZeroDivisionError("zero to a negative power")
            return FpElement(pow(self.value, -1, self.p), self.p) ** (-e)
        return FpElement(pow(self.value, e, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, FpElement):
            return self.p == other.p and self.value == other.value
        if isinstance(other, (int, MPZ)):
            return (self.value - int(other)) % self.p == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"FpElement({self.value}, {self.p})"

    def __str__(self):
        return str(self.value)


@lru_cache(maxsize=4096)
def squarefree_part(n: int) -> int:
    """Signed square-free kernel of a nonzero integer."""
    if n == 0:
        raise ValueError("square-free part of 0")
    sign = -1 if n < 0 else 1
    out = 1
    for q, e in factorint(abs(n)).items():
        if e % 2:
            out *= q
    return sign * out


@dataclass(frozen=True)
class BaseField:
    """Either the rationals (``kind == "Q"``) or F_p for an odd prime p."""

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind == "Q":
            if self.p is not None:
                raise FieldError("the rationals take no modulus")
        elif self.kind == "Fp":
            if self.p is None or self.p == 2 or not isprime(self.p):
                raise FieldError(f"prime field modulus must be an odd prime, got {self.p}")
        else:
            raise FieldError(f"unknown field kind {self.kind!r}")

    @property
    def is_rational(self) -> bool:
        return self.kind == "Q"

    def __call__(self, x):
        if self.kind == "Q":
            if isinstance(x, MPQ):
                return x
            if isinstance(x, FpElement):
                raise FieldError("cannot coerce a prime field element into Q")
            if isinstance(x, str):
                x = Fraction(x.strip())
            if isinstance(x, float):
                raise FieldError("floats are not exact; pass a string or Fraction")
            x = Fraction(x)
            return mpq(x.numerator, x.denominator)
        if isinstance(x, FpElement):
            if x.p != self.p:
                raise FieldError(f"element of F_{x.p} is not in F_{self.p}")
            return x
        if isinstance(x, str):
            x = Fraction(x.strip())
        if isinstance(x, (Fraction, MPQ)):
            num, den = int(x.numerator), int(x.denominator)
            if den % self.p == 0:
                raise FieldError(f"{x} has no image in F_{self.p}")
            return FpElement(num * pow(den, -1, self.p), self.p)
        if isinstance(x, float):
            raise FieldError("floats are not exact; pass a string or integer")
        return FpElement(int(x), self.p)

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def contains(self, x) -> bool:
        if self.kind == "Q":
            return isinstance(x, MPQ)
        return isinstance(x, FpElement) and x.p == self.p

    def elements(self):
        if self.kind == "Q":
            raise FieldError("the rationals are infinite")
        return [FpElement(i, self.p) for i in range(self.p)]

    def units(self):
        return [a for a in self.elements() if a]

    # square classes

    def nonresidue(self):
        if self.kind == "Q":
            raise FieldError("no distinguished non-square in Q")
        return FpElement(_least_nonresidue(self.p), self.p)

    def is_square(self, a) -> bool:
        a = self(a)
        if not a:
            return True
        if self.kind == "Q":
            return squarefree_part(int(a.numerator * a.denominator)) == 1
        return pow(a.value, (self.p - 1) // 2, self.p) == 1

    def square_class(self, a):
        """Canonical square-class representative of a nonzero element.

        Over Q this is the signed square-free integer; over F_p it is 1 or
        the least quadratic non-residue.
        """
        a = self(a)
        if not a:
            raise ZeroDivisionError("zero has no square class")
        if self.kind == "Q":
            return mpq(squarefree_part(int(a.numerator * a.denominator)))
        return self.one() if self.is_square(a) else self.nonresidue()

    # text round-trip

    def format(self, a) -> str:
        return str(self(a))

    def parse(self, s: str):
        return self(s)

    def descriptor(self) -> dict:
        if self.kind == "Q":
            return {"type": "Q"}
        return {"type": "Fp", "p": self.p}

    def random_element(self, rng: random.Random, height: int = 5, nonzero: bool = False):
        while True:
            if self.kind == "Q":
                num = rng.randint(-height, height)
                den = rng.randint(1, max(1, height // 2))
                x = mpq(num, den)
            else:
                x = FpElement(rng.randrange(self.p), self.p)
            if x or not nonzero:
                return x

    def __str__(self):
        return "Q" if self.kind == "Q" else f"F_{self.p}"


@lru_cache(maxsize=None)
def _least_nonresidue(p: int) -> int:
    for a in range(2, p):
        if pow(a, (p - 1) // 2, p) == p - 1:
            return a
    raise FieldError(f"no non-residue mod {p}")


QQ = BaseField("Q")


def GF(p: int) -> BaseField:
    return BaseField("Fp", p)


def parse_field(desc: str | dict) -> BaseField:
    """Parse ``"q"``, ``"fp:7"`` or a JSON descriptor ``{"type": "Fp", "p": 7}``."""
    if isinstance(desc, dict):
        kind = desc.get("type")
        if kind == "Q":
            return QQ
        if kind == "Fp":
            return GF(int(desc["p"]))
        raise FieldError(f"unknown field descriptor {desc!r}")
    s = desc.strip().lower()
    if s in ("q", "qq", "rationals"):
        return QQ
    if s.startswith("fp:"):
        return GF(int(s[3:]))
    raise FieldError(f"cannot parse field {desc!r}; use 'q' or 'fp:<p>'")
