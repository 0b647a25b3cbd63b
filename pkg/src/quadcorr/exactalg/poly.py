"""Dense univariate polynomials k[t] and Laurent polynomials k[t, 1/t]."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import zip_longest

from .fields import BaseField, FieldError


class NormalizationError(ValueError):
    """Division by a non-monic polynomial where a monic one is required."""


class ZeroDivisorError(ZeroDivisionError):
    """A zero polynomial was used where a nonzero one is needed."""


class NotDivisibleError(ArithmeticError):
    pass


def _strip(coeffs: list) -> tuple:
    n = len(coeffs)
    while n and not coeffs[n - 1]:
        n -= 1
    return tuple(coeffs[:n])


class UniPoly:
    """Polynomial over a base field, coefficients stored lowest degree first.

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field: BaseField, coeffs=()):
        self.field = field
        self.coeffs = _strip([field(c) for c in coeffs])

    @classmethod
    def _raw(cls, field, coeffs):
        obj = cls.__new__(cls)
        obj.field = field
        obj.coeffs = _strip(list(coeffs))
        return obj

    @classmethod
    def t(cls, field: BaseField) -> UniPoly:
        return cls._raw(field, [field.zero(), field.one()])

    @classmethod
    def constant(cls, field: BaseField, c) -> UniPoly:
        return cls(field, [c])

    @classmethod
    def monomial(cls, field: BaseField, k: int, c=1) -> UniPoly:
        return cls._raw(field, [field.zero()] * k + [field(c)])

    @classmethod
    def from_roots(cls, field: BaseField, roots) -> UniPoly:
        out = cls.constant(field, 1)
        for r in roots:
            out = out * cls(field, [-field(r), 1])
        return out

    # basic properties

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero()

    def coeff(self, i: int):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.field.zero()

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def monic(self) -> UniPoly:
        if not self.coeffs:
            raise ZeroDivisorError("zero polynomial has no monic associate")
        inv = 1 / self.lc()
        return UniPoly._raw(self.field, [c * inv for c in self.coeffs])

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, LaurentPoly):
            return other == self
        try:
            c = self.field(other)
        except (TypeError, ValueError, FieldError):
            return NotImplemented
        return self.coeffs == _strip([c])

    def __hash__(self):
        return hash(("UniPoly", self.field, self.coeffs))

    # arithmetic

    def _lift(self, other) -> UniPoly:
        if isinstance(other, UniPoly):
            if other.field != self.field:
                raise FieldError("polynomials over different fields")
            return other
        return UniPoly._raw(self.field, [self.field(other)])

    def __add__(self, other):
        if isinstance(other, LaurentPoly):
            return NotImplemented
        o = self._lift(other)
        z = self.field.zero()
        return UniPoly._raw(self.field, [a + b for a, b in zip_longest(self.coeffs, o.coeffs, fillvalue=z)])

    __radd__ = __add__

    def __neg__(self):
        return UniPoly._raw(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, LaurentPoly):
            return NotImplemented
        o = self._lift(other)
        if not self.coeffs or not o.coeffs:
            return UniPoly._raw(self.field, [])
        out = [self.field.zero()] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] = out[i + j] + a * b
        return UniPoly._raw(self.field, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        out = UniPoly.constant(self.field, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def shift(self, k: int) -> UniPoly:
        """Multiply by t**k (k >= 0)."""
        return UniPoly._raw(self.field, [self.field.zero()] * k + list(self.coeffs))

    def field_divmod(self, other: UniPoly) -> tuple[UniPoly, UniPoly]:
        """Euclidean division by any nonzero polynomial over the field."""
        other = self._lift(other)
        if other.is_zero():
            raise ZeroDivisorError("polynomial division by zero")
        inv = 1 / other.lc()
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return UniPoly._raw(self.field, []), self
        quot = [self.field.zero()] * (dq + 1)
        d = other.degree
        for k in range(dq, -1, -1):
            c = rem[k + d] * inv
            quot[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] = rem[k + j] - c * b
        return UniPoly._raw(self.field, quot), UniPoly._raw(self.field, rem[:d])

    def __mod__(self, other):
        return self.field_divmod(other)[1]

    def __floordiv__(self, other):
        return self.field_divmod(other)[0]

    def exact_div(self, other) -> UniPoly:
        q, r = self.field_divmod(other)
        if r:
            raise NotDivisibleError(f"{other} does not divide {self}")
        return q

    def __call__(self, x):
        """Horner evaluation at any element of a k-algebra."""
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * x + c
        return self.field.zero() if acc is None else acc

    def derivative(self) -> UniPoly:
        return UniPoly._raw(self.field, [c * i for i, c in enumerate(self.coeffs)][1:])

    def gcd(self, other: UniPoly) -> UniPoly:
        """Monic gcd (zero if both are zero)."""
        a, b = self, self._lift(other)
        while b:
            a, b = b, a % b
        return a.monic() if a else a

    def xgcd(self, other: UniPoly) -> tuple[UniPoly, UniPoly, UniPoly]:
        """Return (g, s, u) with s*self + u*other = g, g monic."""
        r0, r1 = self, self._lift(other)
        s0, s1 = UniPoly.constant(self.field, 1), UniPoly(self.field)
        u0, u1 = UniPoly(self.field), UniPoly.constant(self.field, 1)
        while r1:
            q, r = r0.field_divmod(r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            u0, u1 = u1, u0 - q * u1
        if not r0:
            return r0, s0, u0
        inv = 1 / r0.lc()
        return r0 * inv, s0 * inv, u0 * inv

    def squarefree_part(self) -> UniPoly:
        """Monic product of the distinct irreducible factors (perfect fields only)."""
        if self.degree <= 0:
            return UniPoly.constant(self.field, 1)
        f = self.monic()
        d = f.derivative()
        if d.is_zero():
            # f(t) = h(t^p) = h(t)^p over F_p
            p = self.field.p
            return UniPoly._raw(self.field, f.coeffs[::p]).squarefree_part()
        g = f.gcd(d)
        core = f.exact_div(g).monic()
        # what is left of g once factors of core are removed has multiplicities divisible by p
        rest = g
        while True:
            c = rest.gcd(core)
            if c.degree <= 0:
                break
            rest = rest.exact_div(c)
        if rest.degree <= 0:
            return core
        return (core * rest.squarefree_part()).monic()

    def __repr__(self):
        return f"UniPoly({self})"

    def __str__(self):
        return _format_terms(self.field, {i: c for i, c in enumerate(self.coeffs) if c})


def poly_divmod(a: UniPoly, b: UniPoly) -> tuple[UniPoly, UniPoly]:
    """Division with remainder by a monic polynomial: a = q*b + r, deg r < deg b."""
    if b.is_zero():
        raise ZeroDivisorError("division by the zero polynomial")
    if not b.is_monic():
        raise NormalizationError(f"divisor {b} is not monic; normalize it first")
    return a.field_divmod(b)


class LaurentPoly:
    """Element t**val * body of k[t, 1/t], with body(0) != 0 unless zero."""

    __slots__ = ("field", "val", "body")

    def __init__(self, field: BaseField, coeffs=(), val: int = 0):
        body = UniPoly(field, coeffs)
        self.field = field
        self.val, self.body = _canon(body, val)

    @classmethod
    def _make(cls, body: UniPoly, val: int) -> LaurentPoly:
        obj = cls.__new__(cls)
        obj.field = body.field
        obj.val, obj.body = _canon(body, val)
        return obj

    @classmethod
    def from_poly(cls, p: UniPoly, val: int = 0) -> LaurentPoly:
        return cls._make(p, val)

    @classmethod
    def t(cls, field: BaseField, k: int = 1) -> LaurentPoly:
        return cls._make(UniPoly.constant(field, 1), k)

    @classmethod
    def constant(cls, field: BaseField, c) -> LaurentPoly:
        return cls._make(UniPoly.constant(field, c), 0)

    @classmethod
    def from_terms(cls, field: BaseField, terms: dict[int, object]) -> LaurentPoly:
        terms = {k: field(v) for k, v in terms.items() if field(v)}
        if not terms:
            return cls(field)
        lo, hi = min(terms), max(terms)
        z = field.zero()
        return cls._make(UniPoly._raw(field, [terms.get(i, z) for i in range(lo, hi + 1)]), lo)

    def is_zero(self) -> bool:
        return self.body.is_zero()

    def __bool__(self):
        return not self.body.is_zero()

    @property
    def bottom_degree(self) -> int:
        if self.is_zero():
            raise ZeroDivisorError("zero Laurent polynomial has no degree")
        return self.val

    @property
    def top_degree(self) -> int:
        if self.is_zero():
            raise ZeroDivisorError("zero Laurent polynomial has no degree")
        return self.val + self.body.degree

    def coeff(self, k: int):
        return self.body.coeff(k - self.val)

    def terms(self) -> dict[int, object]:
        return {self.val + i: c for i, c in enumerate(self.body.coeffs) if c}

    def is_unit(self) -> bool:
        return self.body.degree == 0

    def is_constant(self) -> bool:
        return self.is_zero() or (self.body.degree == 0 and self.val == 0)

    def constant_value(self):
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return self.coeff(0)

    def inverse(self) -> LaurentPoly:
        if not self.is_unit():
            raise ZeroDivisionError(f"{self} is not a unit of k[t, 1/t]")
        return LaurentPoly._make(UniPoly.constant(self.field, 1 / self.body.coeffs[0]), -self.val)

    def to_poly(self) -> UniPoly:
        """The polynomial t**val * body; requires val >= 0."""
        if self.val < 0:
            raise ValueError(f"{self} has negative powers of t")
        return self.body.shift(self.val) if self else self.body

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.field == other.field and self.val == other.val and self.body == other.body
        if isinstance(other, UniPoly):
            return self == LaurentPoly._make(other, 0)
        try:
            c = self.field(other)
        except (TypeError, ValueError, FieldError):
            return NotImplemented
        return self == LaurentPoly.constant(self.field, c)

    def __hash__(self):
        return hash(("Laurent", self.field, self.val, self.body.coeffs))

    def _lift(self, other) -> LaurentPoly:
        if isinstance(other, LaurentPoly):
            if other.field != self.field:
                raise FieldError("Laurent polynomials over different fields")
            return other
        if isinstance(other, UniPoly):
            return LaurentPoly._make(other, 0)
        return LaurentPoly.constant(self.field, other)

    def __add__(self, other):
        o = self._lift(other)
        if self.is_zero():
            return o
        if o.is_zero():
            return self
        lo = min(self.val, o.val)
        a = self.body.shift(self.val - lo)
        b = o.body.shift(o.val - lo)
        return LaurentPoly._make(a + b, lo)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._make(-self.body, self.val)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return LaurentPoly._make(self.body * o.body, self.val + o.val)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return LaurentPoly._make(self.body ** e, self.val * e)

    def exact_div(self, other) -> LaurentPoly:
        o = self._lift(other)
        if o.is_zero():
            raise ZeroDivisorError("division by zero in k[t, 1/t]")
        return LaurentPoly._make(self.body.exact_div(o.body), self.val - o.val)

    def __call__(self, x):
        """Evaluate at a unit of a k-algebra (scalars or anything with ** -1)."""
        if self.is_zero():
            return self.field.zero()
        return self.body(x) * (x ** self.val)

    def __repr__(self):
        return f"LaurentPoly({self})"

    def __str__(self):
        return _format_terms(self.field, self.terms())


def _canon(body: UniPoly, val: int) -> tuple[int, UniPoly]:
    if body.is_zero():
        return 0, body
    k = 0
    while not body.coeffs[k]:
        k += 1
    if k:
        body = UniPoly._raw(body.field, body.coeffs[k:])
    return val + k, body


def _format_terms(field, terms: dict[int, object]) -> str:
    if not terms:
        return "0"
    parts = []
    for k in sorted(terms, reverse=True):
        c = terms[k]
        s = str(c)
        if k == 0:
            mono = s
        else:
            x = "t" if k == 1 else f"t^{k}"
            if s == "1":
                mono = x
            elif s == "-1":
                mono = "-" + x
            else:
                mono = f"{s}*{x}"
        parts.append(mono)
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


@dataclass(frozen=True)
class LaurentRing:
    """The coordinate ring k[t, 1/t] of the multiplicative group."""

    field: BaseField

    def zero(self) -> LaurentPoly:
        return LaurentPoly(self.field)

    def one(self) -> LaurentPoly:
        return LaurentPoly.constant(self.field, 1)

    def gen(self) -> LaurentPoly:
        return LaurentPoly.t(self.field)

    def __call__(self, x) -> LaurentPoly:
        if isinstance(x, LaurentPoly):
            return x
        if isinstance(x, UniPoly):
            return LaurentPoly.from_poly(x)
        return LaurentPoly.constant(self.field, x)

    def exact_div(self, a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
        return a.exact_div(b)

    def contains(self, x) -> bool:
        return isinstance(x, LaurentPoly) and x.field == self.field

    def __str__(self):
        return f"{self.field}[t, 1/t]"


@dataclass(frozen=True)
class PolyRing:
    """The polynomial ring k[t]."""

    field: BaseField

    def zero(self) -> UniPoly:
        return UniPoly(self.field)

    def one(self) -> UniPoly:
        return UniPoly.constant(self.field, 1)

    def gen(self) -> UniPoly:
        return UniPoly.t(self.field)

    def __call__(self, x) -> UniPoly:
        if isinstance(x, UniPoly):
            return x
        return UniPoly.constant(self.field, x)

    def exact_div(self, a: UniPoly, b: UniPoly) -> UniPoly:
        return a.exact_div(b)

    def contains(self, x) -> bool:
        return isinstance(x, UniPoly) and x.field == self.field

    def __str__(self):
        return f"{self.field}[t]"


def laurent_normalize(L: LaurentPoly):
    """Split a nonzero Laurent polynomial as c * t**v * N with N monic, N(0) != 0.

    Returns the triple ``(v, c, N)``; it is unique.
    """
    if L.is_zero():
        raise ZeroDivisorError("the zero Laurent polynomial vanishes on all of G_m")
    c = L.body.lc()
    return L.val, c, L.body.monic()
