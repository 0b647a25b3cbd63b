"""The quadratic space <N> on k[t, 1/t]/(N) for a nonzero Laurent polynomial N.

Two linear functionals on the quotient are available.  The coefficient
functional takes the t^(m-1) coefficient of the reduced element (the sum of
residues of a/N over the zeros of N in G_m); the junior-trace functional
takes the constant term of the trace of multiplication over k[N].
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, gcd, log2

from sympy import divisors

from .corr import GM, PT, Correspondence
from .exactalg.fields import BaseField
from .exactalg.matrix import Matrix
from .exactalg.poly import LaurentPoly, NormalizationError, UniPoly, ZeroDivisorError, laurent_normalize, poly_divmod
from .quadform import DegenerateFormError, QuadSpace

COEFFICIENT = "coefficient"
JUNIOR_TRACE = "junior-trace"
MODES = (COEFFICIENT, JUNIOR_TRACE)


class NotApplicableError(ValueError):
    pass


class PreconditionError(ValueError):
    pass


class FiniteAlgebra:
    """k[t]/(N) for a monic N of positive degree, basis 1, t, ..., t^(m-1)."""

    __slots__ = ("field", "modulus", "_tinv")

    def __init__(self, modulus: UniPoly):
        if not modulus.is_monic() or modulus.degree < 1:
            raise NormalizationError(f"modulus {modulus} must be monic of positive degree")
        self.field = modulus.field
        self.modulus = modulus
        self._tinv = None

    @property
    def dim(self) -> int:
        return self.modulus.degree

    def t_invertible(self) -> bool:
        return bool(self.modulus.coeff(0))

    def _t_inverse(self) -> UniPoly:
        if self._tinv is None:
            if not self.t_invertible():
                raise ZeroDivisorError("t is not invertible modulo a modulus divisible by t")
            # N = t*h + a0  =>  t * (-h / a0) = 1
            a0 = self.modulus.coeff(0)
            h = UniPoly._raw(self.field, self.modulus.coeffs[1:])
            self._tinv = h * (-1 / a0)
        return self._tinv

    def reduce(self, a) -> UniPoly:
        """Image of a scalar, polynomial or Laurent polynomial in the quotient."""
        if isinstance(a, LaurentPoly):
            if a.is_zero():
                return UniPoly(self.field)
            body = self.reduce(a.body)
            if a.val >= 0:
                return self.mul(body, self.power_of_t(a.val))
            return self.mul(body, self.power(self._t_inverse(), -a.val))
        if not isinstance(a, UniPoly):
            a = UniPoly.constant(self.field, a)
        return poly_divmod(a, self.modulus)[1]

    def mul(self, a: UniPoly, b: UniPoly) -> UniPoly:
        return poly_divmod(a * b, self.modulus)[1]

    def power(self, a: UniPoly, e: int) -> UniPoly:
        out = UniPoly.constant(self.field, 1) % self.modulus
        base = self.reduce(a)
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def power_of_t(self, e: int) -> UniPoly:
        return self.reduce(UniPoly.monomial(self.field, e)) if e < 2 * self.dim else self.power(UniPoly.t(self.field), e)

    def inverse(self, a: UniPoly) -> UniPoly:
        g, s, _ = self.reduce(a).xgcd(self.modulus)
        if g.degree != 0:
            raise ZeroDivisorError(f"{a} is a zero divisor modulo {self.modulus}")
        return self.reduce(s * (1 / g.coeffs[0]))

    def coords(self, a) -> list:
        a = self.reduce(a)
        return [a.coeff(i) for i in range(self.dim)]

    def from_coords(self, v) -> UniPoly:
        return UniPoly(self.field, list(v))

    def mul_matrix(self, a) -> Matrix:
        """Matrix of x -> a*x; column j is a * t^j."""
        a = self.reduce(a)
        cols = []
        x = UniPoly.constant(self.field, 1)
        t = UniPoly.t(self.field)
        for _ in range(self.dim):
            cols.append(self.coords(self.mul(a, x)))
            x = self.mul(x, t)
        return Matrix.from_columns(self.field, cols, self.dim)

    def companion(self) -> Matrix:
        return self.mul_matrix(UniPoly.t(self.field))

    def trace(self, a) -> object:
        M = self.mul_matrix(a)
        acc = self.field.zero()
        for i in range(self.dim):
            acc = acc + M[i, i]
        return acc

    def __repr__(self):
        return f"FiniteAlgebra({self.field}[t]/({self.modulus}))"


@dataclass(frozen=True)
class ResidueFunctional:
    algebra: FiniteAlgebra
    mode: str
    v: int
    c: object

    def __call__(self, a):
        A = self.algebra
        shift = LaurentPoly.t(A.field, -self.v)
        if isinstance(a, UniPoly):
            a = LaurentPoly.from_poly(a)
        b = A.reduce(shift * a)
        if self.mode == COEFFICIENT:
            val = b.coeff(A.dim - 1)
        else:
            val = _junior_trace(A, b)
        return val / self.c


def _junior_trace(A: FiniteAlgebra, a: UniPoly):
    """Constant term of the k[N]-trace of multiplication by a on k[t].

    k[t] is free over k[N] on 1, t, ..., t^(m-1).  The (i, i) entry of the
    multiplication matrix is the t^i coefficient in each base-N digit of
    a * t^i; only the digit of N^0 contributes to the constant term.
    """
    m = A.dim
    acc = A.field.zero()
    for i in range(m):
        x = a * UniPoly.monomial(A.field, i)
        digits = []
        while not x.is_zero():
            x, rem = poly_divmod(x, A.modulus)
            digits.append(rem)
        if digits:
            acc = acc + digits[0].coeff(i)
    return acc


def residue_functional(N: LaurentPoly, mode: str = COEFFICIENT) -> ResidueFunctional:
    if mode not in MODES:
        raise ValueError(f"unknown functional mode {mode!r}; use one of {MODES}")
    v, c, Nt = laurent_normalize(N)
    if Nt.degree < 1:
        raise NotApplicableError(f"{N} is a unit; its zero locus is empty")
    return ResidueFunctional(FiniteAlgebra(Nt), mode, v, c)


def residue_space(N: LaurentPoly, mode: str = COEFFICIENT) -> Correspondence:
    """<N> as a correspondence pt -> gm: Gram l(t^(i+j)), t acting by the companion matrix."""
    l = residue_functional(N, mode)
    A = l.algebra
    m = A.dim
    F = A.field
    vals = [l(UniPoly.monomial(F, k)) for k in range(2 * m - 1)]
    S = Matrix(F, [[vals[i + j] for j in range(m)] for i in range(m)])
    T = A.companion()
    _check_nondegenerate(F, S, mode)
    assert T.T @ S == S @ T, "multiplication by t is not self-adjoint"
    return Correspondence(F, PT, GM, S, T)


def _check_nondegenerate(field: BaseField, S: Matrix, mode: str):
    try:
        QuadSpace(field, S)
    except DegenerateFormError as e:
        raise DegenerateFormError(f"residue form is degenerate in {mode} mode; the functional is not a valid dualizing form here") from e


def residue_quadspace(N: LaurentPoly, mode: str = COEFFICIENT) -> QuadSpace:
    C = residue_space(N, mode)
    return QuadSpace(C.field, C.gram)


def twisted_residue_quadspace(N: LaurentPoly, u, mode: str = COEFFICIENT) -> QuadSpace:
    """The form (a, b) -> l(u a b) on the quotient by N, for u invertible there.

    With the coefficient functional, <N1 N2> for coprime N1, N2 is the sum of
    the twists of <N1> by N2^-1 and of <N2> by N1^-1.
    """
    l = residue_functional(N, mode)
    A = l.algebra
    F = A.field
    u = A.reduce(u)
    A.inverse(u)  # raises unless u is a unit of the quotient
    vals = [l(A.mul(u, A.power_of_t(k))) for k in range(2 * A.dim - 1)]
    m = A.dim
    return QuadSpace(F, Matrix(F, [[vals[i + j] for j in range(m)] for i in range(m)]))


# simple roots


def _rational_roots(f: UniPoly) -> list:
    pairs = [(int(c.numerator), int(c.denominator)) for c in f.coeffs]
    lcm = 1
    for _, d in pairs:
        lcm = lcm * d // gcd(lcm, d)
    ints = [num * (lcm // d) for num, d in pairs]
    # strip zero roots
    k = 0
    while ints[k] == 0:
        k += 1
    roots = [f.field.zero()] if k else []
    ints = ints[k:]
    a0, an = abs(ints[0]), abs(ints[-1])
    cand = set()
    for p in divisors(a0):
        for q in divisors(an):
            cand.add(Fraction(p, q))
            cand.add(Fraction(-p, q))
    roots += sorted(f.field(x) for x in cand if not f(f.field(x)))
    return roots


def roots_in_field(f: UniPoly) -> list:
    F = f.field
    if F.is_rational:
        return _rational_roots(f)
    return [a for a in F.elements() if not f(a)]


def split_at_simple_roots(N) -> QuadSpace:
    """Diagonal form <c^-1 a^-v N'(a)> over the roots a of the normalized N."""
    if isinstance(N, UniPoly):
        N = LaurentPoly.from_poly(N)
    v, c, Nt = laurent_normalize(N)
    roots = roots_in_field(Nt)
    if len(roots) != Nt.degree:
        raise NotApplicableError(f"{Nt} does not split into distinct linear factors over {Nt.field}")
    d = Nt.derivative()
    entries = [d(a) * a ** (-v) / c for a in roots]
    return QuadSpace.diagonal(Nt.field, entries)


# square roots of unipotent elements


def nilradical_modulus(A: FiniteAlgebra) -> UniPoly:
    """The square-free part of the modulus; the nilradical is the ideal it generates."""
    return A.modulus.squarefree_part()


def sqrt_one_plus_nilpotent(A: FiniteAlgebra, q) -> UniPoly:
    """The square root of q that is congruent to 1 modulo the nilradical."""
    q = A.reduce(q)
    one = UniPoly.constant(A.field, 1)
    rad = nilradical_modulus(A)
    if not ((q - one) % rad).is_zero():
        raise PreconditionError("q is not congruent to 1 modulo the nilradical")
    s = one % A.modulus
    half = A.field(Fraction(1, 2))
    # Newton's iteration doubles the order of agreement each step
    for _ in range(ceil(log2(A.dim + 1)) + 2):
        if A.mul(s, s) == q:
            break
        s = A.reduce((s + A.mul(q, A.inverse(s))) * half)
    assert A.mul(s, s) == q, "square-root iteration did not converge"
    return s
