"""Quadratic spaces over Q and F_p, with decidable Grothendieck-Witt and Witt equality.

Isometry classes are decided by invariants: rank and discriminant over F_p;
rank, discriminant, signature and Hasse symbols over Q.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .exactalg.fields import BaseField, FieldError
from .exactalg.hilbert import REAL, hilbert_symbol
from .exactalg.matrix import Matrix, kernel_basis, mat_det, rref


class DegenerateFormError(ValueError):
    """A Gram matrix expected to be invertible has a radical."""


class NotSymmetricError(ValueError):
    pass


def _as_matrix(field: BaseField, gram) -> Matrix:
    if isinstance(gram, Matrix):
        if gram.ring != field:
            raise FieldError(f"Gram matrix over {gram.ring}, expected {field}")
        return gram
    return Matrix(field, gram)


class PreQuadSpace:
    """A symmetric bilinear form on k^n, possibly degenerate."""

    __slots__ = ("field", "gram")

    def __init__(self, field: BaseField, gram):
        g = _as_matrix(field, gram)
        if not g.is_symmetric():
            raise NotSymmetricError("Gram matrix is not symmetric")
        self.field = field
        self.gram = g

    @property
    def dim(self) -> int:
        return self.gram.nrows

    def __repr__(self):
        return f"{type(self).__name__}({self.field}, {self.gram!r})"


class QuadSpace(PreQuadSpace):
    """A nondegenerate quadratic space (symmetric invertible Gram matrix)."""

    def __init__(self, field: BaseField, gram):
        super().__init__(field, gram)
        if self.gram.nrows and not mat_det(self.gram):
            raise DegenerateFormError("Gram matrix is singular")

    @classmethod
    def _trusted(cls, field: BaseField, gram: Matrix) -> QuadSpace:
        # for Grams nondegenerate by construction (sums and scalings of spaces)
        obj = cls.__new__(cls)
        obj.field = field
        obj.gram = gram
        return obj

    @classmethod
    def diagonal(cls, field: BaseField, entries) -> QuadSpace:
        return cls(field, Matrix.diagonal(field, entries))

    @classmethod
    def zero(cls, field: BaseField) -> QuadSpace:
        return cls(field, Matrix.zeros(field, 0, 0))

    @property
    def rank(self) -> int:
        return self.gram.nrows

    def __eq__(self, other):
        return isinstance(other, QuadSpace) and self.field == other.field and self.gram == other.gram

    def __hash__(self):
        return hash((self.field, self.gram))

    def __add__(self, other: QuadSpace) -> QuadSpace:
        return direct_sum(self, other)


def hyperbolic(field: BaseField, copies: int = 1) -> QuadSpace:
    h = Matrix(field, [[0, 1], [1, 0]])
    return QuadSpace(field, Matrix.block_diag(field, [h] * copies))


def direct_sum(*spaces: QuadSpace) -> QuadSpace:
    if not spaces:
        raise ValueError("direct_sum needs at least one space")
    field = spaces[0].field
    for s in spaces:
        if s.field != field:
            raise FieldError(f"cannot add forms over {field} and {s.field}")
    return QuadSpace._trusted(field, Matrix.block_diag(field, [s.gram for s in spaces]))


def scale(lam, Q: QuadSpace) -> QuadSpace:
    lam = Q.field(lam)
    if not lam:
        raise ValueError("scaling a form by zero")
    return QuadSpace._trusted(Q.field, Q.gram.scale(lam))


# diagonalization


def diagonalize_with_basis(gram: Matrix, track_basis: bool = True) -> tuple[list, Matrix | None, int]:
    """Symmetric elimination of ``gram``.

    Returns ``(diag, B, nullity)`` with ``B.T @ gram @ B`` equal to
    ``diag(diag + [0] * nullity)`` and B invertible.  Pivots are taken as the
    first nonzero diagonal entry of the remaining block; if that diagonal is
    zero, basis vector i is replaced by e_i + e_j for the first nonzero
    off-diagonal entry (i, j).
    """
    field = gram.ring
    n = gram.nrows
    A = [list(r) for r in gram.rows]
    # columns of B are the new basis vectors
    B = [list(r) for r in Matrix.identity(field, n).rows] if track_basis else []
    diag = []

    def swap(i, j):
        A[i], A[j] = A[j], A[i]
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in B:
            r[i], r[j] = r[j], r[i]

    def add_to(i, j, c):
        # basis vector i += c * basis vector j
        for r in A:
            if r[j]:
                r[i] = r[i] + c * r[j]
        A[i] = [x + c * y if y else x for x, y in zip(A[i], A[j])]
        for r in B:
            r[i] = r[i] + c * r[j]

    for k in range(n):
        piv = next((i for i in range(k, n) if A[i][i]), None)
        if piv is None:
            pair = next(((i, j) for i in range(k, n) for j in range(i + 1, n) if A[i][j]), None)
            if pair is None:
                return diag, (Matrix(field, B) if track_basis else None), n - k
            i, j = pair
            add_to(i, j, field.one())
            piv = i
        if piv != k:
            swap(piv, k)
        a = A[k][k]
        inv = 1 / a
        for j in range(k + 1, n):
            if A[k][j]:
                add_to(j, k, -A[k][j] * inv)
        diag.append(a)
    return diag, (Matrix(field, B) if track_basis else None), 0


def diagonalize(Q: QuadSpace) -> list:
    diag, _, nullity = diagonalize_with_basis(Q.gram, track_basis=False)
    if nullity:
        raise DegenerateFormError("cannot diagonalize a degenerate form; reduce it first")
    return diag


# invariants


@dataclass(frozen=True)
class GWInvariants:
    """Complete isometry invariants.

    ``hasse`` lists (place, symbol) pairs: the real place and 2 always, odd
    primes only where the symbol is -1.  ``signature`` and ``hasse`` are
    ``None`` / empty over F_p.
    """

    field: BaseField
    rank: int
    disc: object
    signature: int | None
    hasse: tuple

    def as_dict(self) -> dict:
        return {
            "rank": self.rank,
            "disc": str(self.disc),
            "signature": self.signature,
            "hasse": {str(k): v for k, v in self.hasse},
        }


def _hasse(classes: list) -> tuple:
    from sympy import primefactors

    primes = {2}
    for d in classes:
        primes.update(primefactors(abs(int(d))))
    out = []
    for place in [REAL] + sorted(primes):
        s = 1
        for a, b in combinations(classes, 2):
            s *= hilbert_symbol(a, b, place)
        if place in (REAL, 2) or s == -1:
            out.append((place, s))
    return tuple(out)


def invariants_of_diagonal(field: BaseField, diag: list) -> GWInvariants:
    r = len(diag)
    det = field.one()
    for d in diag:
        det = det * d
    sign = -1 if (r * (r - 1) // 2) % 2 else 1
    disc = field.square_class(det * sign)
    if not field.is_rational:
        return GWInvariants(field, r, disc, None, ())
    classes = [field.square_class(d) for d in diag]
    sig = sum(1 if d > 0 else -1 for d in diag)
    return GWInvariants(field, r, disc, sig, _hasse(classes))


def gw_invariants(Q: QuadSpace) -> GWInvariants:
    return invariants_of_diagonal(Q.field, diagonalize(Q))


# Grothendieck-Witt classes


class GWClass:
    """Formal difference pos - neg of two quadratic spaces."""

    __slots__ = ("field", "pos", "neg")

    def __init__(self, pos: QuadSpace, neg: QuadSpace | None = None):
        if neg is None:
            neg = QuadSpace.zero(pos.field)
        if pos.field != neg.field:
            raise FieldError("class parts over different fields")
        self.field = pos.field
        self.pos = pos
        self.neg = neg

    @classmethod
    def zero(cls, field: BaseField) -> GWClass:
        return cls(QuadSpace.zero(field))

    @property
    def rank(self) -> int:
        """Virtual rank pos - neg."""
        return self.pos.rank - self.neg.rank

    def __add__(self, other: GWClass) -> GWClass:
        return GWClass(direct_sum(self.pos, other.pos), direct_sum(self.neg, other.neg))

    def __neg__(self) -> GWClass:
        return GWClass(self.neg, self.pos)

    def __sub__(self, other: GWClass) -> GWClass:
        return self + (-other)

    def scale(self, lam) -> GWClass:
        return GWClass(scale(lam, self.pos), scale(lam, self.neg))

    def __repr__(self):
        return f"GWClass(pos={self.pos.gram!r}, neg={self.neg.gram!r})"


def _as_class(x) -> GWClass:
    if isinstance(x, GWClass):
        return x
    if isinstance(x, QuadSpace):
        return GWClass(x)
    raise TypeError(f"expected a QuadSpace or GWClass, got {type(x).__name__}")


def gw_equal(A, B) -> bool:
    """Equality in GW(k), decided on A.pos + B.neg versus B.pos + A.neg."""
    A, B = _as_class(A), _as_class(B)
    if A.field != B.field:
        raise FieldError(f"classes over {A.field} and {B.field}")
    X = direct_sum(A.pos, B.neg)
    Y = direct_sum(B.pos, A.neg)
    if X.rank != Y.rank:
        return False
    return gw_invariants(X) == gw_invariants(Y)


def is_metabolic(Q) -> bool:
    """Whether the Witt class vanishes (for a class: pos + <-1>neg is metabolic)."""
    if isinstance(Q, GWClass):
        Q = direct_sum(Q.pos, scale(-1, Q.neg))
    if Q.rank % 2:
        return False
    if Q.rank == 0:
        return True
    return gw_invariants(Q) == gw_invariants(hyperbolic(Q.field, Q.rank // 2))


def witt_equal(A, B) -> bool:
    return is_metabolic(_as_class(A) - _as_class(B))


# reduction of pre-spaces


def reduce_with_basis(P: PreQuadSpace, radical: list[tuple] | None = None) -> tuple[QuadSpace, list[tuple], list[int]]:
    """Nondegenerate quotient of P by its radical.

    Returns ``(Q, radical, complement)`` where ``complement`` lists the
    standard basis indices that extend a radical basis to a basis of k^n;
    Q is the form restricted to their span.  A precomputed radical basis may
    be passed in.
    """
    field = P.field
    n = P.dim
    if radical is None:
        radical = kernel_basis(P.gram)
    if radical:
        _, pivots = rref(Matrix(field, radical, n))
        complement = [j for j in range(n) if j not in pivots]
    else:
        complement = list(range(n))
    G = P.gram.submatrix(complement, complement)
    return QuadSpace(field, G), radical, complement


def reduce(P: PreQuadSpace) -> QuadSpace:
    return reduce_with_basis(P)[0]


# Witt group of a finite field


@dataclass(frozen=True)
class WittTable:
    p: int
    labels: tuple
    table: tuple
    group: str

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "classes": list(self.labels),
            "table": [list(r) for r in self.table],
            "group": self.group,
        }


def witt_table(p: int) -> WittTable:
    """Addition table of W(F_p), found by brute force over diagonal forms of rank <= 2."""
    from .exactalg.fields import GF

    F = GF(p)
    u = F.nonresidue()
    candidates = [((), QuadSpace.zero(F))]
    for entries in ([1], [int(u)], [1, 1], [1, int(u)], [int(u), int(u)]):
        candidates.append((tuple(entries), QuadSpace.diagonal(F, entries)))
    reps: list = []
    for label, Q in candidates:
        if not any(witt_equal(Q, R) for _, R in reps):
            reps.append((label, Q))
    names = tuple("0" if not lab else "<" + ",".join(map(str, lab)) + ">" for lab, _ in reps)

    def find(Q):
        for i, (_, R) in enumerate(reps):
            if witt_equal(Q, R):
                return i
        raise AssertionError("Witt class outside the enumerated representatives")

    idx = [[find(direct_sum(A, B)) for _, B in reps] for _, A in reps]
    table = tuple(tuple(names[j] for j in row) for row in idx)
    # an element of order 4 exists iff the group is cyclic
    cyclic = any(idx[i][i] != 0 for i in range(len(reps)))
    if len(reps) != 4:
        raise AssertionError(f"W(F_{p}) should have 4 elements, found {len(reps)}")
    return WittTable(p, names, table, "Z/4" if cyclic else "Z/2 x Z/2")
