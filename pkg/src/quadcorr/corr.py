"""Quadratic correspondences between the point and the multiplicative group.

A correspondence is a free module over the source ring (k or k[t, 1/t]) with a
symmetric Gram matrix of unit determinant and, when the target is G_m, an
invertible matrix for the action of the target coordinate u.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from enum import Enum

from .exactalg.fields import BaseField, FieldError
from .exactalg.matrix import Matrix, mat_charpoly, mat_det, mat_inverse
from .exactalg.poly import LaurentPoly, LaurentRing
from .quadform import QuadSpace


class AffineModel(str, Enum):
    PT = "pt"
    GM = "gm"

    def ring(self, field: BaseField):
        return field if self is AffineModel.PT else LaurentRing(field)


PT, GM = AffineModel.PT, AffineModel.GM


class ModelMismatchError(ValueError):
    pass


class InvalidCorrespondenceError(ValueError):
    pass


class Correspondence:
    __slots__ = ("field", "source", "target", "gram", "action")

    def __init__(self, field: BaseField, source, target, gram: Matrix, action: Matrix | None = None):
        self.field = field
        self.source = AffineModel(source)
        self.target = AffineModel(target)
        ring = self.source.ring(field)
        self.gram = gram if gram.ring == ring else Matrix(ring, gram.rows, gram.ncols)
        if action is not None and action.ring != ring:
            action = Matrix(ring, action.rows, action.ncols)
        self.action = action

    @property
    def rank(self) -> int:
        return self.gram.nrows

    @property
    def ring(self):
        return self.source.ring(self.field)

    def __eq__(self, other):
        return (
            isinstance(other, Correspondence)
            and (self.field, self.source, self.target, self.gram, self.action)
            == (other.field, other.source, other.target, other.gram, other.action)
        )

    def __hash__(self):
        return hash((self.field, self.source, self.target, self.gram, self.action))

    def __repr__(self):
        return f"Correspondence({self.source.value}->{self.target.value}, rank={self.rank}, G={self.gram!r}, U={self.action!r})"


@dataclass
class ValidationReport:
    valid: bool
    violations: list = dc_field(default_factory=list)

    def __bool__(self):
        return self.valid


def _is_unit(ring, x) -> bool:
    if isinstance(ring, BaseField):
        return bool(x)
    return x.is_unit()


def validate(C: Correspondence) -> ValidationReport:
    bad = []
    ring = C.ring
    G, U = C.gram, C.action
    r = G.nrows
    if not G.is_square():
        bad.append("gram is not square")
    elif not G.is_symmetric():
        bad.append("gram is not symmetric")
    if G.is_square() and not _is_unit(ring, mat_det(G)):
        bad.append(f"det(gram) = {mat_det(G)} is not a unit of {ring}")
    if C.target is GM:
        if U is None:
            bad.append("target is gm but no action matrix is given")
        elif U.shape != (r, r):
            bad.append(f"action has shape {U.shape}, expected {(r, r)}")
        else:
            if not _is_unit(ring, mat_det(U)):
                bad.append(f"det(action) = {mat_det(U)} is not a unit of {ring}")
            if G.is_square() and U.T @ G != G @ U:
                bad.append("action is not self-adjoint: U^T G != G U")
    elif U is not None:
        bad.append("action matrix given although the target is pt")
    return ValidationReport(not bad, bad)


def require_valid(C: Correspondence) -> Correspondence:
    rep = validate(C)
    if not rep.valid:
        raise InvalidCorrespondenceError("; ".join(rep.violations))
    return C


# basic correspondences


def identity_gm(field: BaseField) -> Correspondence:
    L = LaurentRing(field)
    return Correspondence(field, GM, GM, Matrix(L, [[1]]), Matrix(L, [[L.gen()]]))


def unit_gm(field: BaseField) -> Correspondence:
    L = LaurentRing(field)
    return Correspondence(field, GM, GM, Matrix(L, [[1]]), Matrix(L, [[1]]))


def from_quadspace(Q: QuadSpace) -> Correspondence:
    return Correspondence(Q.field, PT, PT, Q.gram)


def to_quadspace(C: Correspondence) -> QuadSpace:
    if C.source is not PT or C.target is not PT:
        raise ModelMismatchError("only pt -> pt correspondences are quadratic spaces over k")
    return QuadSpace(C.field, C.gram)


def boxtimes_gm(phi) -> Correspondence:
    """phi (x) id of the multiplicative group: constant Gram, u acting as t."""
    if isinstance(phi, QuadSpace):
        phi = from_quadspace(phi)
    if phi.source is not PT or phi.target is not PT:
        raise ModelMismatchError("boxtimes_gm expects a pt -> pt correspondence")
    require_valid(phi)
    L = LaurentRing(phi.field)
    G = phi.gram.map(L, L)
    U = Matrix.identity(L, phi.rank).scale(L.gen())
    return Correspondence(phi.field, GM, GM, G, U)


def direct_sum(*cs: Correspondence) -> Correspondence:
    c0 = cs[0]
    for c in cs:
        if (c.field, c.source, c.target) != (c0.field, c0.source, c0.target):
            raise ModelMismatchError("direct sum of correspondences between different models")
    ring = c0.ring
    G = Matrix.block_diag(ring, [c.gram for c in cs])
    U = Matrix.block_diag(ring, [c.action for c in cs]) if c0.target is GM else None
    return Correspondence(c0.field, c0.source, c0.target, G, U)


def scale(lam, C: Correspondence) -> Correspondence:
    lam = C.field(lam)
    if not lam:
        raise ValueError("scaling by zero")
    return Correspondence(C.field, C.source, C.target, C.gram.scale(C.ring(lam)), C.action)


def zero_correspondence(field: BaseField, source, target) -> Correspondence:
    source, target = AffineModel(source), AffineModel(target)
    ring = source.ring(field)
    return Correspondence(field, source, target, Matrix.zeros(ring, 0, 0), Matrix.zeros(ring, 0, 0) if target is GM else None)


# evaluation of Laurent polynomials at matrices


class MatrixPowers:
    """Caches M**k for integer k, using a supplied or computed inverse."""

    def __init__(self, M: Matrix, inverse: Matrix | None = None):
        self.M = M
        self._pos = [Matrix.identity(M.ring, M.nrows), M]
        self._inv = inverse
        self._neg = [self._pos[0]]

    def power(self, k: int) -> Matrix:
        if k >= 0:
            while len(self._pos) <= k:
                self._pos.append(self._pos[-1] @ self.M)
            return self._pos[k]
        if self._inv is None:
            self._inv = mat_inverse(self.M)
        while len(self._neg) <= -k:
            self._neg.append(self._neg[-1] @ self._inv)
        return self._neg[-k]

    def evaluate(self, p) -> Matrix:
        """p(M) for a Laurent polynomial (or scalar) p with coefficients in k."""
        ring = self.M.ring
        n = self.M.nrows
        acc = Matrix.zeros(ring, n, n)
        if not isinstance(p, LaurentPoly):
            return Matrix.identity(ring, n).scale(ring(p)) if p else acc
        for k, c in p.terms().items():
            acc = acc + self.power(k).scale(ring(c))
        return acc


def compose(B: Correspondence, A: Correspondence) -> Correspondence:
    """B after A, the tensor product over the middle model.

    Basis f_j (x) e_i with the middle (B) index outer.  For a G_m middle,
    the Laurent entries of B are evaluated at A's action matrix.
    """
    if A.field != B.field:
        raise FieldError("composing correspondences over different fields")
    if A.target is not B.source:
        raise ModelMismatchError(f"cannot compose {B.source.value}->{B.target.value} after {A.source.value}->{A.target.value}")
    field = A.field
    ring = A.ring
    ra, rb = A.rank, B.rank
    if ra == 0 or rb == 0:
        return zero_correspondence(field, A.source, B.target)
    GA = A.gram
    if A.target is PT:
        blocks_g = [[GA.scale(ring(B.gram[j, l])) for l in range(rb)] for j in range(rb)]
        blocks_u = None
        if B.target is GM:
            I = Matrix.identity(ring, ra)
            blocks_u = [[I.scale(ring(B.action[j, l])) for l in range(rb)] for j in range(rb)]
    else:
        pw = MatrixPowers(A.action)
        evals = {}

        def ev(p):
            key = p
            if key not in evals:
                evals[key] = pw.evaluate(p)
            return evals[key]

        blocks_g = [[GA @ ev(B.gram[j, l]) for l in range(rb)] for j in range(rb)]
        blocks_u = None
        if B.target is GM:
            blocks_u = [[ev(B.action[j, l]) for l in range(rb)] for j in range(rb)]
    G = Matrix.from_blocks(ring, blocks_g)
    assert G.is_symmetric(), "composed Gram is not symmetric; is the middle action self-adjoint?"
    U = Matrix.from_blocks(ring, blocks_u) if blocks_u is not None else None
    return Correspondence(field, A.source, B.target, G, U)


def specialize(C: Correspondence, a) -> Correspondence:
    """Evaluate every entry at t = a (a unit of k)."""
    if C.source is not GM:
        raise ModelMismatchError("specialize needs a correspondence out of gm")
    a = C.field(a)
    if not a:
        raise ValueError("can only specialize at a unit of k")
    ev = lambda x: x(a)  # noqa: E731
    G = C.gram.map(ev, C.field)
    U = C.action.map(ev, C.field) if C.action is not None else None
    return Correspondence(C.field, PT, C.target, G, U)


# formal sums


@dataclass(frozen=True)
class FormalSum:
    terms: tuple = ()

    def __post_init__(self):
        for s, c in self.terms:
            if s not in (1, -1):
                raise ValueError(f"term sign must be +1 or -1, got {s}")
        models = {(c.field, c.source, c.target) for _, c in self.terms}
        if len(models) > 1:
            raise ModelMismatchError("formal sum mixes correspondences between different models")

    @classmethod
    def of(cls, C: Correspondence) -> FormalSum:
        return cls(((1, C),))

    def __add__(self, other: FormalSum) -> FormalSum:
        return FormalSum(self.terms + other.terms)

    def __neg__(self) -> FormalSum:
        return FormalSum(tuple((-s, c) for s, c in self.terms))

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)


def dot_expand(C: Correspondence) -> FormalSum:
    """(id - p1)(id - p2) applied to C, with p the unit-section idempotent on each side."""
    if C.source is not GM or C.target is not GM:
        raise ModelMismatchError("dot_expand expects a gm -> gm correspondence")
    one = unit_gm(C.field)
    left = compose(one, C)
    right = compose(C, one)
    both = compose(one, right)
    return FormalSum(((1, C), (-1, left), (-1, right), (1, both)))


# stability bound


def stability_bound(C: Correspondence) -> tuple[int, int]:
    """(N_P, M_P) for a gm -> gm correspondence.

    With b_i the coefficients of det(x - U) and d_i, e_i their top and bottom
    t-degrees, n > N_P guarantees that the terms b_i t^(n i) of det(t^n - U)
    occupy pairwise disjoint degree ranges, so its top term is t^(n r) and
    its bottom term comes from b_0.  M_P is minus the bottom degree of b_0.
    """
    if C.source is not GM or C.target is not GM:
        raise ModelMismatchError("stability_bound expects a gm -> gm correspondence")
    if C.rank == 0:
        return 0, 0
    b = mat_charpoly(C.action)
    nz = [i for i, c in enumerate(b) if c]
    N = None
    for j, i in zip(nz, nz[1:]):
        bound = (b[j].top_degree - b[i].bottom_degree) // (i - j)
        N = bound if N is None else max(N, bound)
    return (0 if N is None else N), -b[0].bottom_degree


# random valid correspondences


def _rand_laurent(field, rng: random.Random, lo: int, hi: int, height: int = 2) -> LaurentPoly:
    return LaurentPoly.from_terms(field, {k: field.random_element(rng, height) for k in range(lo, hi + 1)})


def _rand_unit(field, rng: random.Random, degrees=(-1, 0, 1)) -> LaurentPoly:
    return LaurentPoly.from_terms(field, {rng.choice(degrees): field.random_element(rng, 3, nonzero=True)})


def _rand_unimodular(field, r: int, rng: random.Random, steps: int) -> Matrix:
    L = LaurentRing(field)
    M = Matrix.identity(L, r)
    for _ in range(steps if r > 1 else 0):
        i, j = rng.sample(range(r), 2)
        rows = [list(row) for row in Matrix.identity(L, r).rows]
        rows[i][j] = _rand_laurent(field, rng, 0, 1)
        M = M @ Matrix(L, rows)
    return M


def random_correspondence(field: BaseField, rank: int, rng: random.Random, steps: int = 1) -> Correspondence:
    """A random valid gm -> gm correspondence with low-degree entries.

    G = S^T D S and U = S^-1 D^-1 W S with S unimodular, D diagonal units and
    W = M^T Lam M symmetric of unit determinant, so that G U = S^T W S is
    symmetric.  ``steps`` elementary matrices go into each of S and M.
    """
    L = LaurentRing(field)
    S = _rand_unimodular(field, rank, rng, steps)
    D = Matrix.diagonal(L, [_rand_unit(field, rng, (0, 1)) for _ in range(rank)])
    M = _rand_unimodular(field, rank, rng, steps)
    Lam = Matrix.diagonal(L, [_rand_unit(field, rng, (0, 1)) for _ in range(rank)])
    W = M.T @ Lam @ M
    G = S.T @ D @ S
    Dinv = Matrix.diagonal(L, [D[i, i].inverse() for i in range(rank)])
    U = mat_inverse(S) @ Dinv @ W @ S
    return require_valid(Correspondence(field, GM, GM, G, U))
