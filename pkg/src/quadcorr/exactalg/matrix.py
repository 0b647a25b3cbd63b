"""Immutable matrices over a field, k[t] or k[t, 1/t], with exact algorithms."""

from __future__ import annotations

from .fields import BaseField


class DimensionError(ValueError):
    pass


class Matrix:
    """A rectangular matrix whose entries all live in ``ring``."""

    __slots__ = ("ring", "rows", "nrows", "ncols")

    def __init__(self, ring, rows, ncols: int | None = None):
        rows = tuple(tuple(ring(x) for x in r) for r in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise DimensionError("ragged matrix rows")
        self.ring = ring
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols

    @classmethod
    def _raw(cls, ring, rows, ncols):
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.rows = tuple(tuple(r) for r in rows)
        obj.nrows = len(obj.rows)
        obj.ncols = ncols
        return obj

    @classmethod
    def identity(cls, ring, n: int) -> Matrix:
        z, o = ring.zero(), ring.one()
        return cls._raw(ring, [[o if i == j else z for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, ring, nrows: int, ncols: int) -> Matrix:
        z = ring.zero()
        return cls._raw(ring, [[z] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def diagonal(cls, ring, entries) -> Matrix:
        entries = [ring(e) for e in entries]
        n = len(entries)
        z = ring.zero()
        return cls._raw(ring, [[entries[i] if i == j else z for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_columns(cls, ring, cols, nrows: int) -> Matrix:
        return cls._raw(ring, [[c[i] for c in cols] for i in range(nrows)], len(cols))

    @classmethod
    def block_diag(cls, ring, blocks) -> Matrix:
        n = sum(b.nrows for b in blocks)
        m = sum(b.ncols for b in blocks)
        z = ring.zero()
        rows = [[z] * m for _ in range(n)]
        i0 = j0 = 0
        for b in blocks:
            for i in range(b.nrows):
                for j in range(b.ncols):
                    rows[i0 + i][j0 + j] = b.rows[i][j]
            i0 += b.nrows
            j0 += b.ncols
        return cls._raw(ring, rows, m)

    @classmethod
    def from_blocks(cls, ring, grid) -> Matrix:
        """Assemble from a 2D list of equally sized square blocks."""
        rows = []
        for brow in grid:
            for i in range(brow[0].nrows):
                rows.append([x for b in brow for x in b.rows[i]])
        ncols = sum(b.ncols for b in grid[0]) if grid else 0
        return cls._raw(ring, rows, ncols)

    # access

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def entries(self):
        for r in self.rows:
            yield from r

    @property
    def T(self) -> Matrix:
        return self.transpose()

    def transpose(self) -> Matrix:
        return Matrix._raw(self.ring, [[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)], self.nrows)

    def map(self, fn, ring=None) -> Matrix:
        ring = self.ring if ring is None else ring
        return Matrix._raw(ring, [[fn(x) for x in r] for r in self.rows], self.ncols)

    def submatrix(self, rows, cols) -> Matrix:
        return Matrix._raw(self.ring, [[self.rows[i][j] for j in cols] for i in rows], len(cols))

    def minor(self, i: int, j: int) -> Matrix:
        return self.submatrix([a for a in range(self.nrows) if a != i], [b for b in range(self.ncols) if b != j])

    def is_symmetric(self) -> bool:
        return self.is_square() and all(
            self.rows[i][j] == self.rows[j][i] for i in range(self.nrows) for j in range(i + 1, self.ncols)
        )

    def is_zero(self) -> bool:
        return all(not x for x in self.entries())

    # arithmetic

    def _check_same(self, other: Matrix):
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: Matrix) -> Matrix:
        self._check_same(other)
        return Matrix._raw(self.ring, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __sub__(self, other: Matrix) -> Matrix:
        self._check_same(other)
        return Matrix._raw(self.ring, [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __neg__(self) -> Matrix:
        return Matrix._raw(self.ring, [[-a for a in r] for r in self.rows], self.ncols)

    def scale(self, c) -> Matrix:
        c = self.ring(c)
        return Matrix._raw(self.ring, [[c * a for a in r] for r in self.rows], self.ncols)

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.ncols != other.nrows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        z = self.ring.zero()
        # accumulate rows of `other`, skipping zero entries on both sides
        sparse = [[(j, b) for j, b in enumerate(r) if b] for r in other.rows]
        m = other.ncols
        out = []
        for r in self.rows:
            row = [z] * m
            for k, a in enumerate(r):
                if a:
                    for j, b in sparse[k]:
                        row[j] = row[j] + a * b
            out.append(row)
        return Matrix._raw(self.ring, out, m)

    def apply(self, vec) -> tuple:
        z = self.ring.zero()
        out = []
        for r in self.rows:
            acc = z
            for a, b in zip(r, vec):
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return tuple(out)

    def __pow__(self, e: int) -> Matrix:
        if not self.is_square():
            raise DimensionError("power of a non-square matrix")
        if e < 0:
            return mat_inverse(self) ** (-e)
        out = Matrix.identity(self.ring, self.nrows)
        base = self
        while e:
            if e & 1:
                out = out @ base
            base = base @ base
            e >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, self.rows))

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in r) for r in self.rows)
        return f"Matrix[{self.nrows}x{self.ncols}]({body})"


def _is_field(ring) -> bool:
    return isinstance(ring, BaseField)


def _require_square(M: Matrix):
    if not M.is_square():
        raise DimensionError(f"expected a square matrix, got {M.shape}")


def _det_gauss(M: Matrix):
    n = M.nrows
    a = [list(r) for r in M.rows]
    det = M.ring.one()
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            return M.ring.zero()
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        p = a[k][k]
        det = det * p
        inv = 1 / p
        for i in range(k + 1, n):
            if a[i][k]:
                f = a[i][k] * inv
                row_k = a[k]
                a[i] = [x - f * y for x, y in zip(a[i], row_k)]
    return det


def _det_cofactor(rows, ring):
    n = len(rows)
    if n == 0:
        return ring.one()
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    acc = ring.zero()
    for j in range(n):
        a = rows[0][j]
        if not a:
            continue
        sub = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = a * _det_cofactor(sub, ring)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


def _det_bareiss(M: Matrix):
    ring = M.ring
    n = M.nrows
    a = [list(r) for r in M.rows]
    sign = 1
    prev = ring.one()
    for k in range(n - 1):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            return ring.zero()
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = ring.exact_div(a[i][j] * a[k][k] - a[i][k] * a[k][j], prev)
        prev = a[k][k]
    d = a[n - 1][n - 1] if n else ring.one()
    return d if sign == 1 else -d


def mat_det(M: Matrix):
    """Exact determinant.

    Fields use Gaussian elimination; polynomial and Laurent rings use cofactor
    expansion up to size 4 and fraction-free Bareiss elimination above.
    """
    _require_square(M)
    if _is_field(M.ring):
        return _det_gauss(M)
    if M.nrows <= 4:
        return _det_cofactor([list(r) for r in M.rows], M.ring)
    return _det_bareiss(M)


def mat_adjugate(M: Matrix) -> Matrix:
    """Classical adjoint: M @ adj(M) == adj(M) @ M == det(M) * I."""
    _require_square(M)
    n = M.nrows
    ring = M.ring
    if n == 0:
        return Matrix.zeros(ring, 0, 0)
    if n == 1:
        return Matrix.identity(ring, 1)
    cof = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            d = mat_det(M.minor(i, j))
            cof[j][i] = d if (i + j) % 2 == 0 else -d
    A = Matrix._raw(ring, cof, n)
    if __debug__:
        D = Matrix.identity(ring, n).scale(mat_det(M))
        assert M @ A == D and A @ M == D, "adjugate identity failed"
    return A


def mat_charpoly(M: Matrix) -> tuple:
    """Coefficients of det(x*I - M), lowest degree first, entries in M's ring.

    Uses Berkowitz's division-free recursion, so it is valid over any
    commutative ring (in particular k[t, 1/t]).
    """
    _require_square(M)
    ring = M.ring
    rows = [list(r) for r in M.rows]
    return tuple(reversed(_berkowitz(rows, ring)))


def _berkowitz(a, ring):
    # returns coefficients highest degree first
    n = len(a)
    if n == 0:
        return [ring.one()]
    a11 = a[0][0]
    R = a[0][1:]
    C = [a[i][0] for i in range(1, n)]
    A1 = [r[1:] for r in a[1:]]
    q = _berkowitz(A1, ring)
    col = [ring.one(), -a11]
    v = C
    z = ring.zero()
    for _ in range(2, n + 1):
        acc = z
        for x, y in zip(R, v):
            acc = acc + x * y
        col.append(-acc)
        v = [sum((A1[i][j] * v[j] for j in range(n - 1)), z) for i in range(n - 1)]
    out = []
    for i in range(n + 1):
        acc = z
        for j in range(min(i, n - 1) + 1):
            acc = acc + col[i - j] * q[j]
        out.append(acc)
    return out


def eval_poly_at_matrix(coeffs, M: Matrix) -> Matrix:
    """Sum of coeffs[i] * M**i (coefficients lowest first, in M's ring)."""
    _require_square(M)
    n = M.nrows
    acc = Matrix.zeros(M.ring, n, n)
    for c in reversed(coeffs):
        acc = acc @ M + Matrix.identity(M.ring, n).scale(c)
    return acc


# linear algebra over a field


def rref(M: Matrix) -> tuple[list[list], list[int]]:
    """Reduced row echelon form (rows) and pivot columns; field entries only."""
    if not _is_field(M.ring):
        raise TypeError("row reduction needs field entries")
    a = [list(r) for r in M.rows]
    pivots = []
    r = 0
    for c in range(M.ncols):
        piv = next((i for i in range(r, M.nrows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(M.nrows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == M.nrows:
            break
    return a, pivots


def kernel_basis(M: Matrix) -> list[tuple]:
    """Basis of the right null space {x : M x = 0}; empty iff M is injective."""
    a, pivots = rref(M)
    free = [c for c in range(M.ncols) if c not in pivots]
    ring = M.ring
    basis = []
    for f in free:
        v = [ring.zero()] * M.ncols
        v[f] = ring.one()
        for r, p in enumerate(pivots):
            v[p] = -a[r][f]
        basis.append(tuple(v))
    return basis


def rank(M: Matrix) -> int:
    return len(rref(M)[1])


def column_space_basis(M: Matrix) -> list[tuple]:
    _, pivots = rref(M)
    return [M.col(j) for j in pivots]


def mat_inverse(M: Matrix) -> Matrix:
    """Inverse over a field, or over a ring when det(M) is a unit."""
    _require_square(M)
    if _is_field(M.ring):
        n = M.nrows
        aug = Matrix._raw(M.ring, [list(r) + [M.ring.one() if i == j else M.ring.zero() for j in range(n)] for i, r in enumerate(M.rows)], 2 * n)
        a, pivots = rref(aug)
        if pivots[:n] != list(range(n)):
            raise ZeroDivisionError("singular matrix")
        return Matrix._raw(M.ring, [r[n:] for r in a], n)
    d = mat_det(M)
    dinv = d.inverse()
    return mat_adjugate(M).scale(dinv)
