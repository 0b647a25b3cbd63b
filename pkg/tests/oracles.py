"""Brute-force oracles kept independent of the library's decision procedures.

These use plain integers and numpy arrays only; nothing here calls
quadcorr's invariants, Hilbert symbols or orbit search.
"""

import itertools
from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def general_linear_group(p: int, n: int) -> np.ndarray:
    """All invertible n x n matrices mod p, shape (|GL_n(F_p)|, n, n)."""
    digits = np.indices((p,) * (n * n), dtype=np.int64).reshape(n * n, -1).T
    mats = digits.reshape(-1, n, n)
    return mats[_det_stack(mats, n) % p != 0]


def _det_stack(a: np.ndarray, n: int) -> np.ndarray:
    # integer determinants of a stack of n x n matrices, n <= 3
    if n == 1:
        return a[:, 0, 0]
    if n == 2:
        return a[:, 0, 0] * a[:, 1, 1] - a[:, 0, 1] * a[:, 1, 0]
    if n == 3:
        return (
            a[:, 0, 0] * (a[:, 1, 1] * a[:, 2, 2] - a[:, 1, 2] * a[:, 2, 1])
            - a[:, 0, 1] * (a[:, 1, 0] * a[:, 2, 2] - a[:, 1, 2] * a[:, 2, 0])
            + a[:, 0, 2] * (a[:, 1, 0] * a[:, 2, 1] - a[:, 1, 1] * a[:, 2, 0])
        )
    raise ValueError("only n <= 3")


def form_key(G, p: int) -> int:
    """Encode a symmetric matrix mod p (upper triangle) as one integer."""
    G = np.asarray(G, dtype=np.int64) % p
    n = G.shape[-1]
    key = 0
    for i in range(n):
        for j in range(i, n):
            key = key * p + int(G[i, j])
    return key


def _keys(stack: np.ndarray, p: int) -> np.ndarray:
    n = stack.shape[-1]
    key = np.zeros(stack.shape[0], dtype=np.int64)
    for i in range(n):
        for j in range(i, n):
            key = key * p + stack[:, i, j]
    return key


def congruence_orbit(G, p: int) -> set:
    """Keys of every M^T G M with M invertible mod p."""
    G = np.asarray(G, dtype=np.int64) % p
    n = G.shape[0]
    M = general_linear_group(p, n)
    out = set()
    for chunk in range(0, len(M), 200_000):
        Mc = M[chunk : chunk + 200_000]
        img = np.einsum("kji,jl,klm->kim", Mc, G, Mc) % p
        out.update(np.unique(_keys(img, p)).tolist())
    return out


def nondegenerate_symmetric(p: int, n: int):
    """All nondegenerate symmetric n x n matrices mod p, as integer arrays."""
    idx = [(i, j) for i in range(n) for j in range(i, n)]
    for vals in itertools.product(range(p), repeat=len(idx)):
        G = np.zeros((n, n), dtype=np.int64)
        for (i, j), v in zip(idx, vals):
            G[i, j] = G[j, i] = v
        if int(_det_stack(G[None], n)[0]) % p:
            yield G


def isotropic_mod_p(diag, p: int) -> bool:
    """Whether sum d_i x_i^2 = 0 has a nonzero solution mod p."""
    for xs in itertools.product(range(p), repeat=len(diag)):
        if any(xs) and sum(d * x * x for d, x in zip(diag, xs)) % p == 0:
            return True
    return False


def rational_isometry_search(A, B, values):
    """Some 2x2 X with entries in ``values`` and X^T A X = B, or None."""
    from fractions import Fraction

    A = [[Fraction(x) for x in r] for r in A]
    B = [[Fraction(x) for x in r] for r in B]
    for a, b, c, d in itertools.product(values, repeat=4):
        if a * d - b * c == 0:
            continue
        X = [[a, b], [c, d]]
        ok = True
        for i in range(2):
            for j in range(2):
                s = sum(X[k][i] * A[k][l] * X[l][j] for k in range(2) for l in range(2))
                if s != B[i][j]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return X
    return None


def fraction_poly_mod(a: list, N: list) -> list:
    """Remainder of a mod monic N; coefficient lists lowest first, Fractions."""
    from fractions import Fraction

    r = [Fraction(x) for x in a]
    m = len(N) - 1
    while len(r) > m:
        lead = r.pop()
        shift = len(r) - m
        for i in range(m):
            r[shift + i] -= lead * Fraction(N[i])
    return r + [Fraction(0)] * (m - len(r))


def coefficient_gram(N: list) -> list:
    """Gram (coef_{m-1}(t^(i+j) mod N)) for monic N, plain Fractions."""
    m = len(N) - 1
    vals = []
    for k in range(2 * m - 1):
        mono = [0] * k + [1]
        vals.append(fraction_poly_mod(mono, N)[m - 1])
    return [[vals[i + j] for j in range(m)] for i in range(m)]


def trace_gram(N: list) -> list:
    """Gram (trace of multiplication by t^(i+j) on Q[t]/(N)), plain Fractions."""
    m = len(N) - 1
    vals = []
    for k in range(2 * m - 1):
        tr = 0
        for i in range(m):
            tr += fraction_poly_mod([0] * (i + k) + [1], N)[i]
        vals.append(tr)
    return [[vals[i + j] for j in range(m)] for i in range(m)]
