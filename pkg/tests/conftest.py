import random

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from quadcorr.exactalg import GF, QQ, LaurentPoly, LaurentRing, Matrix

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")

FIELDS = [QQ, GF(3), GF(5), GF(7)]


def fields():
    return st.sampled_from(FIELDS)


@st.composite
def scalars(draw, F, nonzero=False):
    if F.is_rational:
        num = draw(st.integers(-9, 9))
        den = draw(st.integers(1, 5))
        x = F(f"{num}/{den}")
    else:
        x = F(draw(st.integers(0, F.p - 1)))
    if nonzero and not x:
        x = F(1)
    return x


@st.composite
def laurents(draw, F, max_len=3, lo=-2, hi=2):
    coeffs = draw(st.lists(scalars(F), min_size=0, max_size=max_len))
    return LaurentPoly(F, coeffs, draw(st.integers(lo, hi)))


@st.composite
def square_matrices(draw, F, max_n=4, laurent=False, n=None):
    if n is None:
        n = draw(st.integers(1, max_n))
    if laurent:
        R = LaurentRing(F)
        rows = [[draw(laurents(F)) for _ in range(n)] for _ in range(n)]
        return Matrix(R, rows)
    rows = [[draw(scalars(F)) for _ in range(n)] for _ in range(n)]
    return Matrix(F, rows)


@st.composite
def nonzero_rationals(draw):
    num = draw(st.integers(-30, 30).filter(bool))
    den = draw(st.integers(1, 30))
    return QQ(f"{num}/{den}")


@pytest.fixture
def rng():
    return random.Random(12345)


@st.composite
def quad_spaces(draw, F, max_n=4, min_n=1):
    """Random nondegenerate symmetric Gram matrices of small height."""
    from quadcorr.exactalg import mat_det
    from quadcorr.quadform import QuadSpace

    n = draw(st.integers(min_n, max_n))
    while True:
        upper = {(i, j): draw(scalars(F)) for i in range(n) for j in range(i, n)}
        rows = [[upper[min(i, j), max(i, j)] for j in range(n)] for i in range(n)]
        M = Matrix(F, rows)
        if mat_det(M):
            return QuadSpace(F, M)
        # fall back to a diagonal form so the search always terminates
        diag = [draw(scalars(F, nonzero=True)) for _ in range(n)]
        return QuadSpace.diagonal(F, diag)


@st.composite
def invertible_matrices(draw, F, n):
    from quadcorr.exactalg import mat_det

    M = draw(square_matrices(F, n=n))
    if mat_det(M):
        return M
    # unipotent upper triangular matrices are always invertible
    rows = [[F(1) if i == j else (draw(scalars(F)) if j > i else F(0)) for j in range(n)] for i in range(n)]
    return Matrix(F, rows)
