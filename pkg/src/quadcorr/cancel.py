"""The cancellation map rho on gm -> gm correspondences.

For an applicable triple (f, N, g) with m_f g = N on P, rho composes P with
the residue space <N>, twists the form by g and divides out the radical,
which is f P / N P.  Applied to plus and minus triples (f = t^n - 1 and
f = t^n - u) and differenced, this gives a class in GW(k).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable

from .corr import (
    GM,
    PT,
    Correspondence,
    FormalSum,
    MatrixPowers,
    boxtimes_gm,
    compose,
    dot_expand,
    require_valid,
    specialize,
    stability_bound,
    unit_gm,
)
from .exactalg.fields import BaseField
from .exactalg.matrix import Matrix, kernel_basis, mat_adjugate, mat_det, rank
from .exactalg.poly import LaurentPoly, LaurentRing, laurent_normalize
from .quadform import (
    GWClass,
    PreQuadSpace,
    QuadSpace,
    direct_sum,
    gw_equal,
    gw_invariants,
    is_metabolic,
    reduce_with_basis,
)
from .residue import COEFFICIENT, NotApplicableError, residue_space

PLUS = "plus"
MINUS = "minus"


class StabilityError(ValueError):
    """n is not above the stability bound N_P."""


class PaddingError(ValueError):
    pass


class RadicalMismatchError(AssertionError):
    """The radical of the twisted form is not f P / N P."""


class CalibrationError(AssertionError):
    pass


@dataclass(frozen=True)
class FSpec:
    kind: str
    n: int

    def __post_init__(self):
        if self.kind not in (PLUS, MINUS):
            raise ValueError(f"unknown function kind {self.kind!r}")
        if self.n < 1:
            raise StabilityError(f"n must be positive, got {self.n}")

    def __str__(self):
        return f"t^{self.n} - 1" if self.kind == PLUS else f"t^{self.n} - u"


def Plus(n: int) -> FSpec:
    return FSpec(PLUS, n)


def Minus(n: int) -> FSpec:
    return FSpec(MINUS, n)


@dataclass(frozen=True)
class FTriple:
    fspec: FSpec
    norm: LaurentPoly
    g: Matrix


@dataclass(frozen=True)
class BiTriple:
    plus: FTriple
    minus: FTriple
    n: int
    m: int


def _require_gm(C: Correspondence):
    if C.source is not GM or C.target is not GM:
        raise ValueError("expected a gm -> gm correspondence")


def mf_matrix(C: Correspondence, f: FSpec) -> Matrix:
    """Matrix of multiplication by f on P: (t^n - 1) I or t^n I - U."""
    _require_gm(C)
    L = LaurentRing(C.field)
    I = Matrix.identity(L, C.rank)
    tn = LaurentPoly.t(C.field, f.n)
    if f.kind == PLUS:
        return I.scale(tn - 1)
    return I.scale(tn) - C.action


def det_norm(C: Correspondence, f: FSpec) -> LaurentPoly:
    N = mat_det(mf_matrix(C, f))
    if N.is_zero():
        raise NotApplicableError(f"{f} is a zero divisor on P (its determinant vanishes)")
    return N


def adjugate_g(C: Correspondence, f: FSpec) -> Matrix:
    M = mf_matrix(C, f)
    if mat_det(M).is_zero():
        raise NotApplicableError(f"{f} is a zero divisor on P (its determinant vanishes)")
    g = mat_adjugate(M)
    assert C.gram @ g == g.T @ C.gram, "cofactor is not self-adjoint for the Gram pairing"
    return g


def norm_degree(N: LaurentPoly) -> int:
    """Degree of the monic polynomial part of N, i.e. dim k[t, 1/t]/(N)."""
    return laurent_normalize(N)[2].degree


def binomial_padding(field: BaseField, delta: int, r: int) -> LaurentPoly:
    """t^delta + (-1)^(r-1), or 1 when delta is 0."""
    if delta == 0:
        return LaurentPoly.constant(field, 1)
    eps = 1 if r % 2 == 1 else -1
    return LaurentPoly.from_terms(field, {delta: 1, 0: eps})


def geometric_padding(field: BaseField, delta: int, r: int) -> LaurentPoly:
    """1 + t + ... + t^delta."""
    return LaurentPoly.from_terms(field, {k: 1 for k in range(delta + 1)})


Padding = Callable[[BaseField, int, int], LaurentPoly]


def _pad(T: FTriple, delta: int, r: int, padding: Padding) -> FTriple:
    if delta == 0:
        return T
    ad = padding(T.norm.field, delta, r)
    if norm_degree(ad) != delta or not ad.coeff(ad.bottom_degree):
        raise PaddingError(f"padding {ad} does not have degree {delta}")
    L = LaurentRing(T.norm.field)
    return FTriple(T.fspec, T.norm * ad, T.g.scale(L(ad)))


def canonical_triple(C: Correspondence, f: FSpec) -> FTriple:
    return FTriple(f, det_norm(C, f), adjugate_g(C, f))


def check_applicable(C: Correspondence, T: FTriple) -> bool:
    L = LaurentRing(C.field)
    return mf_matrix(C, T.fspec) @ T.g == Matrix.identity(L, C.rank).scale(T.norm)


def canonical_degrees(C: Correspondence, n: int) -> tuple[int, int]:
    return C.rank * n, norm_degree(det_norm(C, Minus(n)))


def make_bitriple(C: Correspondence, n: int, m_target: int | None = None, padding: Padding | None = None) -> BiTriple:
    """Plus and minus triples for C, padded to a common norm degree m."""
    _require_gm(C)
    N_P, _ = stability_bound(C)
    if n <= max(N_P, 0):
        raise StabilityError(f"n = {n} must exceed the stability bound N_P = {N_P}")
    plus = canonical_triple(C, Plus(n))
    minus = canonical_triple(C, Minus(n))
    dp, dm = norm_degree(plus.norm), norm_degree(minus.norm)
    m = max(dp, dm) if m_target is None else m_target
    if m < max(dp, dm):
        raise PaddingError(f"target degree {m} is below the canonical degrees {dp}, {dm}")
    padding = padding or binomial_padding
    return BiTriple(_pad(plus, m - dp, C.rank, padding), _pad(minus, m - dm, C.rank, padding), n, m)


# the rho pipeline


@dataclass
class RhoRun:
    """Bookkeeping for one rho_triple evaluation."""

    fspec: FSpec
    norm: LaurentPoly
    module_dim: int
    radical_dim: int
    image_rank: int
    quotient_dim: int
    expected_quotient_dim: int
    space: QuadSpace
    checks: dict = dc_field(default_factory=dict)


def _blocks_at(M: Matrix, pw: MatrixPowers, ring) -> Matrix:
    r = M.nrows
    cache = {}

    def ev(p):
        if p not in cache:
            cache[p] = pw.evaluate(p)
        return cache[p]

    return Matrix.from_blocks(ring, [[ev(M[j, l]) for l in range(r)] for j in range(r)])


def rho_triple_run(C: Correspondence, T: FTriple, mode: str = COEFFICIENT) -> RhoRun:
    _require_gm(C)
    require_valid(C)
    if not check_applicable(C, T):
        raise NotApplicableError("m_f g != N on P; the triple is not applicable")
    F = C.field
    R = residue_space(T.norm, mode)
    composed = compose(C, R)
    pw = MatrixPowers(R.action)
    gbig = _blocks_at(T.g, pw, F)
    fbig = _blocks_at(mf_matrix(C, T.fspec), pw, F)
    twisted = gbig.T @ composed.gram
    if not twisted.is_symmetric():
        raise AssertionError("g-twisted Gram is not symmetric")
    dim = composed.rank
    radical = kernel_basis(twisted)
    img = rank(fbig) if dim else 0
    contained = (twisted @ fbig).is_zero() if dim else True
    if not contained or img != len(radical):
        raise RadicalMismatchError(
            f"radical has dimension {len(radical)}, image of f has rank {img}, image inside radical: {contained}"
        )
    expected = C.rank * T.fspec.n if T.fspec.kind == PLUS else norm_degree(det_norm(C, T.fspec))
    Q, _, _ = reduce_with_basis(PreQuadSpace(F, twisted), radical)
    if Q.rank != expected or dim - len(radical) != expected:
        raise RadicalMismatchError(f"quotient has dimension {Q.rank}, expected dim P/fP = {expected}")
    return RhoRun(
        T.fspec, T.norm, dim, len(radical), img, Q.rank, expected, Q,
        {"applicable": True, "image_in_radical": contained, "radical_is_image": img == len(radical)},
    )


def rho_triple(C: Correspondence, T: FTriple, mode: str = COEFFICIENT) -> QuadSpace:
    return rho_triple_run(C, T, mode).space


@dataclass
class RhoResult:
    cls: GWClass
    n: int
    m: int
    runs: list

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "virtual_rank": self.cls.rank,
            "runs": [
                {
                    "sign": s,
                    "f": str(r.fspec),
                    "norm": str(r.norm),
                    "module_dim": r.module_dim,
                    "radical_dim": r.radical_dim,
                    "quotient_dim": r.quotient_dim,
                }
                for s, r in self.runs
            ],
        }


def rho_n_run(
    S: FormalSum,
    n: int,
    mode: str = COEFFICIENT,
    m_target: int | None = None,
    padding: Padding | None = None,
) -> RhoResult:
    """rho applied termwise to a formal sum, all bi-triples padded to one degree m."""
    terms = list(S)
    if not terms:
        raise ValueError("empty formal sum; its field is unknown")
    F = terms[0][1].field
    for _, C in terms:
        _require_gm(C)
        N_P, _ = stability_bound(C)
        if n <= max(N_P, 0):
            raise StabilityError(f"n = {n} must exceed the stability bound N_P = {N_P} of every term")
    nonzero = [(s, C) for s, C in terms if C.rank]
    m = m_target
    if m is None:
        m = max((max(canonical_degrees(C, n)) for _, C in nonzero), default=0)
    pos, neg, runs = [], [], []
    for s, C in nonzero:
        bt = make_bitriple(C, n, m, padding)
        rp = rho_triple_run(C, bt.plus, mode)
        rm = rho_triple_run(C, bt.minus, mode)
        runs += [(s, rp), (-s, rm)]
        (pos if s == 1 else neg).append(rp.space)
        (neg if s == 1 else pos).append(rm.space)
    zero = QuadSpace.zero(F)
    cls = GWClass(direct_sum(zero, *pos), direct_sum(zero, *neg))
    return RhoResult(cls, n, m, runs)


def rho_n(S: FormalSum, n: int, mode: str = COEFFICIENT, m_target: int | None = None, padding: Padding | None = None) -> GWClass:
    return rho_n_run(S, n, mode, m_target, padding).cls


def rho(C: Correspondence, n: int, mode: str = COEFFICIENT) -> GWClass:
    """rho of the dot-projected correspondence."""
    return rho_n(dot_expand(C), n, mode)


# calibration and checks


def rank_one_class(cls: GWClass):
    """The scalar c, as a square class, with cls = <c>; fails unless such c exists."""
    F = cls.field
    if cls.rank != 1:
        raise CalibrationError(f"expected a virtual rank-1 class, got rank {cls.rank}")
    c = mat_det(cls.pos.gram) * mat_det(cls.neg.gram)
    c = F.square_class(c)
    if not gw_equal(cls, QuadSpace.diagonal(F, [c])):
        raise CalibrationError("class is not of the form <c>")
    return c


def beta_calibrate(field: BaseField, n: int, mode: str = COEFFICIENT):
    """Square class beta with rho(<1> x id) = <beta>."""
    one = QuadSpace.diagonal(field, [1])
    return rank_one_class(rho(boxtimes_gm(one), n, mode))


@dataclass
class CheckReport:
    name: str
    passed: bool
    details: dict = dc_field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"check": self.name, "passed": self.passed, **self.details}


def _inv_dict(Q) -> dict:
    if isinstance(Q, GWClass):
        return {"pos": gw_invariants(Q.pos).as_dict(), "neg": gw_invariants(Q.neg).as_dict()}
    return gw_invariants(Q).as_dict()


def left_inverse_check(phi: QuadSpace, n: int, beta=None, mode: str = COEFFICIENT) -> CheckReport:
    """rho(phi x id) against <beta> phi in GW(k)."""
    F = phi.field
    if beta is None:
        beta = beta_calibrate(F, n, mode)
    lhs = rho(boxtimes_gm(phi), n, mode) if phi.rank else GWClass.zero(F)
    rhs = GWClass(phi).scale(beta)
    ok = gw_equal(lhs, rhs)
    return CheckReport(
        "left_inverse",
        ok,
        {"n": n, "beta": str(beta), "rho": _inv_dict(lhs), "expected": _inv_dict(rhs.pos)},
    )


def permutation_fiber_check(field: BaseField, x, y, mode: str = COEFFICIENT) -> CheckReport:
    """<(t - x)(t - y)> against <x - y> + <y - x>, and metabolicity."""
    x, y = field(x), field(y)
    if x == y:
        raise ValueError("x and y must be distinct (the diagonal is removed)")
    if not x or not y:
        raise ValueError("x and y must be units")
    N = LaurentPoly(field, [x * y, -(x + y), 1])
    try:
        Q = QuadSpace(field, residue_space(N, mode).gram)
    except ValueError as e:
        return CheckReport("permutation_fiber", False, {"x": str(x), "y": str(y), "error": str(e)})
    expected = QuadSpace.diagonal(field, [x - y, y - x])
    eq = gw_equal(Q, expected)
    met = is_metabolic(Q)
    return CheckReport(
        "permutation_fiber",
        eq and met,
        {"x": str(x), "y": str(y), "gw_equal": eq, "metabolic": met, "invariants": _inv_dict(Q)},
    )


def naturality_boxtimes_check(phi: QuadSpace, n: int, samples=(1, 2, 3), mode: str = COEFFICIENT) -> CheckReport:
    """id (x) rho(P) against rho(id (x) P), compared after specializing the spectator coordinate.

    Left side: the rho output is boxed with id of G_m, then specialized at s.
    Right side: the spectator acts on P by the scalar s, which commutes with
    every map in the pipeline; rho is run on P and the resulting space carries
    the action s I.
    """
    F = phi.field
    P = boxtimes_gm(phi)
    out = rho(P, n, mode) if phi.rank else GWClass.zero(F)
    rows = []
    ok = True
    for s in samples:
        s = F(s)
        if not s:
            raise ValueError("sample points must be units")
        left = [specialize(boxtimes_gm(part), s) if part.rank else None for part in (out.pos, out.neg)]
        right_cls = rho(P, n, mode) if phi.rank else GWClass.zero(F)
        right = [_with_action(part, s) if part.rank else None for part in (right_cls.pos, right_cls.neg)]
        same = all(_same_specialization(a, b) for a, b in zip(left, right))
        rows.append({"s": str(s), "equal": same})
        ok = ok and same
    return CheckReport("naturality_boxtimes", ok, {"n": n, "samples": rows, "virtual_rank": out.rank})


def _same_specialization(a: Correspondence | None, b: Correspondence | None) -> bool:
    if a is None or b is None:
        return a is None and b is None
    if a.action != b.action:
        return False
    return gw_invariants(QuadSpace(a.field, a.gram)) == gw_invariants(QuadSpace(b.field, b.gram))


def _with_action(Q: QuadSpace, s) -> Correspondence:
    F = Q.field
    return Correspondence(F, PT, GM, Q.gram, Matrix.identity(F, Q.rank).scale(s))


def unit_section_term(phi: QuadSpace) -> FormalSum:
    """The unit(x)id composite: pr to the point, phi, then the unit section."""
    C = boxtimes_gm(phi)
    one = unit_gm(phi.field)
    return FormalSum.of(compose(one, compose(C, one)))


def unit_section_check(phi: QuadSpace, n: int, mode: str = COEFFICIENT) -> CheckReport:
    cls = rho_n(unit_section_term(phi), n, mode)
    ok = gw_equal(cls, GWClass.zero(phi.field))
    return CheckReport("unit_section", ok, {"n": n, "virtual_rank": cls.rank, "class": _inv_dict(cls)})
