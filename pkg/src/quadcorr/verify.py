"""The verification suite: ten exact checks of the cancellation calculus.

Each check returns a :class:`CheckResult`; :func:`run_all` runs them in a
fixed order.  Randomized checks draw from ``random.Random(seed)``.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field as dc_field

from sympy import primitive_root

from . import quadform as qf
from .cancel import (
    Minus,
    Plus,
    beta_calibrate,
    check_applicable,
    det_norm,
    geometric_padding,
    left_inverse_check,
    make_bitriple,
    mf_matrix,
    permutation_fiber_check,
    rho,
    rho_triple,
    rho_triple_run,
    unit_section_check,
)
from .corr import boxtimes_gm, random_correspondence, stability_bound
from .exactalg.fields import GF, QQ, BaseField
from .exactalg.matrix import Matrix, mat_adjugate, mat_det
from .exactalg.poly import LaurentPoly, LaurentRing, laurent_normalize
from .residue import COEFFICIENT, JUNIOR_TRACE

FIELDS = (QQ, GF(5), GF(7))


@dataclass
class CheckResult:
    key: str
    title: str
    passed: bool
    seconds: float
    budget: float
    cases: int = 0
    failures: list = dc_field(default_factory=list)
    details: dict = dc_field(default_factory=dict)

    @property
    def within_budget(self) -> bool:
        return self.seconds <= self.budget

    def as_dict(self) -> dict:
        return {
            "check": self.key,
            "title": self.title,
            "passed": self.passed,
            "cases": self.cases,
            "seconds": round(self.seconds, 3),
            "budget_seconds": self.budget,
            "failures": self.failures[:10],
            **self.details,
        }


def _timed(key: str, title: str, budget: float):
    def wrap(fn):
        def run(*args, **kwargs) -> CheckResult:
            t0 = time.perf_counter()
            cases, failures, details = fn(*args, **kwargs)
            dt = time.perf_counter() - t0
            return CheckResult(key, title, not failures, dt, budget, cases, failures, details)

        run.key = key
        run.title = title
        run.budget = budget
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run

    return wrap


def _forms(F: BaseField) -> dict:
    return {
        "<1>": qf.QuadSpace.diagonal(F, [1]),
        "<-1>": qf.QuadSpace.diagonal(F, [-1]),
        "<2>": qf.QuadSpace.diagonal(F, [2]),
        "<1,3>": qf.QuadSpace.diagonal(F, [1, 3]),
        "H": qf.hyperbolic(F),
    }


def random_form(F: BaseField, rng: random.Random, rank: int) -> qf.QuadSpace:
    """A random nondegenerate form of the given rank with small entries."""
    while True:
        rows = [[None] * rank for _ in range(rank)]
        for i in range(rank):
            for j in range(i, rank):
                rows[i][j] = rows[j][i] = F.random_element(rng, 4)
        try:
            return qf.QuadSpace(F, rows)
        except qf.DegenerateFormError:
            continue


def random_unit_pair(F: BaseField, rng: random.Random) -> tuple:
    while True:
        x = F.random_element(rng, 6, nonzero=True)
        y = F.random_element(rng, 6, nonzero=True)
        if x != y:
            return x, y


@_timed("left_inverse", "rho(phi x id) = <beta_n> phi in GW(k)", 30.0)
def check_left_inverse(seed: int = 0, fields=FIELDS, ns=(2, 3, 4)):
    failures, betas, cases = [], {}, 0
    for F in fields:
        for n in ns:
            beta = beta_calibrate(F, n)
            betas[f"{F} n={n}"] = str(beta)
            for name, phi in _forms(F).items():
                cases += 1
                rep = left_inverse_check(phi, n, beta)
                if not rep.passed:
                    failures.append(f"{F} n={n} phi={name}")
    return cases, failures, {"beta": betas}


@_timed("metabolic_preservation", "rho of a metabolic input has Witt class zero", 30.0)
def check_metabolic_preservation(seed: int = 0, fields=FIELDS, count: int = 20, ns=(2, 3), mode: str = COEFFICIENT):
    rng = random.Random(seed)
    failures, cases = [], 0
    for F in fields:
        for k in range(count):
            Q = random_form(F, rng, rng.randint(1, 2))
            M = qf.direct_sum(Q, qf.scale(-1, Q))
            for n in ns:
                cases += 1
                if not qf.is_metabolic(rho(boxtimes_gm(M), n, mode)):
                    failures.append(f"{F} case={k} n={n} gram={Q.gram}")
    return cases, failures, {}


@_timed("permutation_fiber", "<(t-x)(t-y)> = <x-y> + <y-x>, metabolic", 5.0)
def check_permutation_fibers(seed: int = 0, fields=FIELDS, count: int = 20, mode: str = COEFFICIENT):
    rng = random.Random(seed)
    failures, cases = [], 0
    for F in fields:
        for _ in range(count):
            x, y = random_unit_pair(F, rng)
            cases += 1
            if not permutation_fiber_check(F, x, y, mode).passed:
                failures.append(f"{F} x={x} y={y}")
    return cases, failures, {}


@_timed("norm_identities", "N(t^n-1) = (t^n-1)^r; minus norm normal above N_P", 5.0)
def check_norm_identities(seed: int = 0, fields=FIELDS, count: int = 10):
    rng = random.Random(seed)
    failures, cases = [], 0
    for F in fields:
        for k in range(count):
            r = rng.randint(1, 3)
            C = random_correspondence(F, r, rng)
            N_P, M_P = stability_bound(C)
            for n in range(1, 5):
                cases += 1
                expected = (LaurentPoly.t(F, n) - 1) ** r
                if det_norm(C, Plus(n)) != expected:
                    failures.append(f"{F} case={k} plus n={n}")
            for n in (max(N_P, 0) + 1, max(N_P, 0) + 2):
                cases += 1
                v, c, Nt = laurent_normalize(det_norm(C, Minus(n)))
                shape_ok = Nt.is_monic() and bool(Nt.coeff(0)) and v == -M_P and Nt.degree == r * n + M_P
                if not shape_ok:
                    failures.append(f"{F} case={k} minus n={n} normalized to v={v} N={Nt}")
    return cases, failures, {}


def _pipeline_inputs(F: BaseField, rng: random.Random, count: int):
    yield boxtimes_gm(qf.QuadSpace.diagonal(F, [1])), 2
    yield boxtimes_gm(qf.hyperbolic(F)), 3
    for _ in range(count):
        C = random_correspondence(F, rng.randint(1, 2), rng)
        yield C, max(stability_bound(C)[0], 0) + 1


@_timed("cofactor_radical", "m_f adj(m_f) = N I; radical of the g-twist is f P/N P", 30.0)
def check_cofactor_radical(seed: int = 0, fields=FIELDS, count: int = 5):
    rng = random.Random(seed)
    failures, cases = [], 0
    adjugate_checks = 0
    for F in fields:
        L = LaurentRing(F)
        for C, n in _pipeline_inputs(F, rng, count):
            for f in (Plus(n), Minus(n)):
                M = mf_matrix(C, f)
                adjugate_checks += 1
                if M @ mat_adjugate(M) != Matrix.identity(L, C.rank).scale(det_norm(C, f)):
                    failures.append(f"{F} adjugate identity for {f}")
            bt = make_bitriple(C, n)
            for T in (bt.plus, bt.minus):
                cases += 1
                try:
                    run = rho_triple_run(C, T)
                except AssertionError as e:
                    failures.append(f"{F} {T.fspec}: {e}")
                    continue
                book = run.module_dim == C.rank * bt.m and run.radical_dim == run.module_dim - run.quotient_dim
                if not (check_applicable(C, T) and book):
                    failures.append(f"{F} {T.fspec}: dimension bookkeeping")
    return cases, failures, {"adjugate_checks": adjugate_checks}


@_timed("unit_section", "the unit-section term contributes zero", 5.0)
def check_unit_section(seed: int = 0, fields=FIELDS, ns=(2, 3)):
    failures, cases = [], 0
    for F in fields:
        for d in (1, 2):
            for n in ns:
                cases += 1
                if not unit_section_check(qf.QuadSpace.diagonal(F, [d]), n).passed:
                    failures.append(f"{F} phi=<{d}> n={n}")
    return cases, failures, {}


WITT_EXPECTED = {3: "Z/4", 5: "Z/2 x Z/2", 7: "Z/4"}


@_timed("witt_tables", "W(F_3) = Z/4, W(F_5) = Z/2 x Z/2, W(F_7) = Z/4", 1.0)
def check_witt_tables(seed: int = 0):
    failures, groups = [], {}
    for p, expected in WITT_EXPECTED.items():
        g = qf.witt_table(p).group
        groups[str(p)] = g
        if g != expected:
            failures.append(f"p={p}: got {g}, expected {expected}")
    return len(WITT_EXPECTED), failures, {"groups": groups}


def congruence_orbits(p: int, n: int) -> list[list[tuple]]:
    """Orbits of GL_n(F_p) acting on invertible symmetric n x n matrices by A -> g^T A g.

    Found by closing each matrix under transvections and one primitive-root
    scaling, which generate GL_n(F_p).  Matrices are flat tuples of ints.
    """
    gens = []
    for i in range(n):
        for j in range(n):
            if i != j:
                g = [[int(a == b) for b in range(n)] for a in range(n)]
                g[i][j] = 1
                gens.append(g)
    g = [[int(a == b) for b in range(n)] for a in range(n)]
    g[0][0] = primitive_root(p)
    gens.append(g)

    def act(A, g):
        M = [A[i * n:(i + 1) * n] for i in range(n)]
        gA = [[sum(g[k][i] * M[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        return tuple(sum(gA[i][k] * g[k][j] for k in range(n)) % p for i in range(n) for j in range(n))

    def invertible(A):
        return mat_det(Matrix(GF(p), [A[i * n:(i + 1) * n] for i in range(n)])) != 0

    upper = [(i, j) for i in range(n) for j in range(i, n)]
    todo = set()
    for vals in itertools.product(range(p), repeat=len(upper)):
        A = [0] * (n * n)
        for (i, j), v in zip(upper, vals):
            A[i * n + j] = A[j * n + i] = v
        A = tuple(A)
        if invertible(A):
            todo.add(A)
    orbits = []
    while todo:
        start = min(todo)
        orbit, frontier = {start}, [start]
        while frontier:
            A = frontier.pop()
            for g in gens:
                B = act(A, g)
                if B not in orbit:
                    orbit.add(B)
                    frontier.append(B)
        todo -= orbit
        orbits.append(sorted(orbit))
    return orbits


@_timed("gw_oracle", "gw_equal agrees with exhaustive congruence orbits", 60.0)
def check_gw_oracle(seed: int = 0, primes=(3, 5), max_rank: int = 3):
    failures, cases, counts = [], 0, {}
    for p in primes:
        F = GF(p)
        reps = []
        for n in range(1, max_rank + 1):
            orbits = congruence_orbits(p, n)
            counts[f"p={p} n={n}"] = len(orbits)
            for orbit in orbits:
                spaces = [qf.QuadSpace(F, [A[i * n:(i + 1) * n] for i in range(n)]) for A in orbit]
                rep = spaces[0]
                inv = qf.gw_invariants(rep)
                for Q in spaces:
                    cases += 1
                    if qf.gw_invariants(Q) != inv:
                        failures.append(f"p={p}: invariants vary on an orbit")
                        break
                reps.append(rep)
        for A, B in itertools.combinations(reps, 2):
            cases += 1
            if qf.gw_equal(A, B):
                failures.append(f"p={p}: distinct orbits {A.gram} and {B.gram} judged equal")
        for A in reps:
            cases += 1
            if not qf.gw_equal(A, A):
                failures.append(f"p={p}: {A.gram} not equal to itself")
    return cases, failures, {"orbits": counts}


@_timed("functional_discrimination", "coefficient mode passes, junior-trace fails at (1,-1) over Q", 1.0)
def check_functional_discrimination(seed: int = 0):
    failures = []
    coeff_fibers = [permutation_fiber_check(F, x, y, COEFFICIENT).passed for F, x, y in ((QQ, 1, -1), (QQ, 1, 4), (GF(5), 2, 3))]
    if not all(coeff_fibers):
        failures.append("coefficient mode fails a permutation fiber")
    H = qf.hyperbolic(QQ)
    if not qf.is_metabolic(rho(boxtimes_gm(H), 2, COEFFICIENT)):
        failures.append("coefficient mode fails metabolic preservation")
    junior = permutation_fiber_check(QQ, 1, -1, JUNIOR_TRACE)
    if junior.passed:
        failures.append("junior-trace mode unexpectedly passes the fiber identity at (1,-1)")
    return 5, failures, {"junior_trace_at_(1,-1)": junior.details}


@_timed("triple_independence", "different paddings to the same (n, m) give equal classes", 30.0)
def check_triple_independence(seed: int = 0, fields=FIELDS, count: int = 10, extra: int = 2):
    rng = random.Random(seed)
    failures, cases = [], 0
    for F in fields:
        for k in range(count):
            C = random_correspondence(F, rng.randint(1, 2), rng)
            n = max(stability_bound(C)[0], 0) + 1
            m = make_bitriple(C, n).m + extra
            a = make_bitriple(C, n, m)
            b = make_bitriple(C, n, m, geometric_padding)
            for Ta, Tb in ((a.plus, b.plus), (a.minus, b.minus)):
                cases += 1
                if Ta.norm == Tb.norm:
                    failures.append(f"{F} case={k}: paddings coincide")
                elif not qf.gw_equal(rho_triple(C, Ta), rho_triple(C, Tb)):
                    failures.append(f"{F} case={k} {Ta.fspec}")
    return cases, failures, {}


CHECKS = (
    check_left_inverse,
    check_metabolic_preservation,
    check_permutation_fibers,
    check_norm_identities,
    check_cofactor_radical,
    check_unit_section,
    check_witt_tables,
    check_gw_oracle,
    check_functional_discrimination,
    check_triple_independence,
)


def run_all(seed: int = 0, only=None) -> list[CheckResult]:
    out = []
    for chk in CHECKS:
        if only and chk.key not in only:
            continue
        out.append(chk(seed=seed))
    return out
