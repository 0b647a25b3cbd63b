import random

import pytest
from hypothesis import given, settings, strategies as st

from quadcorr.corr import (
    GM,
    PT,
    Correspondence,
    FormalSum,
    InvalidCorrespondenceError,
    ModelMismatchError,
    MatrixPowers,
    boxtimes_gm,
    compose,
    direct_sum,
    dot_expand,
    from_quadspace,
    identity_gm,
    random_correspondence,
    require_valid,
    specialize,
    stability_bound,
    to_quadspace,
    unit_gm,
    validate,
    zero_correspondence,
)
from quadcorr.exactalg import GF, QQ, LaurentPoly, LaurentRing, Matrix, mat_det, mat_inverse
from quadcorr.quadform import QuadSpace, gw_invariants
from quadcorr.residue import residue_space

from conftest import fields, quad_spaces, scalars

L = LaurentRing(QQ)
t = L.gen()


def rand_corr(F, seed, rank=None):
    rng = random.Random(seed)
    return random_correspondence(F, rank if rank is not None else rng.randint(1, 2), rng)


def specialized_invariants(C, a):
    S = specialize(C, a)
    return gw_invariants(QuadSpace(S.field, S.gram)), S.action


class TestValidate:
    def test_identity(self):
        assert validate(identity_gm(QQ)).valid

    def test_non_unit_det(self):
        C = Correspondence(QQ, GM, GM, Matrix(L, [[t - 1]]), Matrix(L, [[t]]))
        rep = validate(C)
        assert not rep.valid
        assert any("not a unit" in v for v in rep.violations)

    def test_action_without_gm_target(self):
        C = Correspondence(QQ, GM, PT, Matrix(L, [[1]]), Matrix(L, [[t]]))
        rep = validate(C)
        assert not rep.valid
        assert any("target is pt" in v for v in rep.violations)

    def test_missing_action(self):
        assert not validate(Correspondence(QQ, GM, GM, Matrix(L, [[1]]))).valid

    def test_not_self_adjoint(self):
        G = Matrix(L, [[1, 0], [0, -1]])
        U = Matrix(L, [[1, 1], [0, 1]])
        rep = validate(Correspondence(QQ, GM, GM, G, U))
        assert "action is not self-adjoint: U^T G != G U" in rep.violations

    def test_require_valid(self):
        with pytest.raises(InvalidCorrespondenceError):
            require_valid(Correspondence(QQ, GM, GM, Matrix(L, [[t - 1]]), Matrix(L, [[t]])))

    def test_unit_gram_over_laurent(self):
        # t is a unit of k[t, 1/t]
        assert validate(Correspondence(QQ, GM, GM, Matrix(L, [[t]]), Matrix(L, [[t]]))).valid

    def test_zero_object(self):
        assert validate(zero_correspondence(QQ, GM, GM)).valid


class TestBasic:
    def test_identity(self):
        C = identity_gm(QQ)
        assert (C.rank, C.gram, C.action) == (1, Matrix(L, [[1]]), Matrix(L, [[t]]))

    def test_identity_specialization(self):
        S = specialize(identity_gm(QQ), 3)
        assert S.source is PT and S.gram == Matrix(QQ, [[1]]) and S.action == Matrix(QQ, [[3]])

    def test_unit(self):
        C = unit_gm(QQ)
        assert validate(C).valid
        assert C.action == Matrix(L, [[1]])
        assert compose(C, C) == C

    def test_boxtimes_one_is_identity(self):
        assert boxtimes_gm(QuadSpace.diagonal(QQ, [1])) == identity_gm(QQ)

    @pytest.mark.parametrize("a", [2, -3, "1/2"])
    def test_boxtimes_scalar(self, a):
        C = boxtimes_gm(QuadSpace.diagonal(QQ, [QQ(a)]))
        assert C.gram == Matrix(L, [[QQ(a)]])
        assert C.action == Matrix(L, [[t]])

    def test_boxtimes_rank_additive(self):
        A, B = QuadSpace.diagonal(QQ, [1, 2]), QuadSpace.diagonal(QQ, [3])
        from quadcorr.quadform import direct_sum as qsum

        assert boxtimes_gm(qsum(A, B)) == direct_sum(boxtimes_gm(A), boxtimes_gm(B))

    def test_boxtimes_needs_pt(self):
        with pytest.raises(ModelMismatchError):
            boxtimes_gm(identity_gm(QQ))

    def test_quadspace_round_trip(self):
        Q = QuadSpace.diagonal(QQ, [1, -2])
        assert to_quadspace(from_quadspace(Q)).gram == Q.gram
        with pytest.raises(ModelMismatchError):
            to_quadspace(identity_gm(QQ))

    @given(data=st.data(), F=fields())
    def test_specialize_boxtimes(self, data, F):
        Q = data.draw(quad_spaces(F, max_n=3))
        a = data.draw(scalars(F, nonzero=True))
        S = specialize(boxtimes_gm(Q), a)
        assert S.gram == Q.gram
        assert S.action == Matrix.identity(F, Q.rank).scale(a)

    def test_specialize_zero(self):
        with pytest.raises(ValueError):
            specialize(identity_gm(QQ), 0)


class TestCompose:
    def test_identity_laws(self):
        for seed in range(8):
            C = rand_corr(QQ, seed)
            assert compose(identity_gm(QQ), C) == C
            assert compose(C, identity_gm(QQ)) == C

    def test_pt_identity(self):
        R = residue_space(LaurentPoly(QQ, [-1, 0, 1]))
        one_pt = from_quadspace(QuadSpace.diagonal(QQ, [1]))
        assert compose(R, one_pt) == R

    def test_residue_then_boxtimes(self):
        # <t^2 - 1> : pt -> gm, then <1> x id : gm -> gm; ranks multiply 2 * 1
        R = residue_space(LaurentPoly(QQ, [-1, 0, 1]))
        C = compose(boxtimes_gm(QuadSpace.diagonal(QQ, [1])), R)
        assert C.rank == 2
        assert (C.source, C.target) == (PT, GM)
        # tensoring with the diagonal over k[u, 1/u] changes nothing
        assert C.gram == R.gram and C.action == R.action
        assert validate(C).valid

    def test_residue_then_scaled_boxtimes(self):
        # oracle: explicit tensor P_B (x) P_A with B = <a> x id, basis f (x) e_i
        R = residue_space(LaurentPoly(QQ, [2, -3, 1]))
        C = compose(boxtimes_gm(QuadSpace.diagonal(QQ, [5])), R)
        assert C.gram == R.gram.scale(QQ(5))
        assert C.action == R.action

    def test_block_formula(self):
        # gm -> gm after pt -> gm: blocks G_A * (G_B)_{jl}(U_A), actions (U_B)_{jl}(U_A)
        A = residue_space(LaurentPoly(QQ, [2, -3, 1]))
        B = Correspondence(QQ, GM, GM, Matrix(L, [[t, 0], [0, t ** -1]]), Matrix(L, [[t, 0], [0, t ** -2]]))
        assert validate(B).valid
        C = compose(B, A)
        T = A.action
        Tinv = mat_inverse(T)
        Z = Matrix.zeros(QQ, 2, 2)
        assert C.gram == Matrix.from_blocks(QQ, [[A.gram @ T, Z], [Z, A.gram @ Tinv]])
        assert C.action == Matrix.from_blocks(QQ, [[T, Z], [Z, Tinv @ Tinv]])
        assert validate(C).valid

    def test_mismatch(self):
        R = residue_space(LaurentPoly(QQ, [-1, 0, 1]))
        with pytest.raises(ModelMismatchError):
            compose(R, R)

    def test_zero_rank(self):
        Z = zero_correspondence(QQ, GM, GM)
        assert compose(Z, identity_gm(QQ)).rank == 0

    @settings(max_examples=25)
    @given(seed=st.integers(0, 10**6), F=fields())
    def test_associative(self, seed, F):
        rng = random.Random(seed)
        A, B, C = (random_correspondence(F, rng.randint(1, 2), rng) for _ in range(3))
        left = compose(compose(A, B), C)
        right = compose(A, compose(B, C))
        # with middle-major bases both sides use the same basis order
        assert left == right
        for a in (1, 2, 3):
            a = F(a) if F(a) else F(1)
            assert specialized_invariants(left, a) == specialized_invariants(right, a)

    @settings(max_examples=25)
    @given(seed=st.integers(0, 10**6), F=fields())
    def test_validate_preserved(self, seed, F):
        A, B = rand_corr(F, seed), rand_corr(F, seed + 1)
        assert validate(compose(A, B)).valid
        for _, term in dot_expand(A):
            assert validate(term).valid
        assert validate(specialize(A, F(1))).valid
        R = residue_space(LaurentPoly(F, [-1, -1, 1]))
        assert validate(compose(A, R)).valid

    @settings(max_examples=25)
    @given(seed=st.integers(0, 10**6), data=st.data(), F=fields())
    def test_specialize_commutes_with_pt_middle(self, seed, data, F):
        # A : gm -> pt forgets the action of a random correspondence
        X = rand_corr(F, seed)
        A = Correspondence(F, GM, PT, X.gram)
        B = residue_space(LaurentPoly(F, [-1, -1, 1]))
        a = data.draw(scalars(F, nonzero=True))
        assert specialize(compose(B, A), a) == compose(B, specialize(A, a))

    @settings(max_examples=25)
    @given(seed=st.integers(0, 10**6), data=st.data(), F=fields())
    def test_action_polynomial_self_adjoint(self, seed, data, F):
        C = rand_corr(F, seed)
        p = LaurentPoly(F, [data.draw(scalars(F)) for _ in range(3)], data.draw(st.integers(-2, 1)))
        pw, pwT = MatrixPowers(C.action), MatrixPowers(C.action.T)
        assert C.gram @ pw.evaluate(p) == pwT.evaluate(p) @ C.gram


class TestDot:
    def test_unit_cancels(self):
        terms = list(dot_expand(unit_gm(QQ)))
        assert len(terms) == 4
        # every term is the unit itself; signs sum to zero
        assert all(c == unit_gm(QQ) for _, c in terms)
        assert sum(s for s, _ in terms) == 0

    def test_identity_ranks(self):
        terms = list(dot_expand(identity_gm(QQ)))
        assert [s for s, _ in terms] == [1, -1, -1, 1]
        assert [c.rank for _, c in terms] == [1, 1, 1, 1]

    def test_needs_gm(self):
        with pytest.raises(ModelMismatchError):
            dot_expand(residue_space(LaurentPoly(QQ, [-1, 0, 1])))

    def test_formal_sum(self):
        S = FormalSum.of(identity_gm(QQ))
        assert len(S + (-S)) == 2
        with pytest.raises(ValueError):
            FormalSum(((2, identity_gm(QQ)),))
        with pytest.raises(ModelMismatchError):
            FormalSum(((1, identity_gm(QQ)), (1, identity_gm(GF(5)))))


class TestStability:
    def test_identity(self):
        # charpoly x - t: b0 = -t, b1 = 1; the consecutive pair bound is 1 - 0 = 1
        assert stability_bound(identity_gm(QQ)) == (1, -1)

    def test_boxtimes_rank_two(self):
        N_P, M_P = stability_bound(boxtimes_gm(QuadSpace.diagonal(QQ, [1, 1])))
        assert M_P == -2
        assert N_P == 1

    def test_unit(self):
        assert stability_bound(unit_gm(QQ)) == (0, 0)

    @settings(max_examples=25)
    @given(seed=st.integers(0, 10**6), F=fields())
    def test_bound_separates_terms(self, seed, F):
        from quadcorr.cancel import Minus, det_norm

        C = rand_corr(F, seed)
        N_P, M_P = stability_bound(C)
        n = max(N_P, 0) + 1
        N = det_norm(C, Minus(n))
        # above the bound the top term is t^(n r) and the bottom comes from b_0
        assert N.top_degree == n * C.rank
        assert N.bottom_degree == -M_P

    @given(seed=st.integers(0, 10**6), F=fields())
    def test_specialization_det_pattern(self, seed, F):
        C = rand_corr(F, seed)
        d = mat_det(C.gram)
        assert d.is_unit()
        for a in (1, 2):
            a = F(a)
            assert mat_det(specialize(C, a).gram) == d(a)
