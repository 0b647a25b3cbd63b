import random

import pytest
from hypothesis import given, settings, strategies as st

from quadcorr.cancel import (
    CalibrationError,
    FSpec,
    Minus,
    PaddingError,
    Plus,
    StabilityError,
    adjugate_g,
    beta_calibrate,
    binomial_padding,
    check_applicable,
    det_norm,
    geometric_padding,
    left_inverse_check,
    make_bitriple,
    mf_matrix,
    naturality_boxtimes_check,
    norm_degree,
    permutation_fiber_check,
    rank_one_class,
    rho,
    rho_n,
    rho_n_run,
    rho_triple,
    rho_triple_run,
    unit_section_check,
    unit_section_term,
    FTriple,
)
from quadcorr.corr import FormalSum, boxtimes_gm, dot_expand, identity_gm, random_correspondence, stability_bound, unit_gm
from quadcorr.exactalg import GF, QQ, LaurentPoly, LaurentRing, Matrix, laurent_normalize
from quadcorr.quadform import GWClass, QuadSpace, direct_sum, gw_equal, hyperbolic, is_metabolic, scale
from quadcorr.residue import JUNIOR_TRACE, NotApplicableError, residue_quadspace

from conftest import quad_spaces

L = LaurentRing(QQ)
t = L.gen()


def D(F, *entries):
    return QuadSpace.diagonal(F, entries)


def poly(F, coeffs, val=0):
    return LaurentPoly(F, coeffs, val)


# frozen after the first calibration run
GOLDEN_BETA = {("Q", 2): -1, ("Q", 3): -1, ("Q", 4): -1, ("F_5", 2): 1, ("F_7", 2): 3}


class TestFSpec:
    def test_labels(self):
        assert str(Plus(3)) == "t^3 - 1"
        assert str(Minus(2)) == "t^2 - u"

    def test_bad(self):
        with pytest.raises(StabilityError):
            Plus(0)
        with pytest.raises(ValueError):
            FSpec("other", 2)


class TestNorms:
    def test_mf_examples(self):
        assert mf_matrix(identity_gm(QQ), Minus(2)) == Matrix(L, [[t**2 - t]])
        assert mf_matrix(identity_gm(QQ), Plus(2)) == Matrix(L, [[t**2 - 1]])
        assert mf_matrix(unit_gm(QQ), Minus(1)) == Matrix(L, [[t - 1]])

    @pytest.mark.parametrize("n", [1, 2, 3, 5])
    def test_plus_identity(self, n):
        assert det_norm(identity_gm(QQ), Plus(n)) == t**n - 1

    def test_minus_identity(self):
        assert det_norm(identity_gm(QQ), Minus(2)) == t**2 - t

    def test_plus_rank_two(self):
        assert det_norm(boxtimes_gm(D(QQ, 1, 1)), Plus(2)) == (t**2 - 1) ** 2

    def test_zero_divisor(self):
        # t - u vanishes on the diagonal
        with pytest.raises(NotApplicableError):
            det_norm(identity_gm(QQ), Minus(1))
        with pytest.raises(NotApplicableError):
            adjugate_g(identity_gm(QQ), Minus(1))

    def test_adjugate_examples(self):
        assert adjugate_g(identity_gm(QQ), Minus(2)) == Matrix(L, [[1]])
        g = adjugate_g(boxtimes_gm(D(QQ, 1, 1)), Plus(2))
        assert g == Matrix.identity(L, 2).scale(t**2 - 1)

    @settings(max_examples=30)
    @given(seed=st.integers(0, 10**6), F=st.sampled_from([QQ, GF(5), GF(7)]), n=st.integers(1, 4))
    def test_plus_norm_power(self, seed, F, n):
        rng = random.Random(seed)
        C = random_correspondence(F, rng.randint(1, 3), rng)
        assert det_norm(C, Plus(n)) == (LaurentPoly.t(F, n) - 1) ** C.rank

    @settings(max_examples=30)
    @given(seed=st.integers(0, 10**6), F=st.sampled_from([QQ, GF(5), GF(7)]))
    def test_cofactor_identity(self, seed, F):
        rng = random.Random(seed)
        C = random_correspondence(F, rng.randint(1, 2), rng)
        Lf = LaurentRing(F)
        n = max(stability_bound(C)[0], 0) + 1
        for f in (Plus(n), Minus(n)):
            M, g = mf_matrix(C, f), adjugate_g(C, f)
            N = Matrix.identity(Lf, C.rank).scale(det_norm(C, f))
            assert M @ g == N and g @ M == N
            assert C.gram @ g == g.T @ C.gram

    def test_minus_norm_shape(self):
        # above the bound the normalized minus norm is monic with a unit constant term
        rng = random.Random(3)
        for F in (QQ, GF(5)):
            for _ in range(5):
                C = random_correspondence(F, 2, rng)
                N_P, M_P = stability_bound(C)
                n = max(N_P, 0) + 1
                v, c, Nt = laurent_normalize(det_norm(C, Minus(n)))
                assert Nt.is_monic() and Nt.coeff(0)
                assert Nt.degree == 2 * n + M_P


class TestPadding:
    def test_binomial(self):
        assert binomial_padding(QQ, 2, 1) == t**2 + 1
        assert binomial_padding(QQ, 2, 2) == t**2 - 1
        assert binomial_padding(QQ, 0, 2) == L(1)

    def test_geometric(self):
        assert geometric_padding(QQ, 2, 1) == t**2 + t + 1

    def test_degrees_and_applicability(self):
        C = identity_gm(QQ)
        bt = make_bitriple(C, 2, 4)
        assert bt.m == 4
        for T in (bt.plus, bt.minus):
            assert norm_degree(T.norm) == 4
            assert check_applicable(C, T)

    def test_target_too_small(self):
        with pytest.raises(PaddingError):
            make_bitriple(boxtimes_gm(D(QQ, 1, 1)), 2, 3)

    def test_bad_padding_function(self):
        with pytest.raises(PaddingError):
            make_bitriple(identity_gm(QQ), 2, 4, lambda F, d, r: LaurentPoly.constant(F, 1))

    def test_non_applicable_triple(self):
        C = identity_gm(QQ)
        bad = FTriple(Plus(2), t**2 - 1, Matrix(L, [[2]]))
        assert not check_applicable(C, bad)
        with pytest.raises(NotApplicableError):
            rho_triple(C, bad)


class TestBitriple:
    def test_identity(self):
        bt = make_bitriple(identity_gm(QQ), 2)
        assert (bt.n, bt.m) == (2, 2)
        assert bt.plus.norm == t**2 - 1
        # t^2 - t has polynomial part t - 1 of degree 1; padded by t + 1
        assert bt.minus.norm == (t**2 - t) * (t + 1)
        assert bt.plus.g == Matrix(L, [[1]])
        assert bt.minus.g == Matrix(L, [[t + 1]])

    def test_unit(self):
        bt = make_bitriple(unit_gm(QQ), 2)
        assert bt.plus.norm == bt.minus.norm == t**2 - 1
        assert bt.m == 2

    @pytest.mark.parametrize("n", [0, 1])
    def test_stability_gate(self, n):
        with pytest.raises(StabilityError):
            make_bitriple(identity_gm(QQ), n)

    def test_gate_in_rho(self):
        with pytest.raises(StabilityError):
            rho(identity_gm(QQ), 1)

    def test_normalized_ends_match(self):
        # both norms normalize to the same degree m
        rng = random.Random(11)
        for _ in range(5):
            C = random_correspondence(GF(7), 2, rng)
            bt = make_bitriple(C, max(stability_bound(C)[0], 0) + 1)
            assert norm_degree(bt.plus.norm) == norm_degree(bt.minus.norm) == bt.m


class TestRhoTriple:
    def test_identity_minus(self):
        C = identity_gm(QQ)
        run = rho_triple_run(C, make_bitriple(C, 2).minus)
        assert (run.module_dim, run.radical_dim, run.quotient_dim) == (2, 1, 1)
        assert run.space.rank == 1

    def test_identity_plus(self):
        C = identity_gm(QQ)
        run = rho_triple_run(C, make_bitriple(C, 2).plus)
        assert run.radical_dim == 0
        assert run.space.gram == Matrix(QQ, [[0, 1], [1, 0]])

    def test_hyperbolic_input(self):
        C = boxtimes_gm(hyperbolic(QQ))
        bt = make_bitriple(C, 3)
        for T in (bt.plus, bt.minus):
            assert is_metabolic(rho_triple(C, T))

    @settings(max_examples=15)
    @given(seed=st.integers(0, 10**6), F=st.sampled_from([QQ, GF(5), GF(7)]))
    def test_bookkeeping(self, seed, F):
        rng = random.Random(seed)
        C = random_correspondence(F, rng.randint(1, 2), rng)
        n = max(stability_bound(C)[0], 0) + 1
        bt = make_bitriple(C, n)
        for T in (bt.plus, bt.minus):
            run = rho_triple_run(C, T)
            assert run.module_dim == C.rank * bt.m
            assert run.radical_dim == run.module_dim - run.quotient_dim == run.image_rank
            assert run.quotient_dim == run.expected_quotient_dim
            assert all(run.checks.values())
        assert rho_triple_run(C, bt.plus).quotient_dim == C.rank * n


class TestRho:
    def test_rank_one_output(self):
        res = rho_n_run(dot_expand(boxtimes_gm(D(QQ, 1))), 2)
        assert res.cls.rank == 1
        assert len(res.runs) == 8
        assert res.as_dict()["virtual_rank"] == 1

    @pytest.mark.parametrize("F,n", [(QQ, 2), (QQ, 3), (QQ, 4), (GF(5), 2), (GF(7), 2)])
    def test_golden_beta(self, F, n):
        assert beta_calibrate(F, n) == F(GOLDEN_BETA[(str(F), n)])

    def test_beta_in_square_classes_f5(self):
        assert beta_calibrate(GF(5), 2) in (GF(5)(1), GF(5)(2))

    def test_rank_one_class_rejects(self):
        with pytest.raises(CalibrationError):
            rank_one_class(GWClass(D(QQ, 1, 1)))
        with pytest.raises(CalibrationError):
            # virtual rank 1, but signature 5
            rank_one_class(GWClass(D(QQ, 1, 1, 1), D(QQ, -1, -1)))

    def test_empty_sum(self):
        with pytest.raises(ValueError):
            rho_n(FormalSum(()), 2)

    def test_unit_term_zero(self):
        for F in (QQ, GF(5)):
            assert rho_n(FormalSum.of(unit_gm(F)), 2).rank == 0
            assert unit_section_check(D(F, 2), 3).passed
        cls = rho_n(unit_section_term(D(QQ, 1)), 2)
        assert gw_equal(cls, GWClass.zero(QQ))

    def test_hyperbolic_witt_zero(self):
        for n in (2, 3):
            cls = rho(boxtimes_gm(hyperbolic(QQ)), n)
            assert is_metabolic(cls)

    def test_twist_by_minus_one(self):
        # rho(Phi x id) = <-1> Phi over Q
        for phi in (D(QQ, 1), D(QQ, 2), D(QQ, 1, 3), D(QQ, 5, -7)):
            assert gw_equal(rho(boxtimes_gm(phi), 2), scale(-1, phi))


class TestLeftInverse:
    @pytest.mark.parametrize("n", [2, 3])
    @pytest.mark.parametrize("phi", [(1,), (-1,), (2,), (1, 3)])
    def test_rationals(self, phi, n):
        rep = left_inverse_check(D(QQ, *phi), n, QQ(-1))
        assert rep.passed, rep.details

    def test_hyperbolic(self):
        assert left_inverse_check(hyperbolic(QQ), 2).passed

    @pytest.mark.parametrize("phi", [(1,), (3,), (1, 3)])
    def test_f7(self, phi):
        assert left_inverse_check(D(GF(7), *phi), 2, GF(7)(3)).passed

    def test_zero_rank(self):
        assert left_inverse_check(QuadSpace.zero(QQ), 2, QQ(-1)).passed

    def test_wrong_beta_fails(self):
        assert not left_inverse_check(D(QQ, 1), 2, QQ(1)).passed

    def test_report(self):
        d = left_inverse_check(D(QQ, 2), 2).as_dict()
        assert d["check"] == "left_inverse" and d["passed"] and d["beta"] == "-1"

    @settings(max_examples=10)
    @given(data=st.data(), F=st.sampled_from([QQ, GF(5), GF(7)]))
    def test_beta_stable_across_forms(self, data, F):
        phi = data.draw(quad_spaces(F, max_n=2, min_n=1))
        beta = beta_calibrate(F, 2)
        assert left_inverse_check(phi, 2, beta).passed

    def test_dot_idempotent_after_rho(self):
        # dot of a dot changes nothing after rho
        C = boxtimes_gm(D(QQ, 1))
        twice = FormalSum(tuple((s1 * s2, c2) for s1, c1 in dot_expand(C) for s2, c2 in dot_expand(c1)))
        assert gw_equal(rho_n(twice, 2), rho_n(dot_expand(C), 2))


class TestMetabolicPreservation:
    @settings(max_examples=10)
    @given(data=st.data(), F=st.sampled_from([QQ, GF(5), GF(7)]), n=st.sampled_from([2, 3]))
    def test_property(self, data, F, n):
        Q = data.draw(quad_spaces(F, max_n=2, min_n=1))
        M = direct_sum(Q, scale(-1, Q))
        assert is_metabolic(rho(boxtimes_gm(M), n))


class TestTripleIndependence:
    @settings(max_examples=10)
    @given(seed=st.integers(0, 10**6), F=st.sampled_from([QQ, GF(5), GF(7)]))
    def test_paddings_agree(self, seed, F):
        rng = random.Random(seed)
        C = random_correspondence(F, rng.randint(1, 2), rng)
        n = max(stability_bound(C)[0], 0) + 1
        m = make_bitriple(C, n).m + 2
        a, b = make_bitriple(C, n, m), make_bitriple(C, n, m, geometric_padding)
        for Ta, Tb in ((a.plus, b.plus), (a.minus, b.minus)):
            assert Ta.norm != Tb.norm
            assert gw_equal(rho_triple(C, Ta), rho_triple(C, Tb))

    def test_class_level_with_padding(self):
        # padding every term to a larger m leaves rho unchanged
        S = dot_expand(boxtimes_gm(D(QQ, 2)))
        base = rho_n_run(S, 2)
        assert gw_equal(rho_n(S, 2, m_target=base.m + 3), base.cls)
        assert gw_equal(rho_n(S, 2, m_target=base.m + 1, padding=geometric_padding), base.cls)


class TestFiberAndNaturality:
    @pytest.mark.parametrize(
        "F,x,y,diag",
        [(QQ, 1, -1, (2, -2)), (QQ, 1, 4, (-3, 3)), (GF(5), 2, 3, (-1, 1))],
    )
    def test_examples(self, F, x, y, diag):
        rep = permutation_fiber_check(F, x, y)
        assert rep.passed and rep.details["metabolic"]
        N = poly(F, [F(x) * F(y), -(F(x) + F(y)), 1])
        assert gw_equal(residue_quadspace(N), D(F, *diag))

    def test_junior_trace_fails(self):
        assert not permutation_fiber_check(QQ, 1, -1, JUNIOR_TRACE).passed

    def test_diagonal_rejected(self):
        with pytest.raises(ValueError):
            permutation_fiber_check(QQ, 2, 2)
        with pytest.raises(ValueError):
            permutation_fiber_check(QQ, 0, 2)

    @pytest.mark.parametrize("phi", [(1,), (2,), ()])
    def test_naturality(self, phi):
        rep = naturality_boxtimes_check(D(QQ, *phi), 2)
        assert rep.passed
        assert rep.details["virtual_rank"] == len(phi)

    def test_naturality_zero_sample(self):
        with pytest.raises(ValueError):
            naturality_boxtimes_check(D(QQ, 1), 2, samples=(0,))
