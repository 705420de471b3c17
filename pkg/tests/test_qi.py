import math
import random
from fractions import Fraction

import pytest

from ufolab import (CayleyOracle, FreeAbelian, InputError, QiConstants, Ufo,
                    UfoParams, build_ball, derived_constants, qi_check_on_ball,
                    transfer_ufo, verify_ufo)
from ufolab.qi import M_PRIME_NEG_INF

GRID_U = [(x, y) for x in range(7, 14) for y in range(-3, 0)]
GRID_F = [(x, 0) for x in range(0, 21)]
GRID_O = [(x, y) for x in range(7, 14) for y in range(1, 4)]


class TestDerivedConstants:
    def test_identity_constants(self):
        dc = derived_constants(QiConstants(1, 0, 0), 4, UfoParams(1, 4, 18))
        assert dc.alpha == 1
        assert dc.m_prime == -2
        assert dc.k_prime == 4
        assert dc.r_prime == 18

    def test_alpha_formula(self):
        dc = derived_constants(QiConstants(1, 1, 1), 5, UfoParams(1, 1, 1))
        assert dc.alpha == 6

    def test_ceilings(self):
        dc = derived_constants(QiConstants(2, 0, 1), 2, UfoParams(3, 3, 18))
        assert dc.k_prime == 6
        assert dc.r_prime == 3

    def test_matches_independent_rational_evaluation(self):
        rng = random.Random(1234)
        for _ in range(20):
            a = Fraction(rng.randrange(1, 5))
            b = Fraction(rng.randrange(0, 4))
            c = Fraction(rng.randrange(0, 4))
            deg = rng.randrange(1, 7)
            m = rng.randrange(0, 10 ** rng.randrange(1, 9))
            k = rng.randrange(0, 40)
            r = rng.randrange(0, 400)
            dc = derived_constants(QiConstants(a, b, c), deg,
                                   UfoParams(m, k, r))
            # re-derive everything exactly, independently
            alpha = a * a * (1 + b + 2 * c) + b + c
            assert dc.alpha == alpha
            assert dc.k_prime == math.ceil(k * (a + b))
            assert dc.r_prime == math.ceil(Fraction(r) / (a * (1 + b + 2 * c)))
            exponent = 2 * a * b + alpha
            assert exponent.denominator == 1
            power = deg ** exponent.numerator
            assert dc.m_prime == math.floor(Fraction(m, power) - 2)

    def test_fractional_constants(self):
        dc = derived_constants(QiConstants(Fraction(3, 2), Fraction(1, 2), 0),
                               3, UfoParams(1, 2, 10))
        assert dc.alpha == Fraction(9, 4) * Fraction(3, 2) + Fraction(1, 2)
        assert dc.k_prime == 4  # ceil(2 * 2) = 4

    def test_degree_one(self):
        dc = derived_constants(QiConstants(2, 3, 1), 1, UfoParams(7, 1, 1))
        assert dc.m_prime == 5

    def test_invariants(self):
        with pytest.raises(InputError):
            QiConstants(Fraction(1, 2), 0, 0)
        with pytest.raises(InputError):
            derived_constants(QiConstants(1, 0, 0), 0, UfoParams(1, 1, 1))


class TestQiCheck:
    def test_identity_map(self):
        ball = build_ball(CayleyOracle(FreeAbelian(2)), [(0, 0)], 6)
        mapping = {v: v for v in ball.vertices}
        result = qi_check_on_ball(ball, ball, mapping, QiConstants(1, 0, 0))
        assert result.ok and result.pairs_checked > 0

    def test_doubling_map(self):
        z = CayleyOracle(FreeAbelian(1))
        bg = build_ball(z, [(0,)], 14)
        bh = build_ball(z, [(0,)], 30)
        mapping = {(n,): (2 * n,) for (n,) in bg.vertices}
        result = qi_check_on_ball(bg, bh, mapping, QiConstants(2, 0, 1))
        assert result.ok

    def test_constant_map_fails_lower_bound(self):
        ball = build_ball(CayleyOracle(FreeAbelian(2)), [(0, 0)], 4)
        mapping = {v: (0, 0) for v in ball.vertices}
        result = qi_check_on_ball(ball, ball, mapping, QiConstants(1, 0, 0))
        assert not result.ok
        assert result.violation[0] == "embedding"

    def test_sparse_image_fails_density(self):
        z = CayleyOracle(FreeAbelian(1))
        bg = build_ball(z, [(0,)], 3)
        bh = build_ball(z, [(0,)], 30)
        mapping = {(n,): (8 * n,) for (n,) in bg.vertices}
        result = qi_check_on_ball(bg, bh, mapping, QiConstants(8, 0, 1))
        assert not result.density_ok

    def test_partial_map_rejected(self):
        ball = build_ball(CayleyOracle(FreeAbelian(1)), [(0,)], 3)
        with pytest.raises(InputError):
            qi_check_on_ball(ball, ball, {(0,): (0,)}, QiConstants(1, 0, 0))


@pytest.fixture(scope="module")
def identity_transfer():
    ball = build_ball(CayleyOracle(FreeAbelian(2)), GRID_U, 19)
    ufo = Ufo(GRID_U, GRID_F, GRID_O)
    mapping = {v: v for v in ball.vertices}
    return transfer_ufo(ball, ball, mapping, QiConstants(1, 0, 0), ufo,
                        UfoParams(1, 4, 18))


class TestTransfer:
    def test_identity_constants_and_conditions(self, identity_transfer):
        tr = identity_transfer
        assert tr.params.k == 4 and tr.params.r == 18
        assert tr.report.cond2 and tr.report.cond3 and tr.report.exact
        assert tr.cond1_vacuous  # m' = -2

    def test_identity_fprime_is_one_neighborhood(self, identity_transfer):
        # 21-vertex wall: 23 + 2*21 vertices within distance 1
        assert identity_transfer.f_prime_size == 65

    def test_identity_separation_and_size_bound(self, identity_transfer):
        tr = identity_transfer
        assert tr.separation_ok
        assert tr.size_bound_ok
        assert tr.m2_size == 21
        assert len(tr.m_prime_pairs) >= tr.m2_size - 2 * tr.f_prime_size

    def test_doubling_on_line(self):
        z = CayleyOracle(FreeAbelian(1))
        ufo = Ufo([(-3,), (-2,), (-1,)], [(0,)], [(1,), (2,), (3,)])
        bg = build_ball(z, list(ufo.u), 10)
        bh = build_ball(z, [(0,)], 40)
        mapping = {(n,): (2 * n,) for (n,) in bg.vertices}
        tr = transfer_ufo(bg, bh, mapping, QiConstants(2, 0, 1), ufo,
                          UfoParams(3, 6, 4))
        assert tr.derived.alpha == 13
        assert tr.params.k == 12 and tr.params.r == 1
        assert tr.derived.m_prime == -2 and tr.cond1_vacuous
        # f(U) lands inside the alpha-neighborhood of f(F): empty transfer
        assert len(tr.m_prime_pairs) == 0
        assert tr.report.cond2 and tr.report.cond3
        assert tr.size_bound_ok and tr.separation_ok

    def test_separation_thins_close_pairs(self):
        # with AB = 1, adjacent matched pairs must not both survive in M''
        z = CayleyOracle(FreeAbelian(1))
        u = [(-4,), (-3,), (-2,), (-1,)]
        o = [(1,), (2,), (3,), (4,)]
        ufo = Ufo(u, [(0,)], o)
        bg = build_ball(z, u, 16)
        bh = build_ball(z, [(0,)], 60)
        mapping = {(n,): (n,) for (n,) in bg.vertices}
        tr = transfer_ufo(bg, bh, mapping, QiConstants(1, 1, 0), ufo,
                          UfoParams(4, 8, 2))
        assert tr.separation_ok
        assert tr.m2_size == 2  # only every other pair survives AB = 1
        assert tr.size_bound_ok

    def test_empty_ufo_transfer(self):
        ball = build_ball(CayleyOracle(FreeAbelian(2)), [(0, 0)], 8)
        mapping = {v: v for v in ball.vertices}
        tr = transfer_ufo(ball, ball, mapping, QiConstants(1, 0, 0),
                          Ufo([], [], []), UfoParams(1, 2, 2))
        assert tr.report.cond2 and tr.report.cond3
        assert tr.m2_size == 0 and tr.f_prime_size == 0
