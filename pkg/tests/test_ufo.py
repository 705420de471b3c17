import random

import pytest

from helpers import (brute_all_distances, brute_verify, random_disjoint_sets,
                     random_explicit_graph)
from ufolab import (NOT_FOUND, CayleyOracle, DirectProduct, ExplicitOracle,
                    FreeAbelian, FreeGroup, InputError, MarginError,
                    PentagonOracle, RejectionError, Ufo, UfoParams,
                    amenable_ufo, bounded_matching, build_ball,
                    distance_avoiding, interval_folner, lift_ufo,
                    multiended_ufo, pentagon_ufo, product_factor_normalizer,
                    verify_ufo, zd_ufo)

GRID_U = [(x, y) for x in range(7, 14) for y in range(-3, 0)]
GRID_F = [(x, 0) for x in range(0, 21)]
GRID_O = [(x, y) for x in range(7, 14) for y in range(1, 4)]


@pytest.fixture(scope="module")
def grid_ball():
    return build_ball(CayleyOracle(FreeAbelian(2)), GRID_U, 18)


@pytest.fixture(scope="module")
def grid_ufo():
    return Ufo(GRID_U, GRID_F, GRID_O)


class TestVerify:
    def test_grid_wall_accepts(self, grid_ball, grid_ufo):
        report = verify_ufo(grid_ball, grid_ufo, UfoParams(1, 4, 18))
        assert report.accept
        assert report.min_avoiding == 18

    def test_grid_wall_rejects_r19(self, grid_ball, grid_ufo):
        report = verify_ufo(grid_ball, grid_ufo, UfoParams(1, 4, 19))
        assert not report.accept and not report.cond3
        assert report.cond1 and report.cond2

    def test_grid_wall_rejects_m2(self, grid_ball, grid_ufo):
        report = verify_ufo(grid_ball, grid_ufo, UfoParams(2, 4, 18))
        assert not report.accept and not report.cond1

    def test_empty_triple_accepted(self, grid_ball):
        for params in (UfoParams(0, 0, 0), UfoParams(5, 2, 9)):
            assert verify_ufo(grid_ball, Ufo([], [], []), params).accept

    def test_overlap_is_input_error(self, grid_ball):
        with pytest.raises(InputError):
            verify_ufo(grid_ball, Ufo(GRID_U, GRID_U[:1] + GRID_F, GRID_O),
                       UfoParams(1, 4, 18))

    def test_insufficient_margin_rejects(self):
        small = build_ball(CayleyOracle(FreeAbelian(2)), GRID_U, 8)
        report = verify_ufo(small, Ufo(GRID_U, GRID_F, GRID_O),
                            UfoParams(1, 4, 18))
        assert not report.exact and not report.accept

    def test_r_zero_and_one_vacuous(self, grid_ball, grid_ufo):
        assert verify_ufo(grid_ball, grid_ufo, UfoParams(1, 4, 0)).cond3
        assert verify_ufo(grid_ball, grid_ufo, UfoParams(1, 4, 1)).cond3


class TestBoundedMatching:
    def test_complete_at_four(self, grid_ball):
        result = bounded_matching(grid_ball, GRID_U, GRID_O, 4)
        assert result.complete and result.size == 21

    def test_hall_certificate_at_three(self, grid_ball):
        result = bounded_matching(grid_ball, GRID_U, GRID_O, 3)
        assert not result.complete and result.size == 14
        w, nw = result.hall_witness
        assert len(nw) < len(w)
        # certificate is verifiable: every O vertex within 3 of W is in N(W)
        for u in w:
            for o in GRID_O:
                if distance_avoiding(grid_ball, [u], [o], [], 3) is not NOT_FOUND:
                    assert o in nw

    def test_size_mismatch(self, grid_ball):
        result = bounded_matching(grid_ball, GRID_U, GRID_O[:-1], 4)
        assert not result.complete

    def test_empty(self, grid_ball):
        assert bounded_matching(grid_ball, [], [], 3).complete


class TestBruteForceAgreement:
    def test_random_explicit_graphs(self):
        rng = random.Random(424242)
        for _ in range(12):
            adj = random_explicit_graph(rng, max_n=24)
            oracle = ExplicitOracle(adj)
            ball = build_ball(oracle, oracle.vertices(), len(adj))
            dist = brute_all_distances(oracle.adj)
            sets = random_disjoint_sets(rng, oracle.vertices(),
                                        rng.randrange(0, 4), rng.randrange(0, 4))
            if sets is None:
                continue
            u, f, o = sets
            ufo = Ufo(u, f, o)
            for k in range(0, 7, 2):
                for r in range(0, 7, 2):
                    for m in (0, 1, 3):
                        params = UfoParams(m, k, r)
                        report = verify_ufo(ball, ufo, params,
                                            probe_min_avoiding=False)
                        c1, c2, c3 = brute_verify(oracle.adj, dist, ufo, params)
                        assert (report.cond1, report.cond2, report.cond3) == \
                            (c1, c2, c3), (adj, u, f, o, params)

    def test_monotonicity(self):
        rng = random.Random(99)
        hits = 0
        for _ in range(40):
            adj = random_explicit_graph(rng, max_n=20)
            oracle = ExplicitOracle(adj)
            ball = build_ball(oracle, oracle.vertices(), len(adj))
            sets = random_disjoint_sets(rng, oracle.vertices(), 2, 2)
            if sets is None:
                continue
            u, f, o = sets
            ufo = Ufo(u, f, o)
            report = verify_ufo(ball, ufo, UfoParams(1, 4, 3),
                                probe_min_avoiding=False)
            if not report.accept:
                continue
            hits += 1
            # accepted instances stay accepted when m, r shrink and k grows
            for m2, k2, r2 in [(0, 4, 3), (1, 6, 3), (1, 4, 1), (0, 8, 0)]:
                assert verify_ufo(ball, ufo, UfoParams(m2, k2, r2),
                                  probe_min_avoiding=False).accept
        assert hits >= 3


class TestZdFamily:
    def test_d2_instance_sets(self):
        ufo, params = zd_ufo(2, 1, 2)
        assert set(ufo.u) == {(x, y) for x in (0, 1) for y in (-3, -2, -1)}
        assert set(ufo.f) == {(x, 0) for x in range(-2, 4)}
        assert set(ufo.o) == {(x, y) for x in (0, 1) for y in (1, 2, 3)}
        assert params == UfoParams(1, 4, 8)

    def test_d2_m2_instance(self):
        ufo, params = zd_ufo(2, 2, 1)
        assert set(ufo.u) == {(0, y) for y in range(-6, 0)}
        assert set(ufo.f) == {(-1, 0), (0, 0), (1, 0)}
        assert set(ufo.o) == {(0, y) for y in range(1, 7)}
        assert params == UfoParams(2, 7, 6)

    def test_d3_sizes(self):
        ufo, params = zd_ufo(3, 1, 1)
        assert len(ufo.u) == len(ufo.f) == len(ufo.o) == 9
        assert params == UfoParams(1, 10, 6)

    def test_d1_rejected(self):
        with pytest.raises(InputError):
            zd_ufo(1, 1, 1)

    def test_verifies(self):
        ufo, params = zd_ufo(2, 1, 2)
        ball = build_ball(CayleyOracle(FreeAbelian(2)), ufo.u,
                          max(params.k, params.r))
        assert verify_ufo(ball, ufo, params).accept


class TestPentagonFamily:
    def test_sizes_m1_r2(self):
        ufo, params = pentagon_ufo(1, 2)
        assert len(ufo.u) == 6 and len(ufo.f) == 6 and len(ufo.o) == 6
        assert params == UfoParams(1, 7, 2)

    def test_sets_m2_r1(self):
        ufo, params = pentagon_ufo(2, 1)
        assert set(ufo.u) == {(h, 0) for h in range(-6, 0)}
        assert set(ufo.f) == {(0, v) for v in (-1, 0, 1)}
        assert set(ufo.o) == {(h, 0) for h in range(1, 7)}
        assert params == UfoParams(2, 13, 1)

    def test_verifies_m1_r1(self):
        ufo, params = pentagon_ufo(1, 1)
        ball = build_ball(PentagonOracle(), ufo.u, max(params.k, params.r))
        assert verify_ufo(ball, ufo, params).accept


class TestAmenableFamily:
    def test_z2_box(self):
        box = [(x, y) for x in range(4) for y in range(4)]
        ball = build_ball(CayleyOracle(FreeAbelian(2)), box, 12)
        ufo, params = amenable_ufo(ball, box, 1)
        assert len(ufo.f) == 16 == len(ufo.u)
        assert verify_ufo(ball, ufo, params).accept
        # full disconnection at every certified cap
        assert distance_avoiding(ball, ufo.u, ufo.o, ufo.f,
                                 params.r - 1) is NOT_FOUND

    def test_z_interval(self):
        u = [(x,) for x in range(4)]
        ball = build_ball(CayleyOracle(FreeAbelian(1)), u, 10)
        ufo, params = amenable_ufo(ball, u, 2)
        assert set(ufo.f) == {(-1,), (4,)}
        assert len(ufo.u) == 4 >= 2 * len(ufo.f) / 2

    def test_folner_rejection(self):
        box = [(x, y) for x in range(2) for y in range(2)]
        ball = build_ball(CayleyOracle(FreeAbelian(2)), box, 8)
        with pytest.raises(RejectionError) as err:
            amenable_ufo(ball, box, 3)
        assert err.value.data["boundary"] == 8


class TestMultiendedFamily:
    def test_free2_identity_cut(self):
        ball = build_ball(CayleyOracle(FreeGroup(2)), [""], 8)
        ufo, params = multiended_ufo(ball, [""], 3)
        assert ufo.u == ("a", "aa", "ab")
        assert ufo.o == ("b", "ba", "bb")
        assert verify_ufo(ball, ufo, params).accept

    def test_z_cut(self):
        ball = build_ball(CayleyOracle(FreeAbelian(1)), [(0,)], 9)
        ufo, params = multiended_ufo(ball, [(0,)], 2)
        assert len(ufo.u) == len(ufo.o) == 2
        assert {v[0] > 0 for v in ufo.u} != {v[0] > 0 for v in ufo.o}
        assert verify_ufo(ball, ufo, params).accept

    def test_z2_rejection(self):
        ball = build_ball(CayleyOracle(FreeAbelian(2)), [(0, 0)], 6)
        with pytest.raises(RejectionError):
            multiended_ufo(ball, [(0, 0)], 1)


@pytest.fixture(scope="module")
def setting():
    group = DirectProduct([FreeAbelian(1), FreeGroup(2)])
    normalize = product_factor_normalizer(0)
    provider = interval_folner(group, 0)
    return group, normalize, provider


class TestLift:
    def test_single_coset_r1(self, setting):
        group, normalize, provider = setting
        schreier = Ufo([normalize(group.evaluate("a"))],
                       [normalize(group.identity)],
                       [normalize(group.evaluate("b"))])
        lifted, params, report, _ball = lift_ufo(
            group, normalize, provider, schreier, UfoParams(1, 2, 1))
        # K_1 = {0} so T = {0}: a one-point lift
        assert len(lifted.u) == len(lifted.o) == len(lifted.f) == 1
        assert report.accept
        assert params == UfoParams(0, 2, 1)

    @pytest.mark.parametrize("r", [1, 2, 3])
    def test_single_coset_all_r(self, setting, r):
        group, normalize, provider = setting
        schreier = Ufo([normalize(group.evaluate("a"))],
                       [normalize(group.identity)],
                       [normalize(group.evaluate("b"))])
        lifted, params, report, _ball = lift_ufo(
            group, normalize, provider, schreier, UfoParams(1, 2, r))
        assert report.accept and params.r == r

    @pytest.mark.parametrize("r", [1, 2, 3])
    def test_two_cosets_all_r(self, setting, r):
        group, normalize, provider = setting
        schreier = Ufo(
            [normalize(group.evaluate("a")), normalize(group.evaluate("aa"))],
            [normalize(group.identity)],
            [normalize(group.evaluate("b")), normalize(group.evaluate("bb"))])
        lifted, params, report, _ball = lift_ufo(
            group, normalize, provider, schreier, UfoParams(2, 4, r))
        assert report.accept
        assert params.m == 1 and report.cond1

    def test_r2_heights(self, setting):
        group, normalize, provider = setting
        schreier = Ufo([normalize(group.evaluate("a"))],
                       [normalize(group.identity)],
                       [normalize(group.evaluate("b"))])
        lifted, params, report, _ball = lift_ufo(
            group, normalize, provider, schreier, UfoParams(1, 2, 2))
        # K_2 = heights |h| <= 1, T an interval of length 5
        assert len(lifted.u) == 5
        assert len(lifted.f) == 7
        assert report.accept
