import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_array_equal

from oracles import deviation_check, potential_by_least_squares
from stpbayes import (
    NormalGame,
    build_potential_system,
    face_matrix,
    pure_nash,
    solve_potential,
    verify_potential,
    verify_weighted_potential,
)
from stpbayes.errors import InfinitePayoff, NonpositiveWeight

seeds = st.integers(min_value=0, max_value=2**32 - 1)
cards_st = st.lists(st.integers(1, 3), min_size=1, max_size=3)

PENNIES = NormalGame((2, 2), [[1, -1, -1, 1], [-1, 1, 1, -1]])


def potential_game(rng, cards):
    """``c_i = P + d_i(s_{-i})``."""
    kappa = int(np.prod(cards))
    p = rng.integers(-4, 5, size=kappa).astype(float)
    rows = []
    for i in range(1, len(cards) + 1):
        e = face_matrix(i, cards)
        rows.append(p + rng.integers(-3, 4, size=e.shape[0]) @ e)
    return NormalGame(tuple(cards), np.vstack(rows)), p


def constancy(a, b):
    d = np.asarray(a) - np.asarray(b)
    return float(d.max() - d.min())


class TestFaceMatrix:
    def test_examples(self):
        assert_array_equal(face_matrix(1, (3,)), np.ones((1, 3)))
        assert_array_equal(face_matrix(1, (2, 2)), np.kron(np.ones((1, 2)), np.eye(2)))
        assert_array_equal(face_matrix(2, (2, 2)), np.kron(np.eye(2), np.ones((1, 2))))

    @pytest.mark.parametrize("cards", [(2, 3), (3, 1, 2), (2, 2, 2)])
    def test_structure(self, cards):
        for i in range(1, len(cards) + 1):
            e = face_matrix(i, cards)
            assert e.shape == (int(np.prod(cards)) // cards[i - 1], int(np.prod(cards)))
            assert_array_equal(e.sum(axis=0), 1.0)
            assert_array_equal(e.sum(axis=1), cards[i - 1])


class TestSystem:
    def test_dims(self):
        assert build_potential_system(NormalGame((2, 3), np.zeros((2, 6)))).psi.shape == (6, 5)
        sys_ = build_potential_system(NormalGame((2, 2), np.zeros((2, 4))))
        assert sys_.psi.shape == (4, 4)
        assert_array_equal(sys_.b, 0)

    def test_layout(self):
        cards = (2, 3, 2)
        sys_ = build_potential_system(NormalGame(cards, np.zeros((3, 12))))
        e = [face_matrix(i, cards) for i in (1, 2, 3)]
        assert_array_equal(sys_.psi[:12, :6], -e[0].T)
        assert_array_equal(sys_.psi[:12, 6:10], e[1].T)
        assert_array_equal(sys_.psi[:12, 10:], 0)
        assert_array_equal(sys_.psi[12:, :6], -e[0].T)
        assert_array_equal(sys_.psi[12:, 6:10], 0)
        assert_array_equal(sys_.psi[12:, 10:], e[2].T)

    def test_infinite(self):
        with pytest.raises(InfinitePayoff):
            build_potential_system(NormalGame((2,), [[float("-inf"), 0]]))


class TestSolve:
    def test_table_potential(self):
        # per-type game with potential (1,3,2;-2,0,3): c_i = P + d_i
        p = np.array([1, 3, 2, -2, 0, 3], dtype=float)
        g = NormalGame((2, 3), [p + np.array([1, 2, 3]) @ face_matrix(1, (2, 3)),
                                p + np.array([5, -1]) @ face_matrix(2, (2, 3))])
        res = solve_potential(g)
        assert res.is_potential
        assert constancy(res.potential_vector, p) <= 1e-8

    def test_pennies(self):
        res = solve_potential(PENNIES)
        assert not res.is_potential
        assert res.potential_vector is None
        assert res.residual > 0

    def test_single_player(self):
        res = solve_potential(NormalGame((3,), [[1, 5, 2]]))
        assert res.is_potential
        assert_array_equal(res.potential_vector, [1, 5, 2])

    @settings(max_examples=60, deadline=None)
    @given(cards_st, seeds)
    def test_recovers_constructed(self, cards, seed):
        rng = np.random.default_rng(seed)
        g, p = potential_game(rng, cards)
        res = solve_potential(g)
        assert res.is_potential
        assert constancy(res.potential_vector, p) <= 1e-8
        assert verify_potential(g, res.potential_vector)
        best = np.flatnonzero(res.potential_vector >= res.potential_vector.max() - 1e-9)
        eq = pure_nash(g)
        assert eq
        for k in best:
            assert g.space.unindex(int(k) + 1) in eq

    @settings(max_examples=60, deadline=None)
    @given(cards_st, st.booleans(), seeds)
    def test_oracle_agreement(self, cards, make_potential, seed):
        rng = np.random.default_rng(seed)
        if make_potential:
            g, _ = potential_game(rng, cards)
        else:
            g = NormalGame(tuple(cards), rng.integers(-3, 4, size=(len(cards), int(np.prod(cards)))).astype(float))
        exists, p = potential_by_least_squares(cards, g.payoffs)
        assert exists == deviation_check(cards, g.payoffs, p)
        assert solve_potential(g).is_potential == exists

    @settings(max_examples=40, deadline=None)
    @given(cards_st, seeds)
    def test_closure(self, cards, seed):
        rng = np.random.default_rng(seed)
        g1, p1 = potential_game(rng, cards)
        g2, p2 = potential_game(rng, cards)
        res = solve_potential(NormalGame(g1.cardinalities, g1.payoffs + g2.payoffs))
        assert res.is_potential
        assert constancy(res.potential_vector, p1 + p2) <= 1e-8


class TestVerify:
    def test_identical_interest(self):
        v = np.arange(6.0)
        assert verify_potential(NormalGame((2, 3), [v, v]), v)

    def test_rejects_wrong(self):
        assert not verify_potential(PENNIES, np.zeros(4))

    def test_weighted(self):
        rng = np.random.default_rng(0)
        g, p = potential_game(rng, (2, 3))
        assert verify_weighted_potential(g, p, [1, 1]) == verify_potential(g, p)
        doubled = NormalGame(g.cardinalities, np.vstack([2 * g.payoffs[0], g.payoffs[1]]))
        assert verify_weighted_potential(doubled, p, [2, 1])
        assert not verify_potential(doubled, p)
        q = rng.normal(size=6)
        assert verify_weighted_potential(NormalGame((2, 3), [3 * q, 0.5 * q]), q, [3, 0.5])

    def test_nonpositive_weight(self):
        with pytest.raises(NonpositiveWeight):
            verify_weighted_potential(PENNIES, np.zeros(4), [1, 0])
