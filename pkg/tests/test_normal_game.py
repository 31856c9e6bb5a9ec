import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_array_equal

from oracles import nash_double_loop
from stpbayes import NEG_INF, NormalGame, best_responses, equivalent_vector_form, finite_box, pure_nash, restrict
from stpbayes.errors import IndexOutOfRange, InfinitePayoff
from stpbayes.normal_game import payoff
from stpbayes.extreal import ext_stp, ext_weighted_sum

seeds = st.integers(min_value=0, max_value=2**32 - 1)

# Harsanyi game of the 2-player, 3-action example with type-dependent actions
H_E411 = NormalGame((3, 3), [
    [NEG_INF, NEG_INF, NEG_INF, 1.6, NEG_INF, -0.6, NEG_INF, NEG_INF, NEG_INF],
    [NEG_INF, NEG_INF, NEG_INF, -0.1, NEG_INF, -2.1, NEG_INF, NEG_INF, NEG_INF],
])
S_E71 = NormalGame((2, 2), [[-0.25, 1, 2.25, -1.25], [2, 2.4, 0.2, -1.2]])
PENNIES = NormalGame((2, 2), [[1, -1, -1, 1], [-1, 1, 1, -1]])


def random_game(rng, cards, with_inf=False):
    v = rng.integers(-3, 4, size=(len(cards), int(np.prod(cards)))).astype(float)
    if with_inf:
        v[:, rng.random(v.shape[1]) < 0.2] = NEG_INF
    return NormalGame(tuple(cards), v)


class TestExtReal:
    def test_zero_times_inf(self):
        assert ext_weighted_sum([NEG_INF, 2.0], [0.0, 0.5]) == 1.0
        assert np.isneginf(ext_weighted_sum([NEG_INF, 2.0], [0.1, 0.5]))

    def test_ext_stp(self):
        out = ext_stp(np.array([NEG_INF, 1.0, 2.0, NEG_INF]), np.array([[1.0, 0.0], [0.0, 0.0], [0.0, 1.0], [0.0, 0.0]]))
        assert np.isneginf(out[0, 0])
        assert out[0, 1] == 2.0


class TestPayoff:
    def test_examples(self):
        assert payoff(H_E411, 1, (2, 1)) == pytest.approx(1.6)
        assert np.isneginf(payoff(H_E411, 1, (1, 1)))
        assert payoff(NormalGame((2, 2), np.zeros((2, 4))), 2, (2, 1)) == 0.0

    def test_bad_index(self):
        with pytest.raises(IndexOutOfRange):
            payoff(S_E71, 3, (1, 1))
        with pytest.raises(IndexOutOfRange):
            payoff(S_E71, 1, (1, 3))

    def test_shape(self):
        with pytest.raises(ValueError):
            NormalGame((2, 2), np.zeros((2, 3)))


class TestBestResponses:
    def test_examples(self):
        assert best_responses(H_E411, 1, (1,)) == {2}
        assert best_responses(NormalGame((3, 2), np.ones((2, 6))), 1, (2,)) == {1, 2, 3}
        assert best_responses(S_E71, 2, (2,)) == {1}

    def test_all_inf(self):
        assert best_responses(H_E411, 2, (1,)) == frozenset()

    @settings(max_examples=50, deadline=None)
    @given(seeds)
    def test_never_picks_inf(self, seed):
        rng = np.random.default_rng(seed)
        g = random_game(rng, (3, 3), with_inf=True)
        for opp in (1, 2, 3):
            br = best_responses(g, 1, (opp,))
            col = g.tensor(1)[:, opp - 1]
            if np.isfinite(col).any():
                assert all(np.isfinite(col[s - 1]) for s in br)


class TestPureNash:
    def test_examples(self):
        assert pure_nash(H_E411) == {(2, 1)}
        assert pure_nash(NormalGame((3,), [[1, 5, 2]])) == {(2,)}
        assert pure_nash(PENNIES) == set()

    @settings(max_examples=80, deadline=None)
    @given(st.lists(st.integers(1, 4), min_size=1, max_size=3), st.booleans(), seeds)
    def test_matches_double_loop(self, cards, with_inf, seed):
        rng = np.random.default_rng(seed)
        g = random_game(rng, cards, with_inf)
        assert pure_nash(g) == nash_double_loop(cards, lambda i, s: payoff(g, i, s))

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.integers(1, 4), min_size=2, max_size=3), seeds)
    def test_common_shift(self, cards, seed):
        rng = np.random.default_rng(seed)
        g = random_game(rng, cards)
        # only a constant common row preserves every player's incentives
        assert pure_nash(g) == pure_nash(g.shifted(np.full(g.kappa, rng.normal())))

    def test_nonconstant_shift_can_change_equilibria(self):
        g = NormalGame((2, 2), [[1, 0, 0, 1], [1, 0, 0, 1]])
        assert pure_nash(g) == {(1, 1), (2, 2)}
        assert pure_nash(g.shifted([0, 5, 0, 0])) == {(1, 2)}


class TestEquivalentForm:
    def test_examples(self):
        assert_array_equal(equivalent_vector_form(NormalGame((2, 2), [[1, 2, 3, 4], [4, 3, 2, 1]])), [[3, 1, -1, -3]])
        assert_array_equal(equivalent_vector_form(NormalGame((2, 2), [[1, 2, 3, 4]] * 2)), np.zeros((1, 4)))

    def test_shift_invariant(self):
        rng = np.random.default_rng(3)
        g = random_game(rng, (2, 3, 2))
        v = rng.normal(size=g.kappa)
        assert np.allclose(equivalent_vector_form(g), equivalent_vector_form(g.shifted(v)))

    def test_infinite(self):
        with pytest.raises(InfinitePayoff):
            equivalent_vector_form(H_E411)


class TestRestrict:
    def test_box(self):
        assert finite_box(H_E411) == [[2], [1, 3]]
        sub = restrict(H_E411, [[2], [1, 3]])
        assert sub.cardinalities == (1, 2)
        assert_array_equal(sub.payoffs, [[1.6, -0.6], [-0.1, -2.1]])

    def test_ragged(self):
        g = NormalGame((2, 2), [[NEG_INF, 1, 1, 1], [0, 0, 0, 0]])
        assert finite_box(g) is None
