import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose, assert_array_equal

from conftest import FIXTURES
from generators import random_game
from stpbayes import dump_game, load_game, parse_game
from stpbayes.errors import ParseError, ValidationError
from test_bayesian import V1_EX33

seeds = st.integers(min_value=0, max_value=2**32 - 1)
small = st.lists(st.integers(1, 3), min_size=1, max_size=3)

TRIVIAL = {
    "order": "lex-tma",
    "players": 1,
    "types": [1],
    "actions": [1],
    "admissible": [[[1]]],
    "prior": [1],
    "payoffs": [[0]],
}


def ex33_doc():
    return json.loads((FIXTURES / "example33.game").read_text())


def reject(doc, exc=ValidationError):
    with pytest.raises(exc) as info:
        parse_game(json.dumps(doc))
    return str(info.value)


class TestParse:
    def test_ex33(self):
        g = load_game(FIXTURES / "example33.game")
        assert_array_equal(g.payoffs[0], V1_EX33)
        assert g.type_cards == (2, 2)
        assert g.action_cards == (3, 3)

    def test_trivial(self):
        g = parse_game(json.dumps(TRIVIAL))
        assert g.n == 1
        assert_array_equal(g.payoffs, [[0.0]])
        assert_array_equal(g.prior, [1.0])

    def test_prior_sum(self):
        doc = ex33_doc()
        doc["prior"] = [0.3, 0.2, 0.1, 0.3]
        assert "prior" in reject(doc)

    def test_negative_prior(self):
        doc = ex33_doc()
        doc["prior"] = [0.5, 0.2, 0.4, -0.1]
        assert "prior" in reject(doc)

    def test_null_on_admissible(self):
        doc = ex33_doc()
        doc["payoffs"][0][0] = None
        assert "payoffs[1]" in reject(doc)

    def test_number_on_inadmissible(self):
        doc = ex33_doc()
        doc["payoffs"][1][6] = 1.0
        assert "inadmissible" in reject(doc)

    def test_wrong_length(self):
        doc = ex33_doc()
        doc["payoffs"][0].append(1)
        assert "36" in reject(doc)

    def test_order(self):
        doc = ex33_doc()
        doc["order"] = "lex-amt"
        assert "order" in reject(doc)

    def test_missing_field(self):
        doc = ex33_doc()
        del doc["prior"]
        assert "prior" in reject(doc)

    def test_action_out_of_range(self):
        doc = ex33_doc()
        doc["admissible"][0][0] = [1, 4]
        reject(doc)

    def test_malformed(self):
        with pytest.raises(ParseError):
            parse_game("{\"players\": 2,")
        with pytest.raises(ParseError):
            parse_game("[1, 2, 3]")


class TestRoundTrip:
    def test_fixtures(self):
        for name in ("example33", "example45", "example54", "example71"):
            g = load_game(FIXTURES / f"{name}.game")
            h = parse_game(dump_game(g))
            assert_array_equal(h.payoffs, g.payoffs)
            assert_allclose(h.prior, g.prior, rtol=0, atol=1e-15)
            assert h.admissible == g.admissible

    def test_one_field_per_line(self):
        text = dump_game(load_game(FIXTURES / "example71.game"))
        lines = text.splitlines()
        assert lines[0] == "{" and lines[-1] == "}"
        assert [ln.split(":")[0].strip() for ln in lines[1:-1]] == [
            '"order"', '"players"', '"types"', '"actions"', '"admissible"', '"prior"', '"payoffs"']

    @settings(max_examples=40, deadline=None)
    @given(small, small, st.booleans(), seeds)
    def test_random(self, tc, ac, ragged, seed):
        n = min(len(tc), len(ac))
        g = random_game(np.random.default_rng(seed), tuple(tc[:n]), tuple(ac[:n]), ragged)
        h = parse_game(dump_game(g))
        assert_array_equal(h.payoffs, g.payoffs)
        assert_allclose(h.prior, g.prior, rtol=0, atol=1e-15)
        assert h.admissible == g.admissible
