"""Harsanyi, Selten and Action-Type conversions to complete-information games.

All three are computed as semi-tensor products of the padded payoff rows
with swap matrices, type selectors and belief matrices. ``0 · -inf = 0``
throughout, so cells only reachable under zero-probability types vanish.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import prod
from typing import Sequence

import numpy as np

from .bayesian import BayesianGame, belief, belief_matrix
from .errors import IndexOutOfRange
from .extreal import ext_stp
from .normal_game import NormalGame, pure_nash
from .stp import delta, khatri_rao, kron, swap_matrix

KINDS = ("harsanyi", "selten", "at")


@dataclass(frozen=True, eq=False)
class ConvertedGame:
    """Result of a conversion.

    ``vectors[i]`` has length ``r`` for Harsanyi/Selten and ``τ_i · r``
    (indexed ``(t_i, a)``) for Action-Type. ``game`` is the complete-information
    game: over ``action_cards`` for Harsanyi/Selten, and over
    ``(τ_i · r_i)`` strategies ``(t_i, a_i)`` (type-major) for Action-Type.
    """

    kind: str
    vectors: tuple[np.ndarray, ...]
    type_cards: tuple[int, ...]
    action_cards: tuple[int, ...]
    type_profile: tuple[int, ...] | None = None

    @property
    def n(self) -> int:
        return len(self.action_cards)

    @cached_property
    def game(self) -> NormalGame:
        if self.kind != "at":
            return NormalGame(self.action_cards, np.vstack(self.vectors))
        rows = [ta_to_strategy(at_lift(self, i), self.type_cards, self.action_cards)
                for i in range(1, self.n + 1)]
        cards = tuple(t * r for t, r in zip(self.type_cards, self.action_cards))
        return NormalGame(cards, np.vstack(rows))

    def payoff_tensor(self, i: int) -> np.ndarray:
        """Player ``i``'s payoff as an array: over ``a`` (Harsanyi/Selten) or
        over ``(t_i, a_1, ..., a_n)`` (Action-Type)."""
        if not 1 <= i <= self.n:
            raise IndexOutOfRange(f"player {i} outside 1..{self.n}")
        v = self.vectors[i - 1]
        if self.kind == "at":
            return v.reshape((self.type_cards[i - 1],) + self.action_cards)
        return v.reshape(self.action_cards)


def ta_to_strategy(row, type_cards, action_cards) -> np.ndarray:
    """Reorder a row over ``(t_1..t_n, a_1..a_n)`` to ``(t_1, a_1, ..., t_n, a_n)``."""
    n = len(type_cards)
    t = np.asarray(row, dtype=float).reshape(tuple(type_cards) + tuple(action_cards))
    axes = [ax for i in range(n) for ax in (i, n + i)]
    return t.transpose(axes).reshape(-1)


def strategy_to_ta(row, type_cards, action_cards) -> np.ndarray:
    """Inverse of :func:`ta_to_strategy`."""
    n = len(type_cards)
    shape = [d for i in range(n) for d in (type_cards[i], action_cards[i])]
    t = np.asarray(row, dtype=float).reshape(shape)
    axes = [2 * i for i in range(n)] + [2 * i + 1 for i in range(n)]
    return t.transpose(axes).reshape(-1)


def type_swap(g: BayesianGame, i: int):
    """``W_[τ_i, Π_{k<i} τ_k]``: brings ``t_i`` to the front of the type block."""
    return swap_matrix(g.type_cards[i - 1], prod(g.type_cards[: i - 1]))


def harsanyi_convert(g: BayesianGame) -> ConvertedGame:
    p = g.prior.reshape(-1, 1)
    rows = tuple(ext_stp(g.payoffs[i], p).reshape(-1) for i in range(g.n))
    return ConvertedGame("harsanyi", rows, g.type_cards, g.action_cards)


def selten_convert(g: BayesianGame, type_profile: Sequence[int]) -> ConvertedGame:
    tp = tuple(int(x) for x in type_profile)
    if len(tp) != g.n:
        raise IndexOutOfRange(f"type profile needs {g.n} entries")
    rows = []
    for i in range(1, g.n + 1):
        v = ext_stp(g.payoffs[i - 1], type_swap(g, i).to_dense())
        v = ext_stp(v, delta(g.type_cards[i - 1], tp[i - 1]))
        v = ext_stp(v, belief(g, i, tp[i - 1]))
        rows.append(v.reshape(-1))
    return ConvertedGame("selten", tuple(rows), g.type_cards, g.action_cards, tp)


def at_convert(g: BayesianGame) -> ConvertedGame:
    rows = []
    for i in range(1, g.n + 1):
        sel = khatri_rao(np.eye(g.type_cards[i - 1]), belief_matrix(g, i))
        v = ext_stp(g.payoffs[i - 1], type_swap(g, i).to_dense())
        rows.append(ext_stp(v, sel).reshape(-1))
    return ConvertedGame("at", tuple(rows), g.type_cards, g.action_cards)


def type_selector(i: int, type_cards: Sequence[int]) -> np.ndarray:
    """``φ_i = γ_1 ⊗ ... ⊗ γ_n`` with ``γ_i = I_{τ_i}`` and ``γ_j = 1ᵀ_{τ_j}``.

    Shape ``(τ_i, τ)``; ``φ_i ⋉ t = t_i``.
    """
    out = np.ones((1, 1))
    for j, tj in enumerate(type_cards, start=1):
        out = np.kron(out, np.eye(tj) if j == i else np.ones((1, tj)))
    return out


def at_lift(cg: ConvertedGame, i: int) -> np.ndarray:
    """Spread ``V_i^{AT}`` over the full ``(t, a)`` space (constant in ``t_{-i}``)."""
    if cg.kind != "at":
        raise ValueError("at_lift needs an Action-Type converted game")
    if not 1 <= i <= cg.n:
        raise IndexOutOfRange(f"player {i} outside 1..{cg.n}")
    lift = kron(type_selector(i, cg.type_cards), np.eye(prod(cg.action_cards)))
    return ext_stp(cg.vectors[i - 1], lift).reshape(-1)


def h_bne(g: BayesianGame) -> set[tuple[int, ...]]:
    return pure_nash(harsanyi_convert(g).game)


def s_bne(g: BayesianGame, type_profile: Sequence[int]) -> set[tuple[int, ...]]:
    return pure_nash(selten_convert(g, type_profile).game)


def at_bne(g: BayesianGame) -> set[tuple[tuple[int, int], ...]]:
    """Equilibria of the Action-Type game as ``((t_1, a_1), ..., (t_n, a_n))``."""
    cg = at_convert(g)
    return {
        tuple(((s - 1) // r + 1, (s - 1) % r + 1) for s, r in zip(prof, g.action_cards))
        for prof in pure_nash(cg.game)
    }
