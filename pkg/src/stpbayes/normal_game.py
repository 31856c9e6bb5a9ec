"""Finite normal-form games in structure-vector form.

Payoffs are extended reals: ``-inf`` marks an inadmissible profile. Players,
strategies and profiles are 1-based throughout.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Sequence

import numpy as np

from .errors import IndexOutOfRange, InfinitePayoff
from .extreal import check_ext
from .stp import ProfileSpace, profile_index

#: Two payoffs closer than this (relative to max(1, |best|)) count as tied.
TIE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class NormalGame:
    """``n`` players with strategy counts ``cardinalities`` and payoff rows.

    ``payoffs[i - 1]`` is the structure vector ``V_i^c`` of length
    ``κ = Π k_i`` in lexicographic profile order.
    """

    cardinalities: tuple[int, ...]
    payoffs: np.ndarray

    def __post_init__(self):
        cards = tuple(int(k) for k in self.cardinalities)
        if not cards or min(cards) < 1:
            raise ValueError("need at least one player and one strategy each")
        v = check_ext(self.payoffs).copy()
        if v.ndim == 1:
            v = v.reshape(1, -1)
        if v.shape != (len(cards), prod(cards)):
            raise ValueError(
                f"payoffs must have shape {(len(cards), prod(cards))}, got {v.shape}"
            )
        v.setflags(write=False)
        object.__setattr__(self, "cardinalities", cards)
        object.__setattr__(self, "payoffs", v)

    @property
    def n(self) -> int:
        return len(self.cardinalities)

    @property
    def kappa(self) -> int:
        return prod(self.cardinalities)

    @property
    def space(self) -> ProfileSpace:
        return ProfileSpace(self.cardinalities)

    def tensor(self, i: int) -> np.ndarray:
        """Payoff of player ``i`` as an array of shape ``cardinalities``."""
        self._check_player(i)
        return self.payoffs[i - 1].reshape(self.cardinalities)

    def is_finite(self) -> bool:
        return bool(np.isfinite(self.payoffs).all())

    def shifted(self, row) -> NormalGame:
        """Add one common row to every player's payoff vector."""
        return NormalGame(self.cardinalities, self.payoffs + np.asarray(row, dtype=float))

    def _check_player(self, i: int):
        if not 1 <= i <= self.n:
            raise IndexOutOfRange(f"player {i} outside 1..{self.n}")


def payoff(g: NormalGame, i: int, profile: Sequence[int]) -> float:
    g._check_player(i)
    return float(g.payoffs[i - 1, profile_index(profile, g.space) - 1])


def _ties(values: np.ndarray) -> np.ndarray:
    """Boolean mask of the maximisers of ``values`` (all-False if all -inf)."""
    best = values.max()
    if np.isneginf(best):
        return np.zeros(values.shape, dtype=bool)
    return values >= best - TIE_TOL * max(1.0, abs(best))


def best_responses(g: NormalGame, i: int, opponents: Sequence[int]) -> frozenset[int]:
    """Strategies of player ``i`` maximising its payoff against ``opponents``.

    ``opponents`` lists the strategies of players ``j != i`` in player order.
    """
    g._check_player(i)
    if len(opponents) != g.n - 1:
        raise IndexOutOfRange(f"expected {g.n - 1} opponent strategies, got {len(opponents)}")
    others = [k for j, k in enumerate(g.cardinalities, start=1) if j != i]
    for s, k in zip(opponents, others):
        if not 1 <= s <= k:
            raise IndexOutOfRange(f"opponent strategy {s} outside 1..{k}")
    index = list(s - 1 for s in opponents)
    index.insert(i - 1, slice(None))
    column = g.tensor(i)[tuple(index)]
    return frozenset(int(s) + 1 for s in np.flatnonzero(_ties(column)))


def best_response_mask(g: NormalGame, i: int) -> np.ndarray:
    """Tensor mask: ``True`` where player ``i`` plays a best response."""
    t = g.tensor(i)
    best = t.max(axis=i - 1, keepdims=True)
    tol = TIE_TOL * np.maximum(1.0, np.abs(np.where(np.isfinite(best), best, 0.0)))
    return np.isfinite(t) & (t >= best - tol)


def pure_nash(g: NormalGame) -> set[tuple[int, ...]]:
    """All pure Nash equilibria with finite payoff for every player."""
    mask = np.ones(g.cardinalities, dtype=bool)
    for i in range(1, g.n + 1):
        mask &= best_response_mask(g, i)
    return {tuple(int(x) + 1 for x in idx) for idx in zip(*np.nonzero(mask))}


def equivalent_vector_form(g: NormalGame) -> np.ndarray:
    """``W_G = [V_2 - V_1, ..., V_n - V_1]`` as a single row."""
    if not g.is_finite():
        raise InfinitePayoff("equivalent vector form needs finite payoffs")
    v = g.payoffs
    return (v[1:] - v[0]).reshape(1, -1)


def restrict(g: NormalGame, strategy_sets: Sequence[Sequence[int]]) -> NormalGame:
    """Subgame keeping only the listed (1-based, sorted) strategies of each player."""
    if len(strategy_sets) != g.n:
        raise IndexOutOfRange("one strategy set per player is required")
    sel = [np.asarray(sorted(s), dtype=int) - 1 for s in strategy_sets]
    for s, k in zip(sel, g.cardinalities):
        if s.size == 0 or s.min() < 0 or s.max() >= k:
            raise IndexOutOfRange(f"strategy set {list(s + 1)} invalid for {k} strategies")
    grid = np.ix_(*sel)
    rows = [g.tensor(i)[grid].reshape(-1) for i in range(1, g.n + 1)]
    return NormalGame(tuple(len(s) for s in sel), np.vstack(rows))


def finite_box(g: NormalGame) -> list[list[int]] | None:
    """Strategy sets whose product is exactly where all payoffs are finite.

    Returns ``None`` when the finite region is empty or is not a product set.
    """
    mask = np.isfinite(g.payoffs).all(axis=0).reshape(g.cardinalities)
    if not mask.any():
        return None
    sets = []
    for ax in range(g.n):
        other = tuple(a for a in range(g.n) if a != ax)
        sets.append(np.flatnonzero(mask.any(axis=other)))
    box = np.zeros_like(mask)
    box[np.ix_(*sets)] = True
    if not np.array_equal(box, mask):
        return None
    return [[int(x) + 1 for x in s] for s in sets]
