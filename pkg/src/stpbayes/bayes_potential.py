"""Potential-game tests for Bayesian games.

Five notions are supported:

* ``tn``: every complete-information type game is potential;
* ``th``: one ``F(a, t)`` absorbs joint deviations in ``(t_i, a_i)``;
* ``harsanyi`` / ``selten``: the corresponding converted game is potential;
* ``at``: the Action-Type game is potential, tested through the deletion
  operators ``varphi_i`` over the ``(t, a)`` space.

Games with ``-inf`` cells are tested on their finite product box only.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import Sequence

import numpy as np

from .bayesian import BayesianGame, belief, belief_matrix
from .conversions import (
    ConvertedGame,
    type_swap,
    at_convert,
    at_lift,
    harsanyi_convert,
    selten_convert,
    strategy_to_ta,
    ta_to_strategy,
)
from .errors import InfinitePayoff, NotApplicable, ValidationError
from .extreal import NEG_INF
from .normal_game import NormalGame, finite_box, restrict
from .potential import solve_linear_potential, solve_potential, stack_potential_matrix, verify_potential
from .stp import delta, khatri_rao, stp

NOTIONS = ("tn", "th", "harsanyi", "selten", "at")


@dataclass(frozen=True, eq=False)
class BayesPotentialReport:
    """Outcome of a potential test.

    ``potential_vector`` is indexed like the notion's payoff space: ``(t, a)``
    for ``tn``/``th``/``at``, ``a`` for ``harsanyi``/``selten``. Cells outside
    the tested box hold ``-inf``.
    """

    notion: str
    is_potential: bool
    potential_vector: np.ndarray | None
    residual: float
    type_profile: tuple[int, ...] | None = None
    per_type: dict = field(default_factory=dict)


def deletion_operator(i: int, type_cards: Sequence[int], action_cards: Sequence[int]) -> np.ndarray:
    """``varphi_i = I_θ ⊗ 1ᵀ_{τ_i} ⊗ I_ϑ ⊗ 1ᵀ_{r_i} ⊗ I_ρ`` over ``(t, a)``.

    ``θ = Π_{j<i} τ_j``, ``ϑ = Π_{j>i} τ_j · Π_{l<i} r_l``, ``ρ = Π_{l>i} r_l``.
    A row ``ξ`` over ``(t_{-i}, a_{-i})`` spreads to ``ξ varphi_i`` over ``(t, a)``.
    """
    tc, ac = list(type_cards), list(action_cards)
    theta = prod(tc[: i - 1])
    vartheta = prod(tc[i:]) * prod(ac[: i - 1])
    rho = prod(ac[i:])
    out = np.eye(theta)
    for m in (np.ones((1, tc[i - 1])), np.eye(vartheta), np.ones((1, ac[i - 1])), np.eye(rho)):
        out = np.kron(out, m)
    return out


def at_potential_system(type_cards: Sequence[int], action_cards: Sequence[int]) -> np.ndarray:
    """``Ψ^{AT}`` with block row ``i-1 = [-varphi_1ᵀ, ..., varphi_iᵀ, ...]``."""
    faces = [deletion_operator(i, type_cards, action_cards) for i in range(1, len(type_cards) + 1)]
    return stack_potential_matrix(faces)


def _solve_ta(rows: np.ndarray, type_cards, action_cards):
    """Solve the ``(t, a)``-space potential equation for finite rows."""
    faces = [deletion_operator(i, type_cards, action_cards) for i in range(1, len(type_cards) + 1)]
    psi = stack_potential_matrix(faces)
    b = (rows[1:] - rows[0]).reshape(-1, 1)
    return solve_linear_potential(psi, b, faces[0], rows[0])


def _boxed(game: NormalGame):
    box = finite_box(game)
    if box is None:
        raise NotApplicable("the finite payoff region is empty or not a product of strategy sets")
    return box, restrict(game, box)


def _embed(values, box, cards) -> np.ndarray:
    out = np.full(cards, NEG_INF)
    out[np.ix_(*[np.asarray(s) - 1 for s in box])] = np.asarray(values).reshape([len(s) for s in box])
    return out.reshape(-1)


def _normal_report(notion, game: NormalGame, type_profile=None) -> BayesPotentialReport:
    box, sub = _boxed(game)
    res = solve_potential(sub)
    vec = _embed(res.potential_vector, box, game.cardinalities) if res.is_potential else None
    return BayesPotentialReport(notion, res.is_potential, vec, res.residual, type_profile)


def tn_potential(g: BayesianGame) -> BayesPotentialReport:
    """Every type game, restricted to its admissible actions, is potential."""
    out = np.full(g.tau * g.r, NEG_INF)
    per_type = {}
    ok, worst = True, 0.0
    for k, t in enumerate(g.type_space):
        box = [sorted(g.admissible[i][t[i] - 1]) for i in range(g.n)]
        game = g.type_game(t)
        res = solve_potential(restrict(game, box))
        worst = max(worst, res.residual)
        if not res.is_potential:
            ok = False
            per_type[t] = None
            continue
        block = _embed(res.potential_vector, box, g.action_cards)
        per_type[t] = block
        out[k * g.r : (k + 1) * g.r] = block
    return BayesPotentialReport("tn", ok, out if ok else None, worst, None, per_type)


def th_potential(g: BayesianGame) -> BayesPotentialReport:
    """One ``F(a, t)`` matching every joint deviation in ``(t_i, a_i)``."""
    if not g.fully_admissible():
        raise InfinitePayoff("the TH potential test needs a fully admissible game")
    res = _solve_ta(np.asarray(g.payoffs), g.type_cards, g.action_cards)
    return BayesPotentialReport("th", res.is_potential, res.potential_vector, res.residual)


def harsanyi_potential(g: BayesianGame) -> BayesPotentialReport:
    return _normal_report("harsanyi", harsanyi_convert(g).game)


def selten_potential(g: BayesianGame, type_profile: Sequence[int]) -> BayesPotentialReport:
    cg = selten_convert(g, type_profile)
    return _normal_report("selten", cg.game, cg.type_profile)


def at_potential(g: BayesianGame) -> BayesPotentialReport:
    cg = at_convert(g)
    lifted = np.vstack([at_lift(cg, i) for i in range(1, g.n + 1)])
    if np.isfinite(lifted).all():
        res = _solve_ta(lifted, g.type_cards, g.action_cards)
        return BayesPotentialReport("at", res.is_potential, res.potential_vector, res.residual)
    # ragged support: solve on the strategy game's finite box, then reorder
    rep = _normal_report("at", cg.game)
    vec = rep.potential_vector
    if vec is not None:
        vec = strategy_to_ta(vec, g.type_cards, g.action_cards)
    return BayesPotentialReport("at", rep.is_potential, vec, rep.residual)


def selten_operator(g: BayesianGame, i: int, j: int) -> np.ndarray:
    """``Γ`` of shape ``(τ r, r)`` with ``V_i^S = V_i Γ`` when ``t̄_i = j``."""
    return stp(np.eye(g.tau * g.r), type_swap(g, i).to_dense(),
               delta(g.type_cards[i - 1], j), belief(g, i, j))


def at_operator(g: BayesianGame, i: int) -> np.ndarray:
    """``Γ^{AT}_i`` of shape ``(τ r, τ_i r)`` with ``V_i^{AT} = V_i Γ^{AT}_i``."""
    sel = khatri_rao(np.eye(g.type_cards[i - 1]), belief_matrix(g, i))
    return stp(np.eye(g.tau * g.r), type_swap(g, i).to_dense(), sel)


def _check_boxed(game: NormalGame, q, tol) -> bool:
    q = np.asarray(q, dtype=float).reshape(-1)
    if q.size != game.kappa:
        return False
    box, sub = _boxed(game)
    sel = np.ix_(*[np.asarray(s) - 1 for s in box])
    return verify_potential(sub, q.reshape(game.cardinalities)[sel].reshape(-1), tol)


def verify_bayes_potential(
    g: BayesianGame,
    notion: str,
    q_vec,
    type_profile: Sequence[int] | None = None,
    tol: float = 1e-9,
) -> bool:
    """Exhaustively check the defining difference identity of ``notion``.

    ``q_vec`` is indexed by ``(t, a)`` for ``tn``/``th``/``at`` and by ``a``
    for ``harsanyi``/``selten``; only cells inside the admissible box are read.
    """
    q = np.asarray(q_vec, dtype=float).reshape(-1)
    if notion == "tn":
        if q.size != g.tau * g.r:
            return False
        for k, t in enumerate(g.type_space):
            block = q[k * g.r : (k + 1) * g.r]
            if not _check_boxed(g.type_game(t), block, tol):
                return False
        return True
    if notion == "th":
        if not g.fully_admissible():
            raise InfinitePayoff("the TH potential test needs a fully admissible game")
        cards = tuple(t * r for t, r in zip(g.type_cards, g.action_cards))
        rows = np.vstack([ta_to_strategy(v, g.type_cards, g.action_cards) for v in g.payoffs])
        if q.size != g.tau * g.r:
            return False
        return verify_potential(NormalGame(cards, rows),
                                ta_to_strategy(q, g.type_cards, g.action_cards), tol)
    if notion == "harsanyi":
        return _check_boxed(harsanyi_convert(g).game, q, tol)
    if notion == "selten":
        if type_profile is None:
            raise ValidationError("the selten notion needs a type profile")
        return _check_boxed(selten_convert(g, type_profile).game, q, tol)
    if notion == "at":
        if q.size != g.tau * g.r:
            return False
        cg: ConvertedGame = at_convert(g)
        return _check_boxed(cg.game, ta_to_strategy(q, g.type_cards, g.action_cards), tol)
    raise ValidationError(f"unknown notion {notion!r}; expected one of {NOTIONS}")


def bayes_potential(g: BayesianGame, notion: str, type_profile=None) -> BayesPotentialReport:
    """Dispatch on ``notion``."""
    if notion == "tn":
        return tn_potential(g)
    if notion == "th":
        return th_potential(g)
    if notion == "harsanyi":
        return harsanyi_potential(g)
    if notion == "selten":
        if type_profile is None:
            raise ValidationError("the selten notion needs a type profile")
        return selten_potential(g, type_profile)
    if notion == "at":
        return at_potential(g)
    raise ValidationError(f"unknown notion {notion!r}; expected one of {NOTIONS}")
