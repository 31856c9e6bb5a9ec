"""Static Bayesian games with type-dependent admissible actions.

Payoff rows are indexed by ``(t, a)`` with the type profile most significant,
i.e. ``c̄_i(a, t) = V_i ⋉ t ⋉ a``. Inadmissible cells hold ``-inf``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import prod
from typing import Mapping, Sequence

import numpy as np

from .errors import BadPrior, IndexOutOfRange, MissingEntry, ValidationError, ZeroProbabilityType
from .extreal import NEG_INF, check_ext, ext_weighted_sum
from .normal_game import NormalGame, pure_nash
from .stp import ProfileSpace, profile_index

PRIOR_TOL = 1e-9

#: σ[i][j - 1] is the action of player ``i + 1`` when its type is ``j``.
TypeStrategy = tuple[tuple[int, ...], ...]


@dataclass(frozen=True, eq=False)
class BayesianGame:
    type_cards: tuple[int, ...]
    action_cards: tuple[int, ...]
    admissible: tuple[tuple[frozenset[int], ...], ...]
    payoffs: np.ndarray
    prior: np.ndarray

    def __post_init__(self):
        tc = tuple(int(x) for x in self.type_cards)
        ac = tuple(int(x) for x in self.action_cards)
        if len(tc) != len(ac) or not tc or min(tc + ac) < 1:
            raise ValidationError("type_cards and action_cards must be positive, one per player")
        n = len(tc)
        adm = tuple(tuple(frozenset(int(a) for a in s) for s in per) for per in self.admissible)
        if len(adm) != n:
            raise ValidationError(f"admissible: expected {n} players, got {len(adm)}")
        for i, per in enumerate(adm, start=1):
            if len(per) != tc[i - 1]:
                raise ValidationError(f"admissible[{i}]: expected {tc[i - 1]} types, got {len(per)}")
            for j, s in enumerate(per, start=1):
                if not s:
                    raise ValidationError(f"admissible[{i}][{j}] is empty")
                if min(s) < 1 or max(s) > ac[i - 1]:
                    raise ValidationError(f"admissible[{i}][{j}] has actions outside 1..{ac[i - 1]}")
        tau, r = prod(tc), prod(ac)
        v = check_ext(self.payoffs).copy()
        if v.shape != (n, tau * r):
            raise ValidationError(f"payoffs must have shape {(n, tau * r)}, got {v.shape}")
        prior = np.asarray(self.prior, dtype=float).reshape(-1).copy()
        if prior.size != tau:
            raise BadPrior(f"prior must have {tau} entries, got {prior.size}")
        if not np.isfinite(prior).all() or (prior < 0).any():
            raise BadPrior("prior entries must be finite and nonnegative")
        if abs(prior.sum() - 1.0) > PRIOR_TOL:
            raise BadPrior(f"prior sums to {prior.sum():.12g}, not 1")
        prior /= prior.sum()
        mask = _admissible_mask(tc, ac, adm).reshape(-1)
        finite = np.isfinite(v)
        for i in range(n):
            wrong = np.flatnonzero(finite[i] != mask)
            if wrong.size:
                k = int(wrong[0]) + 1
                t, a = _split(k, tc, ac)
                what = "finite but inadmissible" if finite[i, k - 1] else "-inf but admissible"
                raise ValidationError(f"payoffs[{i + 1}] at t={t}, a={a} is {what}")
        v.setflags(write=False)
        prior.setflags(write=False)
        for name, val in (("type_cards", tc), ("action_cards", ac), ("admissible", adm),
                          ("payoffs", v), ("prior", prior)):
            object.__setattr__(self, name, val)

    @property
    def n(self) -> int:
        return len(self.type_cards)

    @property
    def tau(self) -> int:
        return prod(self.type_cards)

    @property
    def r(self) -> int:
        return prod(self.action_cards)

    @property
    def type_space(self) -> ProfileSpace:
        return ProfileSpace(self.type_cards)

    @property
    def action_space(self) -> ProfileSpace:
        return ProfileSpace(self.action_cards)

    @property
    def joint_space(self) -> ProfileSpace:
        """``(t_1..t_n, a_1..a_n)`` space matching the payoff row order."""
        return ProfileSpace(self.type_cards + self.action_cards)

    def tensor(self, i: int) -> np.ndarray:
        """Payoff of player ``i`` with shape ``type_cards + action_cards``."""
        self._check_player(i)
        return self.payoffs[i - 1].reshape(self.type_cards + self.action_cards)

    def prior_tensor(self) -> np.ndarray:
        return self.prior.reshape(self.type_cards)

    def admissible_mask(self) -> np.ndarray:
        return _admissible_mask(self.type_cards, self.action_cards, self.admissible)

    def fully_admissible(self) -> bool:
        return bool(np.isfinite(self.payoffs).all())

    def type_game(self, t: Sequence[int]) -> NormalGame:
        """Complete-information game of type profile ``t`` (inadmissible cells -inf)."""
        k = profile_index(t, self.type_space) - 1
        block = self.payoffs[:, k * self.r : (k + 1) * self.r]
        return NormalGame(self.action_cards, block)

    def _check_player(self, i: int):
        if not 1 <= i <= self.n:
            raise IndexOutOfRange(f"player {i} outside 1..{self.n}")


def _admissible_mask(tc, ac, adm) -> np.ndarray:
    n = len(tc)
    mask = np.ones(tuple(tc) + tuple(ac), dtype=bool)
    for i in range(n):
        m = np.zeros((tc[i], ac[i]), dtype=bool)
        for j, s in enumerate(adm[i]):
            m[j, [a - 1 for a in s]] = True
        shape = [1] * (2 * n)
        shape[i] = tc[i]
        shape[n + i] = ac[i]
        mask &= m.reshape(shape)
    return mask


def _split(k: int, tc, ac) -> tuple[tuple[int, ...], tuple[int, ...]]:
    full = ProfileSpace(tuple(tc) + tuple(ac)).unindex(k)
    return full[: len(tc)], full[len(tc):]


def from_vectors(type_cards, action_cards, payoffs, prior, admissible=None) -> BayesianGame:
    """Build a game from structure vectors.

    With ``admissible=None`` admissibility is read off the ``-inf`` pattern,
    which must then factor into per-player, per-type action sets.
    """
    tc, ac = tuple(type_cards), tuple(action_cards)
    v = check_ext(payoffs)
    if admissible is None:
        n = len(tc)
        finite = np.isfinite(v).all(axis=0).reshape(tc + ac)
        admissible = []
        for i in range(n):
            per = []
            for j in range(tc[i]):
                sl = np.take(np.take(finite, j, axis=i), range(ac[i]), axis=n - 1 + i)
                other = tuple(ax for ax in range(sl.ndim) if ax != n - 1 + i)
                per.append({a + 1 for a in np.flatnonzero(sl.any(axis=other))})
            admissible.append(per)
    return BayesianGame(tc, ac, admissible, v, prior)


def assemble(
    per_type_tables: Mapping[tuple[int, ...], Mapping[tuple[int, ...], Sequence[float]]],
    prior,
    admissible: Sequence[Sequence[Sequence[int]]],
    action_cards: Sequence[int],
) -> BayesianGame:
    """Pad per-type payoff tables with ``-inf`` into structure vectors.

    ``per_type_tables[t][a]`` gives ``(c_1, ..., c_n)`` at type profile ``t``
    and action profile ``a`` (both 1-based). Every admissible ``a`` must be
    present; entries for inadmissible ``a`` are ignored.
    """
    tc = tuple(len(per) for per in admissible)
    ac = tuple(int(x) for x in action_cards)
    n = len(tc)
    tau, r = prod(tc), prod(ac)
    v = np.full((n, tau * r), NEG_INF)
    tspace, aspace = ProfileSpace(tc), ProfileSpace(ac)
    for t in tspace:
        table = per_type_tables.get(t, {})
        allowed = [sorted(admissible[i][t[i] - 1]) for i in range(n)]
        for a in itertools.product(*allowed):
            if a not in table:
                raise MissingEntry(f"no payoff for type profile {t}, action profile {a}")
            vals = table[a]
            if len(vals) != n:
                raise MissingEntry(f"payoff at t={t}, a={a} needs {n} values")
            k = (profile_index(t, tspace) - 1) * r + profile_index(a, aspace) - 1
            v[:, k] = vals
    return BayesianGame(tc, ac, admissible, v, prior)


def marginal_prior(g: BayesianGame, i: int) -> np.ndarray:
    g._check_player(i)
    other = tuple(ax for ax in range(g.n) if ax != i - 1)
    return g.prior_tensor().sum(axis=other)


def _conditional(g: BayesianGame, i: int) -> np.ndarray:
    """Array ``P[j, t_{-i}]`` of beliefs, raising on zero-probability types."""
    pt = np.moveaxis(g.prior_tensor(), i - 1, 0).reshape(g.type_cards[i - 1], -1)
    marg = pt.sum(axis=1)
    zero = np.flatnonzero(marg <= 0)
    if zero.size:
        raise ZeroProbabilityType(f"type {int(zero[0]) + 1} of player {i} has zero probability")
    return pt / marg[:, None]


def belief(g: BayesianGame, i: int, j: int) -> np.ndarray:
    """``p_i(· | t_i^j)`` as a column over lexicographic ``t_{-i}``."""
    g._check_player(i)
    if not 1 <= j <= g.type_cards[i - 1]:
        raise IndexOutOfRange(f"type {j} outside 1..{g.type_cards[i - 1]}")
    pt = np.moveaxis(g.prior_tensor(), i - 1, 0).reshape(g.type_cards[i - 1], -1)
    total = pt[j - 1].sum()
    if total <= 0:
        raise ZeroProbabilityType(f"type {j} of player {i} has zero probability")
    return (pt[j - 1] / total).reshape(-1, 1)


def belief_matrix(g: BayesianGame, i: int) -> np.ndarray:
    """``p_i = [p_i(t_i^1), ..., p_i(t_i^{τ_i})]``, shape ``(τ/τ_i, τ_i)``."""
    g._check_player(i)
    return _conditional(g, i).T


def expected_payoff_tn(g: BayesianGame, i: int, a: Sequence[int]) -> float:
    """Ex-ante expectation ``Σ_t Pr(t) c̄_i(a, t)``."""
    g._check_player(i)
    k = profile_index(a, g.action_space) - 1
    column = g.payoffs[i - 1].reshape(g.tau, g.r)[:, k]
    return float(ext_weighted_sum(column, g.prior))


def expected_payoff_th(g: BayesianGame, i: int, a: Sequence[int], j: int) -> float:
    """Interim expectation of player ``i`` of type ``j`` at action profile ``a``."""
    p = belief(g, i, j).ravel()
    idx = [slice(None)] * g.n + [x - 1 for x in a]
    idx[i - 1] = j - 1
    cell = g.tensor(i)[tuple(idx)].reshape(-1)
    return float(ext_weighted_sum(cell, p))


def type_strategies(g: BayesianGame, i: int) -> list[tuple[int, ...]]:
    """All admissible maps ``σ_i : types -> actions`` of player ``i``."""
    return list(itertools.product(*(sorted(s) for s in g.admissible[i - 1])))


def interim_bne(g: BayesianGame) -> set[TypeStrategy]:
    """Pure Bayesian-Nash equilibria in type-contingent strategies.

    ``σ`` is returned iff every type of every player best-responds, under its
    beliefs, to the opponents' type-contingent actions.
    """
    beliefs = [_conditional(g, i) for i in range(1, g.n + 1)]
    choices = [type_strategies(g, i) for i in range(1, g.n + 1)]
    out = set()
    for sigma in itertools.product(*choices):
        if all(_types_best_respond(g, i, sigma, beliefs[i - 1]) for i in range(1, g.n + 1)):
            out.add(tuple(sigma))
    return out


def _types_best_respond(g: BayesianGame, i: int, sigma, cond) -> bool:
    tens = g.tensor(i)
    n = g.n
    others = [k for k in range(n) if k != i - 1]
    other_types = list(itertools.product(*(range(g.type_cards[k]) for k in others)))
    for j in range(g.type_cards[i - 1]):
        values = np.zeros(g.action_cards[i - 1])
        for col, tm in enumerate(other_types):
            w = cond[j, col]
            t = [0] * n
            a = [0] * n
            t[i - 1] = j
            for k, tk in zip(others, tm):
                t[k] = tk
                a[k] = sigma[k][tk] - 1
            idx = tuple(t) + tuple(a[:i - 1]) + (slice(None),) + tuple(a[i:])
            if w != 0:
                values = values + w * tens[idx]
        allowed = np.array(sorted(g.admissible[i - 1][j])) - 1
        chosen = sigma[i - 1][j] - 1
        best = values[allowed].max()
        if values[chosen] < best - 1e-9 * max(1.0, abs(best)):
            return False
    return True


def complete_information_nash(g: BayesianGame, t: Sequence[int]) -> set[tuple[int, ...]]:
    return pure_nash(g.type_game(t))
