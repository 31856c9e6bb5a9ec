"""Strategy-updating dynamics on converted Bayesian games.

States are action profiles (Selten conversion) or joint type-action profiles
ordered ``(t_1, ..., t_n, a_1, ..., a_n)`` (Action-Type conversion). A
transition matrix is column-stochastic: column ``j`` is the law of the next
state given current state ``j`` (both 1-based in the public API).
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from math import prod
from typing import Sequence

import numpy as np
from scipy.sparse.csgraph import connected_components

from .conversions import ConvertedGame, at_lift
from .errors import DimensionMismatch, InfeasibleUpdate, ValidationError
from .normal_game import TIE_TOL
from .stp import LogicalMatrix, ProfileSpace, khatri_rao

CONVERSIONS = ("selten", "at-concurrent", "at-separate")
RULES = ("mbra", "logit")
MODES = ("sync", "rr", "uniform")
TIE_BREAKS = ("lowest", "uniform")

COLUMN_TOL = 1e-12


@dataclass(frozen=True)
class SurConfig:
    """Strategy updating rule.

    ``order`` is the player order for round-robin updates (default 1..n).
    With ``at-separate`` each player's turn is an action move followed by a
    type move; ``uniform`` mode picks each of them with equal probability.
    """

    conversion: str = "selten"
    rule: str = "mbra"
    lam: float = 1.0
    mode: str = "sync"
    order: tuple[int, ...] | None = None
    tie_break: str = "lowest"
    seed: int = 0

    def __post_init__(self):
        for name, value, allowed in (
            ("conversion", self.conversion, CONVERSIONS),
            ("rule", self.rule, RULES),
            ("mode", self.mode, MODES),
            ("tie_break", self.tie_break, TIE_BREAKS),
        ):
            if value not in allowed:
                raise ValidationError(f"{name} must be one of {allowed}, got {value!r}")
        if not np.isfinite(self.lam) or self.lam < 0:
            raise ValidationError(f"lambda must be a nonnegative real, got {self.lam}")
        if self.conversion == "at-separate" and self.mode == "sync":
            raise ValidationError("separate type/action moves are only defined asynchronously")
        if self.order is not None:
            object.__setattr__(self, "order", tuple(int(i) for i in self.order))


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    matrix: np.ndarray
    space: ProfileSpace

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] != self.space.total:
            raise DimensionMismatch(f"matrix shape {m.shape} does not fit {self.space.total} states")
        if (m < 0).any() or np.abs(m.sum(axis=0) - 1.0).max() > COLUMN_TOL:
            raise ValidationError("columns must be probability distributions")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def is_logical(self) -> bool:
        return bool(np.isin(self.matrix, (0.0, 1.0)).all())

    def as_logical(self) -> LogicalMatrix:
        if not self.is_logical():
            raise ValueError("transition matrix is not deterministic")
        return LogicalMatrix(self.dim, tuple(int(k) + 1 for k in self.matrix.argmax(axis=0)))

    def __matmul__(self, other):
        if isinstance(other, TransitionMatrix):
            return TransitionMatrix(self.matrix @ other.matrix, self.space)
        return self.matrix @ np.asarray(other, dtype=float)


@dataclass(frozen=True, eq=False)
class StationaryResult:
    distribution: np.ndarray
    iterations: int
    converged: bool
    reducible: bool


# -- response columns ------------------------------------------------------


def _response_columns(values: np.ndarray, rule: str, lam: float, tie_break: str) -> np.ndarray:
    """Map each column of candidate payoffs to a distribution over candidates."""
    finite = np.isfinite(values)
    dead = np.flatnonzero(~finite.any(axis=0))
    if dead.size:
        raise InfeasibleUpdate(f"every candidate is infeasible in column {int(dead[0]) + 1}")
    best = np.where(finite, values, -np.inf).max(axis=0)
    if rule == "logit":
        w = np.where(finite, np.exp(lam * (np.where(finite, values, 0.0) - best)), 0.0)
        return w / w.sum(axis=0)
    ties = finite & (values >= best - TIE_TOL * np.maximum(1.0, np.abs(best)))
    if tie_break == "lowest":
        out = np.zeros_like(values)
        out[ties.argmax(axis=0), np.arange(values.shape[1])] = 1.0
        return out
    return ties / ties.sum(axis=0)


def response_map(tensor: np.ndarray, axes: Sequence[int], rule: str, lam: float = 1.0,
                 tie_break: str = "lowest") -> np.ndarray:
    """Update map of the coordinates ``axes`` of a payoff ``tensor``.

    Returns an array of shape ``(m, S)``: rows are the candidate values of
    ``axes`` (first axis most significant), columns the states of ``tensor``.
    """
    axes = list(axes)
    cards = tensor.shape
    m = prod(cards[a] for a in axes)
    front = np.moveaxis(tensor, axes, range(len(axes))).reshape(m, -1)
    cols = _response_columns(front, rule, lam, tie_break)
    # column index of each state inside ``front``
    idx = np.moveaxis(np.arange(prod(cards)).reshape(cards), axes, range(len(axes))).reshape(m, -1)
    rest = np.empty(prod(cards), dtype=int)
    rest[idx] = np.arange(idx.shape[1])[None, :]
    return cols[:, rest]


def _step_matrix(cards, axes, local: np.ndarray) -> np.ndarray:
    """Full-state matrix for a move that redraws ``axes`` from ``local``."""
    size = prod(cards)
    coords = np.array(np.unravel_index(np.arange(size), cards))
    cand = np.array(np.unravel_index(np.arange(local.shape[0]), [cards[a] for a in axes]))
    out = np.zeros((size, size))
    for c in range(local.shape[0]):
        nxt = coords.copy()
        for k, a in enumerate(axes):
            nxt[a] = cand[k, c]
        target = np.ravel_multi_index(tuple(nxt), cards)
        np.add.at(out, (target, np.arange(size)), local[c])
    return out


def _maybe_logical(m: np.ndarray):
    if np.isin(m, (0.0, 1.0)).all() and (m.sum(axis=0) == 1).all():
        return LogicalMatrix(m.shape[0], tuple(int(k) + 1 for k in m.argmax(axis=0)))
    return m


# -- arenas ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class _Arena:
    cards: tuple[int, ...]
    tensors: tuple[np.ndarray, ...]
    moves: tuple[tuple[tuple[int, ...], ...], ...]  # per player, per move: state axes


def _arena(cg: ConvertedGame, cfg: SurConfig) -> _Arena:
    n = cg.n
    if cfg.conversion == "selten":
        if cg.kind != "selten":
            raise ValidationError(f"conversion 'selten' needs a Selten game, got {cg.kind!r}")
        tensors = tuple(cg.payoff_tensor(i) for i in range(1, n + 1))
        moves = tuple(((i,),) for i in range(n))
        return _Arena(cg.action_cards, tensors, moves)
    if cg.kind != "at":
        raise ValidationError(f"conversion {cfg.conversion!r} needs an Action-Type game, got {cg.kind!r}")
    cards = cg.type_cards + cg.action_cards
    tensors = tuple(at_lift(cg, i).reshape(cards) for i in range(1, n + 1))
    if cfg.conversion == "at-concurrent":
        moves = tuple(((i, n + i),) for i in range(n))
    else:
        moves = tuple(((n + i,), (i,)) for i in range(n))
    return _Arena(cards, tensors, moves)


def _order(cfg: SurConfig, n: int) -> tuple[int, ...]:
    order = cfg.order or tuple(range(1, n + 1))
    if sorted(order) != list(range(1, n + 1)):
        raise ValidationError(f"order {order} is not a permutation of 1..{n}")
    return order


def state_space(cg: ConvertedGame, cfg: SurConfig) -> ProfileSpace:
    return ProfileSpace(_arena(cg, cfg).cards)


def player_maps(cg: ConvertedGame, cfg: SurConfig) -> list:
    """Per-player update maps in the compact form ``x_i(k+1) = M_i x(k)``.

    Selten: ``M_i`` maps action profiles to ``a_i``. Action-Type: ``M_i`` maps
    ``(t_i, a)`` to ``(t_i, a_i)`` (concurrent) or, for separate moves, a pair
    ``(action map to a_i, type map to t_i)``. Deterministic maps are returned
    as :class:`LogicalMatrix`.
    """
    n = cg.n
    out = []
    for i in range(1, n + 1):
        if cfg.conversion == "selten":
            arena = _arena(cg, cfg)
            out.append(_maybe_logical(response_map(arena.tensors[i - 1], (i - 1,), cfg.rule,
                                                   cfg.lam, cfg.tie_break)))
            continue
        if cg.kind != "at":
            raise ValidationError(f"conversion {cfg.conversion!r} needs an Action-Type game")
        tens = cg.payoff_tensor(i)  # (t_i, a_1..a_n)
        maps = [response_map(tens, axes, cfg.rule, cfg.lam, cfg.tie_break)
                for axes in (((0, i),) if cfg.conversion == "at-concurrent" else ((i,), (0,)))]
        maps = [_maybe_logical(m) for m in maps]
        out.append(maps[0] if len(maps) == 1 else tuple(maps))
    return out


def _move_locals(arena: _Arena, cfg: SurConfig, i: int) -> list[tuple[tuple[int, ...], np.ndarray]]:
    return [(axes, response_map(arena.tensors[i - 1], axes, cfg.rule, cfg.lam, cfg.tie_break))
            for axes in arena.moves[i - 1]]


def step_maps(cg: ConvertedGame, cfg: SurConfig) -> list[TransitionMatrix]:
    """Full-state matrices of the individual asynchronous moves, in round-robin order."""
    arena = _arena(cg, cfg)
    space = ProfileSpace(arena.cards)
    out = []
    for i in _order(cfg, cg.n):
        for axes, local in _move_locals(arena, cfg, i):
            out.append(TransitionMatrix(_step_matrix(arena.cards, axes, local), space))
    return out


def transition_matrix(cg: ConvertedGame, cfg: SurConfig) -> TransitionMatrix:
    arena = _arena(cg, cfg)
    space = ProfileSpace(arena.cards)
    n = cg.n
    if cfg.mode == "sync":
        locals_ = [_move_locals(arena, cfg, i)[0][1] for i in range(1, n + 1)]
        m = khatri_rao(*locals_) if n > 1 else locals_[0]
        if cfg.conversion != "selten":
            # rows come out as (t_1, a_1, ..., t_n, a_n); reorder to (t, a)
            shape = [d for i in range(n) for d in (cg.type_cards[i], cg.action_cards[i])]
            axes = [2 * i for i in range(n)] + [2 * i + 1 for i in range(n)]
            m = m.reshape(shape + [space.total]).transpose(axes + [2 * n]).reshape(space.total, -1)
        return TransitionMatrix(m, space)
    if cfg.mode == "rr":
        m = np.eye(space.total)
        for s in step_maps(cg, cfg):
            m = s.matrix @ m
        return TransitionMatrix(m, space)
    m = np.zeros((space.total, space.total))
    for i in range(1, n + 1):
        moves = _move_locals(arena, cfg, i)
        for axes, local in moves:
            m += _step_matrix(arena.cards, axes, local) / (n * len(moves))
    return TransitionMatrix(m, space)


def mbra_map(cg: ConvertedGame, cfg: SurConfig) -> TransitionMatrix:
    """Myopic best-response dynamics ``x(k+1) = M x(k)``.

    Round-robin mode returns one full round (the composition of the moves).
    """
    if cfg.rule != "mbra":
        raise ValidationError("mbra_map needs rule='mbra'")
    return transition_matrix(cg, cfg)


def logit_matrix(cg: ConvertedGame, cfg: SurConfig) -> TransitionMatrix:
    """Logit response: probability of a candidate proportional to ``exp(λ·payoff)``."""
    if cfg.rule != "logit":
        raise ValidationError("logit_matrix needs rule='logit'")
    return transition_matrix(cg, cfg)


# -- simulation and analysis ----------------------------------------------


def _state_index(state, dim: int) -> int:
    if np.ndim(state) == 0:
        idx = int(state)
    else:
        col = np.asarray(state, dtype=float).reshape(-1)
        if col.size != dim:
            raise DimensionMismatch(f"state vector has {col.size} entries, expected {dim}")
        idx = int(np.argmax(col)) + 1
    if not 1 <= idx <= dim:
        raise DimensionMismatch(f"state {idx} outside 1..{dim}")
    return idx


def step(state, m: TransitionMatrix, rng=None) -> int:
    """Sample the next state (1-based index) from column ``state`` of ``m``."""
    idx = _state_index(state, m.dim)
    col = m.matrix[:, idx - 1]
    hits = np.flatnonzero(col == 1.0)
    if hits.size == 1:
        return int(hits[0]) + 1
    gen = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    return int(gen.choice(m.dim, p=col / col.sum())) + 1


def simulate(maps, x0, steps: int, seed: int = 0) -> list[int]:
    """Trajectory of 1-based states; a sequence of maps is applied cyclically."""
    seq = [maps] if isinstance(maps, TransitionMatrix) else list(maps)
    if not seq:
        raise ValueError("need at least one transition matrix")
    dims = {m.dim for m in seq}
    if len(dims) != 1:
        raise DimensionMismatch("all maps must act on the same state space")
    rng = np.random.default_rng(seed)
    x = _state_index(x0, seq[0].dim)
    out = [x]
    for k in range(steps):
        x = step(x, seq[k % len(seq)], rng)
        out.append(x)
    return out


def fixed_points(m) -> set[int]:
    """States ``x`` (1-based) with ``M x = x``."""
    if isinstance(m, LogicalMatrix):
        return {j for j, i in enumerate(m.indices, start=1) if i == j}
    mat = m.matrix if isinstance(m, TransitionMatrix) else np.asarray(m, dtype=float)
    return {int(j) + 1 for j in np.flatnonzero(np.isclose(np.diag(mat), 1.0, rtol=0.0, atol=COLUMN_TOL))}


def is_reducible(m) -> bool:
    mat = m.matrix if isinstance(m, TransitionMatrix) else np.asarray(m, dtype=float)
    count, _ = connected_components(mat > 0, directed=True, connection="strong")
    return count > 1


def stationary_distribution(m, tol: float = 1e-10, max_iter: int = 10**6) -> StationaryResult:
    """Power iteration from the uniform distribution.

    Stops when ``‖M μ - μ‖_1 < tol`` and returns that ``μ``. A reducible chain
    emits a :class:`RuntimeWarning`, since its stationary law is not unique.
    """
    mat = m.matrix if isinstance(m, TransitionMatrix) else np.asarray(m, dtype=float)
    size = mat.shape[0]
    reducible = is_reducible(mat)
    if reducible:
        warnings.warn("transition matrix is reducible; the stationary distribution is not unique",
                      RuntimeWarning, stacklevel=2)
    mu = np.full(size, 1.0 / size)
    for k in range(max_iter):
        nxt = mat @ mu
        if np.abs(nxt - mu).sum() < tol:
            return StationaryResult(mu, k, True, reducible)
        mu = nxt
    return StationaryResult(mu, max_iter, False, reducible)


def gibbs_distribution(q_vec, lam: float) -> np.ndarray:
    """Probabilities proportional to ``exp(λ q)``; ``-inf`` entries get zero mass."""
    q = np.asarray(q_vec, dtype=float).reshape(-1)
    finite = np.isfinite(q)
    if not finite.any():
        raise ValueError("gibbs_distribution needs at least one finite entry")
    w = np.zeros_like(q)
    w[finite] = np.exp(lam * (q[finite] - q[finite].max()))
    return w / w.sum()


def detailed_balance_check(m, mu, tol: float = 1e-10) -> bool:
    """``μ_a P(a → a') == μ_{a'} P(a' → a)`` for every pair of states."""
    mat = m.matrix if isinstance(m, TransitionMatrix) else np.asarray(m, dtype=float)
    mu = np.asarray(mu, dtype=float).reshape(-1)
    if mu.size != mat.shape[0]:
        raise DimensionMismatch(f"distribution has {mu.size} entries, chain has {mat.shape[0]} states")
    flow = mat * mu[None, :]  # flow[a', a] = μ_a P(a → a')
    return bool(np.abs(flow - flow.T).max() <= tol)


def marginal(dist, i: int, space) -> np.ndarray:
    """Law of coordinate ``i`` (1-based) of a distribution over ``space``."""
    sp = space if isinstance(space, ProfileSpace) else ProfileSpace(tuple(space))
    d = np.asarray(dist, dtype=float).reshape(-1)
    if d.size != sp.total:
        raise DimensionMismatch(f"distribution has {d.size} entries, space has {sp.total}")
    if not 1 <= i <= len(sp.cardinalities):
        raise DimensionMismatch(f"coordinate {i} outside 1..{len(sp.cardinalities)}")
    t = d.reshape(sp.cardinalities)
    other = tuple(ax for ax in range(t.ndim) if ax != i - 1)
    return t.sum(axis=other)
