"""Exact potential games via the potential equation ``Ψ ξ = b``.

A game is potential iff there are row vectors ``V_i^d`` (independent of
player ``i``'s own strategy) with ``V_i^d E_i = V_i^c - V^P``. Eliminating
``V^P`` leaves the linear system assembled by :func:`build_potential_system`.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Sequence

import numpy as np

from .errors import IndexOutOfRange, InfinitePayoff, NonpositiveWeight
from .normal_game import NormalGame, equivalent_vector_form


def face_matrix(i: int, cardinalities: Sequence[int]) -> np.ndarray:
    """``E_i = I_α ⊗ 1ᵀ_{k_i} ⊗ I_β``, of shape ``(κ/k_i, κ)``.

    ``V E_i`` copies a row indexed by ``s_{-i}`` onto every profile, which is
    how a function independent of ``s_i`` is written as a full structure vector.
    """
    cards = list(cardinalities)
    if not 1 <= i <= len(cards):
        raise IndexOutOfRange(f"player {i} outside 1..{len(cards)}")
    alpha = prod(cards[: i - 1])
    beta = prod(cards[i:])
    return np.kron(np.kron(np.eye(alpha), np.ones((1, cards[i - 1]))), np.eye(beta))


@dataclass(frozen=True, eq=False)
class PotentialSystem:
    psi: np.ndarray
    b: np.ndarray
    face_matrices: tuple[np.ndarray, ...]

    @property
    def block_sizes(self) -> list[int]:
        return [e.shape[0] for e in self.face_matrices]


@dataclass(frozen=True, eq=False)
class PotentialResult:
    is_potential: bool
    xi: np.ndarray | None
    potential_vector: np.ndarray | None
    residual: float


def stack_potential_matrix(faces: Sequence[np.ndarray]) -> np.ndarray:
    """Block matrix with block row ``i-1`` equal to ``[-F_1ᵀ, 0, ..., F_iᵀ, ..., 0]``."""
    n = len(faces)
    rows = faces[0].shape[1]
    widths = [f.shape[0] for f in faces]
    psi = np.zeros(((n - 1) * rows, sum(widths)))
    offsets = np.concatenate([[0], np.cumsum(widths)])
    for blk in range(1, n):
        r0 = (blk - 1) * rows
        psi[r0 : r0 + rows, : widths[0]] = -faces[0].T
        psi[r0 : r0 + rows, offsets[blk] : offsets[blk + 1]] = faces[blk].T
    return psi


def build_potential_system(g: NormalGame) -> PotentialSystem:
    if not g.is_finite():
        raise InfinitePayoff("the potential equation needs finite payoffs")
    faces = tuple(face_matrix(i, g.cardinalities) for i in range(1, g.n + 1))
    psi = stack_potential_matrix(faces)
    b = equivalent_vector_form(g).reshape(-1, 1) if g.n > 1 else np.zeros((0, 1))
    return PotentialSystem(psi, b, faces)


def solve_linear_potential(psi, b, first_face, first_row) -> PotentialResult:
    """Least-squares solve of ``psi ξ = b``; potential is ``first_row - ξ_1ᵀ F_1``."""
    width1 = first_face.shape[0]
    if psi.shape[0] == 0:
        xi = np.zeros((max(psi.shape[1], width1), 1))
        residual = 0.0
        tol = 0.0
    else:
        xi = np.linalg.lstsq(psi, b, rcond=None)[0]
        residual = float(np.max(np.abs(psi @ xi - b)))
        tol = 1e-8 * max(1.0, float(np.max(np.abs(b))))
    if residual > tol:
        return PotentialResult(False, xi.ravel(), None, residual)
    xi1 = xi[:width1]
    vp = np.asarray(first_row, dtype=float).reshape(-1) - (xi1.T @ first_face).reshape(-1)
    return PotentialResult(True, xi.ravel(), vp, residual)


def solve_potential(g: NormalGame) -> PotentialResult:
    """Decide whether ``g`` is an exact potential game and recover ``V^P``.

    The system is solved in the least-squares sense (minimum-norm ``ξ`` when
    ``Ψ`` is rank deficient). ``g`` is declared potential when
    ``‖Ψξ - b‖_∞ <= 1e-8 · max(1, ‖b‖_∞)``.
    """
    sys_ = build_potential_system(g)
    return solve_linear_potential(sys_.psi, sys_.b, sys_.face_matrices[0], g.payoffs[0])


def _deviation_gaps(g: NormalGame, p_vec, weights) -> float:
    p = np.asarray(p_vec, dtype=float).reshape(g.cardinalities)
    worst = 0.0
    for i in range(1, g.n + 1):
        ax = i - 1
        c = np.moveaxis(g.tensor(i), ax, -1)
        q = np.moveaxis(p, ax, -1)
        # all ordered strategy pairs (x, y) at once
        dc = c[..., :, None] - c[..., None, :]
        dq = q[..., :, None] - q[..., None, :]
        worst = max(worst, float(np.max(np.abs(dc - weights[ax] * dq))))
    return worst


def verify_potential(g: NormalGame, p_vec, tol: float = 1e-9) -> bool:
    """Exhaustively check every unilateral deviation against ``p_vec``."""
    return verify_weighted_potential(g, p_vec, [1.0] * g.n, tol)


def verify_weighted_potential(g: NormalGame, p_vec, weights, tol: float = 1e-9) -> bool:
    w = [float(x) for x in weights]
    if len(w) != g.n:
        raise ValueError(f"expected {g.n} weights")
    if min(w) <= 0:
        raise NonpositiveWeight("weights must be positive")
    if not g.is_finite():
        raise InfinitePayoff("potential checks need finite payoffs")
    p = np.asarray(p_vec, dtype=float).reshape(-1)
    if p.size != g.kappa or not np.isfinite(p).all():
        return False
    return _deviation_gaps(g, p, w) <= tol
