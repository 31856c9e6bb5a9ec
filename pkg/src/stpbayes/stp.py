"""Semi-tensor product (STP) kernel.

Every vectorised object in the package uses one ordering: the profile
``(j_1, ..., j_n)`` is the STP ``δ_{k_1}^{j_1} ⋉ ... ⋉ δ_{k_n}^{j_n}``, so player 1
is the most significant digit. All indices exposed here are 1-based to match
the δ notation.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce
from math import lcm, prod
from typing import Iterator, Sequence

import numpy as np

from .errors import ColumnMismatch, IndexOutOfRange


@dataclass(frozen=True)
class LogicalMatrix:
    """A matrix whose columns are unit vectors, stored by column indices.

    ``LogicalMatrix(4, (4, 2, 3, 1))`` is ``δ_4[4,2,3,1]``.
    """

    rows: int
    indices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(int(i) for i in self.indices))
        if self.rows < 1:
            raise ValueError("a logical matrix needs at least one row")
        bad = [i for i in self.indices if not 1 <= i <= self.rows]
        if bad:
            raise IndexOutOfRange(f"column indices {bad} outside 1..{self.rows}")

    @property
    def cols(self) -> int:
        return len(self.indices)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols))
        out[np.asarray(self.indices, dtype=int) - 1, np.arange(self.cols)] = 1.0
        return out

    def __array__(self, dtype=None, copy=None):
        arr = self.to_dense()
        return arr if dtype is None else arr.astype(dtype)

    def __matmul__(self, other):
        if isinstance(other, LogicalMatrix):
            if other.rows != self.cols:
                raise ColumnMismatch(f"cannot compose {self.shape} with {other.shape}")
            return LogicalMatrix(self.rows, tuple(self.indices[j - 1] for j in other.indices))
        return self.to_dense() @ np.asarray(other, dtype=float)

    def transpose(self) -> LogicalMatrix:
        """Transpose; only defined for permutation matrices."""
        if self.rows != self.cols or sorted(self.indices) != list(range(1, self.rows + 1)):
            raise ValueError("only a permutation matrix has a logical transpose")
        inv = [0] * self.rows
        for col, row in enumerate(self.indices, start=1):
            inv[row - 1] = col
        return LogicalMatrix(self.rows, tuple(inv))

    @classmethod
    def from_dense(cls, matrix, atol: float = 0.0) -> LogicalMatrix:
        m = as_matrix(matrix)
        idx = []
        for k in range(m.shape[1]):
            col = m[:, k]
            j = int(np.argmax(col))
            unit = np.zeros_like(col)
            unit[j] = 1.0
            if not np.allclose(col, unit, rtol=0.0, atol=atol):
                raise ValueError(f"column {k + 1} is not a unit vector")
            idx.append(j + 1)
        return cls(m.shape[0], tuple(idx))

    def __str__(self) -> str:
        return f"δ_{self.rows}[{','.join(map(str, self.indices))}]"


@dataclass(frozen=True)
class ProfileSpace:
    """Mixed-radix space ``Π {1..k_i}`` with player 1 most significant."""

    cardinalities: tuple[int, ...]

    def __post_init__(self):
        cards = tuple(int(k) for k in self.cardinalities)
        if not cards or min(cards) < 1:
            raise ValueError("cardinalities must be positive and nonempty")
        object.__setattr__(self, "cardinalities", cards)

    @property
    def total(self) -> int:
        return prod(self.cardinalities)

    def __len__(self) -> int:
        return self.total

    def index(self, profile: Sequence[int]) -> int:
        return profile_index(profile, self)

    def unindex(self, idx: int) -> tuple[int, ...]:
        return profile_unindex(idx, self)

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(*(range(1, k + 1) for k in self.cardinalities))


def _space(space) -> ProfileSpace:
    return space if isinstance(space, ProfileSpace) else ProfileSpace(tuple(space))


def profile_index(indices: Sequence[int], space) -> int:
    sp = _space(space)
    if len(indices) != len(sp.cardinalities):
        raise IndexOutOfRange(f"profile {tuple(indices)} has wrong length for {sp.cardinalities}")
    idx = 0
    for j, k in zip(indices, sp.cardinalities):
        if not 1 <= j <= k:
            raise IndexOutOfRange(f"profile {tuple(indices)} outside {sp.cardinalities}")
        idx = idx * k + (j - 1)
    return idx + 1


def profile_unindex(idx: int, space) -> tuple[int, ...]:
    sp = _space(space)
    if not 1 <= idx <= sp.total:
        raise IndexOutOfRange(f"index {idx} outside 1..{sp.total}")
    rem = idx - 1
    out = []
    for k in reversed(sp.cardinalities):
        rem, digit = divmod(rem, k)
        out.append(digit + 1)
    return tuple(reversed(out))


def as_matrix(a) -> np.ndarray:
    """Coerce to a 2-D float array. 1-D input is read as a column."""
    if isinstance(a, LogicalMatrix):
        return a.to_dense()
    arr = np.asarray(a, dtype=float)
    if arr.ndim == 0:
        return arr.reshape(1, 1)
    if arr.ndim == 1:
        return arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {arr.shape}")
    return arr


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


# above this many scalar products the kernel hands over to BLAS
EXACT_LIMIT = 1 << 21


def _ordered_matmul(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """``x @ y`` summed strictly in inner-index order.

    BLAS may round ``(XY)ᵀ`` and ``YᵀXᵀ`` differently; a fixed summation order
    of the same products makes the transpose law hold bit for bit.
    """
    m, t = x.shape
    q = y.shape[1]
    if m * t * q > EXACT_LIMIT or t == 0:
        return x @ y
    return np.add.accumulate(x[:, :, None] * y[None, :, :], axis=1)[:, -1, :]


def _stp2(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n, p = a.shape[1], b.shape[0]
    if n == p:
        return _ordered_matmul(a, b)
    t = lcm(n, p)
    left = a if t == n else np.kron(a, np.eye(t // n))
    right = b if t == p else np.kron(b, np.eye(t // p))
    return _ordered_matmul(left, right)


def stp(a, b, *more) -> np.ndarray:
    """Left semi-tensor product, chained left to right for extra operands."""
    mats = [as_matrix(m) for m in (a, b, *more)]
    return reduce(_stp2, mats)


def delta(n: int, i: int) -> np.ndarray:
    """Column ``δ_n^i``."""
    if not 1 <= i <= n:
        raise IndexOutOfRange(f"δ_{n}^{i} needs 1 <= i <= {n}")
    out = np.zeros((n, 1))
    out[i - 1, 0] = 1.0
    return out


def swap_matrix(m: int, n: int) -> LogicalMatrix:
    """``W_[m,n]`` with ``W ⋉ X ⋉ Y = Y ⋉ X`` for ``X ∈ R^m``, ``Y ∈ R^n``."""
    if m < 1 or n < 1:
        raise ValueError("swap matrix dimensions must be positive")
    cols = []
    for k in range(1, m * n + 1):
        # j_k runs over 1..n (residue n, not 0)
        j = (k - 1) % n + 1
        i = (k - j) // n + 1
        cols.append((j - 1) * m + i)
    return LogicalMatrix(m * n, tuple(cols))


def order_reducing_matrix(n: int) -> LogicalMatrix:
    """``PR_n`` with ``PR_n ⋉ x = x ⋉ x`` for every ``x ∈ Δ_n``."""
    if n < 1:
        raise ValueError("n must be positive")
    return LogicalMatrix(n * n, tuple((i - 1) * n + i for i in range(1, n + 1)))


def khatri_rao(a, b, *more):
    """Columnwise Kronecker product ``A * B * ...``.

    Logical operands give a :class:`LogicalMatrix`; anything else a dense array.
    """
    ops = (a, b, *more)
    if all(isinstance(m, LogicalMatrix) for m in ops):
        return reduce(_khatri_rao_logical, ops)
    return reduce(_khatri_rao_dense, (as_matrix(m) for m in ops))


def _khatri_rao_logical(a: LogicalMatrix, b: LogicalMatrix) -> LogicalMatrix:
    if a.cols != b.cols:
        raise ColumnMismatch(f"khatri_rao needs equal column counts, got {a.cols} and {b.cols}")
    return LogicalMatrix(a.rows * b.rows, tuple((i - 1) * b.rows + j for i, j in zip(a.indices, b.indices)))


def _khatri_rao_dense(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[1] != b.shape[1]:
        raise ColumnMismatch(
            f"khatri_rao needs equal column counts, got {a.shape[1]} and {b.shape[1]}"
        )
    return np.einsum("ik,jk->ijk", a, b).reshape(a.shape[0] * b.shape[0], a.shape[1])


def ones_row(k: int) -> np.ndarray:
    return np.ones((1, k))
