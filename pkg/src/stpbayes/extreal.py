"""Arithmetic on the reals extended with a -inf sentinel.

Payoffs are stored as ``float64`` with ``-inf`` marking inadmissible cells.
The one rule numpy gets wrong is ``0 * -inf``, which must be ``0`` so that
zero-probability types do not poison expectations.
"""
from __future__ import annotations

import numpy as np

NEG_INF = float("-inf")


def is_neg_inf(x) -> np.ndarray:
    return np.isneginf(np.asarray(x, dtype=float))


def check_ext(values, name: str = "payoffs") -> np.ndarray:
    """Return ``values`` as a float array, rejecting NaN and +inf."""
    arr = np.asarray(values, dtype=float)
    if np.isnan(arr).any() or np.isposinf(arr).any():
        raise ValueError(f"{name} may contain only finite values and -inf")
    return arr


def ext_weighted_sum(values, weights, axis=-1) -> np.ndarray:
    """Sum of ``weights * values`` along ``axis`` with ``0 * -inf = 0``.

    ``weights`` must be nonnegative and broadcastable against ``values``.
    """
    v = np.asarray(values, dtype=float)
    w = np.asarray(weights, dtype=float)
    v, w = np.broadcast_arrays(v, w)
    safe = np.where(w != 0, v, 0.0)
    return np.sum(safe * w, axis=axis)


def ext_stp(row, factor) -> np.ndarray:
    """Semi-tensor product ``row ⋉ factor`` for an extended-real ``row``.

    A 1-D ``row`` is read as a row vector.
    ``factor`` must be entrywise nonnegative. The finite part is handled by
    the ordinary STP; an output cell is ``-inf`` exactly when some ``-inf``
    entry of ``row`` meets a positive entry of the (padded) factor.
    """
    from .stp import as_matrix, stp

    row = np.asarray(row, dtype=float)
    row = row.reshape(1, -1) if row.ndim == 1 else as_matrix(row)
    factor = as_matrix(factor)
    if (factor < 0).any():
        raise ValueError("ext_stp needs a nonnegative right factor")
    hole = np.isneginf(row)
    finite = stp(np.where(hole, 0.0, row), factor)
    if not hole.any():
        return finite
    hit = stp(hole.astype(float), (factor > 0).astype(float)) > 0
    return np.where(hit, NEG_INF, finite)
