"""Numerov propagation kernels for y'' = g(x) y on a uniform grid.

Only the sign-change count and the three samples around the matching index
are returned; the running solution is rescaled whenever it grows past
``_BIG`` so arbitrarily deep forbidden regions cannot overflow.
"""

import numba
import numpy as np

_BIG = 1e150


@numba.njit(cache=True)
def numerov_out(g, h2, y0, y1, stop):
    """Integrate from index 0 up to index ``stop + 1`` (``stop >= 1``).

    Returns (sign changes on [0, stop], y[stop-1], y[stop], y[stop+1]).
    """
    c = h2 / 12.0
    y_old, y_prev, y_cur = 0.0, y0, y1
    count = 1 if y_prev * y_cur < 0.0 else 0
    for k in range(1, stop + 1):
        y_next = (2.0 * (1.0 + 5.0 * c * g[k]) * y_cur - (1.0 - c * g[k - 1]) * y_prev) / (
            1.0 - c * g[k + 1]
        )
        if k < stop and y_cur * y_next < 0.0:
            count += 1
        y_old, y_prev, y_cur = y_prev, y_cur, y_next
        if abs(y_cur) > _BIG:
            y_old /= _BIG
            y_prev /= _BIG
            y_cur /= _BIG
    return count, y_old, y_prev, y_cur


@numba.njit(cache=True)
def numerov_in(g, h2, y_last, y_before, stop):
    """Integrate from the last index down to ``stop - 1`` (``stop <= N - 2``).

    Returns (sign changes on [stop, N-1], y[stop-1], y[stop], y[stop+1]).
    """
    n = g.shape[0]
    c = h2 / 12.0
    y_old, y_prev, y_cur = 0.0, y_last, y_before
    count = 1 if y_prev * y_cur < 0.0 else 0
    for k in range(n - 2, stop - 1, -1):
        y_next = (2.0 * (1.0 + 5.0 * c * g[k]) * y_cur - (1.0 - c * g[k + 1]) * y_prev) / (
            1.0 - c * g[k - 1]
        )
        if k > stop and y_cur * y_next < 0.0:
            count += 1
        y_old, y_prev, y_cur = y_prev, y_cur, y_next
        if abs(y_cur) > _BIG:
            y_old /= _BIG
            y_prev /= _BIG
            y_cur /= _BIG
    return count, y_cur, y_prev, y_old


@numba.njit(cache=True)
def numerov_profile(g, h2, y0, y1):
    """Full outward solution, normalized to unit maximum; used for diagnostics."""
    n = g.shape[0]
    c = h2 / 12.0
    y = np.empty(n)
    y[0] = y0
    y[1] = y1
    for k in range(1, n - 1):
        y[k + 1] = (2.0 * (1.0 + 5.0 * c * g[k]) * y[k] - (1.0 - c * g[k - 1]) * y[k - 1]) / (
            1.0 - c * g[k + 1]
        )
        if abs(y[k + 1]) > _BIG:
            y[: k + 2] /= _BIG
    return y / np.max(np.abs(y))
