"""Compiled inner loops for pruned lattice enumeration.

All arithmetic is int64; callers must check magnitudes first
(see ``lattice._fits_int64``).  The float square root is only a first guess
and is corrected with integer comparisons.
"""

from __future__ import annotations

import math

import numpy as np

try:
    import numba
    from numba import njit, prange
    HAVE_NUMBA = True
    # the bundled TBB is too old; workqueue is always available
    numba.config.THREADING_LAYER = "workqueue"
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False
    numba = None

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f

    prange = range


_SQMOD64 = np.zeros(64, dtype=np.bool_)
for _k in range(64):
    _SQMOD64[(_k * _k) % 64] = True


@njit(cache=True)
def _isqrt(v):
    s = np.int64(math.sqrt(float(v)))
    while s * s > v:
        s -= 1
    while (s + 1) * (s + 1) <= v:
        s += 1
    return s


@njit(cache=True)
def _bounds(M, T, x, i, r):
    """Integer range of x_i given x_{i+1..r-1}; returns (lo, hi, beta, gamma)."""
    alpha = M[i, i, i]
    beta = np.int64(0)
    gamma = np.int64(0)
    for j in range(i + 1, r):
        xj = x[j]
        if xj != 0:
            beta += M[i, i, j] * xj
            row = np.int64(0)
            for l in range(i + 1, r):
                row += M[i, j, l] * x[l]
            gamma += xj * row
    disc = beta * beta - alpha * (gamma - T[i])
    if disc < 0:
        return np.int64(1), np.int64(0), beta, gamma
    s = _isqrt(disc)
    lo = -((beta + s) // alpha)
    hi = (s - beta) // alpha
    return lo, hi, beta, gamma


@njit(cache=True)
def _solve_leaf(M, T, x, r):
    """Number of integers x_0 with alpha x0^2 + 2 beta x0 + gamma == T[0]."""
    alpha = M[0, 0, 0]
    beta = np.int64(0)
    gamma = np.int64(0)
    for j in range(1, r):
        xj = x[j]
        if xj != 0:
            beta += M[0, 0, j] * xj
            row = np.int64(0)
            for l in range(1, r):
                row += M[0, j, l] * x[l]
            gamma += xj * row
    disc = beta * beta - alpha * (gamma - T[0])
    if disc < 0:
        return np.int64(0)
    s = _isqrt(disc)
    if s * s != disc:
        return np.int64(0)
    c = np.int64(0)
    if (s - beta) % alpha == 0:
        c += 1
    if s != 0 and (-s - beta) % alpha == 0:
        c += 1
    return c


@njit(cache=True)
def _shell_row(M, T, x, r, lo1, hi1):
    """Solutions with x_2.. fixed, summed over x_1 in [lo1, hi1].

    The discriminant of the quadratic in x_0 is itself quadratic in x_1 and
    is advanced by finite differences.
    """
    a00 = M[0, 0, 0]
    a01 = M[0, 0, 1]
    a11 = M[0, 1, 1]
    bp = np.int64(0)
    cp = np.int64(0)
    gp = np.int64(0)
    for j in range(2, r):
        xj = x[j]
        if xj != 0:
            bp += M[0, 0, j] * xj
            cp += M[0, 1, j] * xj
            row = np.int64(0)
            for l in range(2, r):
                row += M[0, j, l] * x[l]
            gp += xj * row
    qa = a01 * a01 - a00 * a11
    qb = 2 * (bp * a01 - a00 * cp)
    disc = (qa * lo1 + qb) * lo1 + bp * bp - a00 * (gp - T[0])
    step = qa * (2 * lo1 + 1) + qb
    beta = bp + a01 * lo1
    c = np.int64(0)
    for _ in range(lo1, hi1 + 1):
        if disc >= 0 and _SQMOD64[disc & 63]:
            s = _isqrt(disc)
            if s * s == disc:
                if (s - beta) % a00 == 0:
                    c += 1
                if s != 0 and (-s - beta) % a00 == 0:
                    c += 1
        disc += step
        step += 2 * qa
        beta += a01
    return c


@njit(cache=True)
def _subtree(M, T, r, top_value, bound, shell, out):
    """DFS below a fixed top coordinate.

    ``shell``: count solutions of Q(x) = bound (returned).  Otherwise add
    the count of every value <= bound into ``out`` and return 0.
    """
    x = np.zeros(r, dtype=np.int64)
    lo = np.zeros(r, dtype=np.int64)
    hi = np.zeros(r, dtype=np.int64)
    x[r - 1] = top_value
    total = np.int64(0)
    if r == 1:
        if shell:
            return np.int64(1) if M[0, 0, 0] * top_value * top_value == 2 * bound else np.int64(0)
        v = (M[0, 0, 0] * top_value * top_value) // 2
        if v <= bound:
            out[v] += 1
        return np.int64(0)
    if shell and r == 2:
        return _solve_leaf(M, T, x, r)
    i = r - 2
    a, b, _, _ = _bounds(M, T, x, i, r)
    lo[i] = a
    hi[i] = b
    x[i] = a - 1
    while True:
        x[i] += 1
        if x[i] > hi[i]:
            i += 1
            if i >= r - 1:
                break
            continue
        if shell and i == 2:
            a, b, _, _ = _bounds(M, T, x, 1, r)
            total += _shell_row(M, T, x, r, a, b)
            continue
        if i > 1 or (i == 1 and not shell):
            i -= 1
            a, b, _, _ = _bounds(M, T, x, i, r)
            lo[i] = a
            hi[i] = b
            x[i] = a - 1
            continue
        if i == 0:
            # table mode leaf: run over the whole range of x_0 at once
            alpha = M[0, 0, 0]
            beta = np.int64(0)
            gamma = np.int64(0)
            for j in range(1, r):
                row = np.int64(0)
                for l in range(1, r):
                    row += M[0, j, l] * x[l]
                beta += M[0, 0, j] * x[j]
                gamma += x[j] * row
            for x0 in range(x[0], hi[0] + 1):
                v = (alpha * x0 * x0 + 2 * beta * x0 + gamma) // 2
                out[v] += 1
            x[0] = hi[0]
            continue
        total += _solve_leaf(M, T, x, r)
    return total


@njit(cache=True, parallel=True)
def shell_count(M, T, r, tops, n):
    acc = np.zeros(len(tops), dtype=np.int64)
    dummy = np.zeros(1, dtype=np.int64)
    for t in prange(len(tops)):
        acc[t] = _subtree(M, T, r, tops[t], n, True, dummy)
    return acc.sum()


@njit(cache=True, parallel=True)
def table_count(M, T, r, tops, bound):
    acc = np.zeros((len(tops), bound + 1), dtype=np.int64)
    for t in prange(len(tops)):
        _subtree(M, T, r, tops[t], bound, False, acc[t])
    return acc.sum(axis=0)
