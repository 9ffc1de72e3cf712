"""Representation numbers ``r_Q(n)`` by exact lattice-point enumeration.

Three independent routes are provided:

* :func:`theta_series` (default ``method="memo"``): depth-first enumeration
  over coordinates using the exact block LDL^T decomposition of ``A``.
  Once the outer coordinates are fixed, the inner sub-enumeration depends
  only on the class of the induced shift modulo ``Z^i``.  There are at most
  ``det(A[:i,:i])`` such classes, so every inner subtree is counted once and
  memoised as a table of value counts.
* ``method="enumerate"`` and :func:`rep_count_shell`: plain Fincke-Pohst
  style pruned enumeration with integer Schur complements.  Each coordinate
  range is the exact integer solution set of a quadratic inequality; for a
  single shell the last coordinate is solved exactly.
* :func:`theta_series_oracle`: naive enumeration of an integer box.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import floor, isqrt
from typing import Sequence

import numpy as np

from . import _kernels
from .qform import GramMatrix, bareiss_det, inverse

__all__ = [
    "RepTable",
    "BoxTooLarge",
    "theta_series",
    "rep_count_shell",
    "theta_series_oracle",
    "default_workers",
    "reptable_to_json",
    "reptable_from_json",
]

INT64_SAFE = 1 << 62
ORACLE_MAX_BOX = 10 ** 8


class BoxTooLarge(ValueError):
    """The naive oracle refuses boxes above its volume guard."""


@dataclass(frozen=True)
class RepTable:
    form: GramMatrix
    bound: int
    counts: tuple[int, ...]

    def __getitem__(self, n: int) -> int:
        return self.counts[n]

    def __len__(self) -> int:
        return len(self.counts)


def default_workers() -> int:
    env = os.environ.get("THETA_FORGE_WORKERS")
    if env:
        w = int(env)
        if w < 1:
            raise ValueError("THETA_FORGE_WORKERS must be >= 1")
        return w
    try:
        return max(1, len(os.sched_getaffinity(0)))
    except AttributeError:  # pragma: no cover
        return max(1, os.cpu_count() or 1)


def _leading(A: GramMatrix, i: int) -> list[list[int]]:
    return [list(r[:i]) for r in A.entries[:i]]


# -- integer Schur complements for plain enumeration -------------------------

def _schur_stack(A: GramMatrix) -> tuple[list[list[list[int]]], list[int]]:
    """Return ``M[i]`` (r x r, meaningful on coords >= i) and ``E[i]``.

    ``M[i] = E_i * (A_{>=i,>=i} - A_{>=i,<i} A_{<i,<i}^{-1} A_{<i,>=i})`` with
    ``E_i = det A_{<i,<i}``; for fixed x_{>=i} it is ``E_i`` times the minimum
    of ``x^T A x`` over the free coordinates x_{<i}.
    """
    r = A.dim
    a = A.entries
    stack, dets = [], []
    for i in range(r):
        E = bareiss_det(_leading(A, i))
        M = [[0] * r for _ in range(r)]
        if i == 0:
            for j in range(r):
                M[j] = list(a[j])
        else:
            inv = inverse(_block(A, i))
            for j in range(i, r):
                for l in range(i, r):
                    corr = sum(a[j][p] * inv[p][q] * a[q][l] for p in range(i) for q in range(i))
                    v = (a[j][l] - corr) * E
                    assert v.denominator == 1
                    M[j][l] = int(v)
        stack.append(M)
        dets.append(E)
    return stack, dets


def _block(A: GramMatrix, i: int) -> GramMatrix:
    # leading blocks of a positive definite matrix are positive definite
    return GramMatrix(tuple(tuple(r[:i]) for r in A.entries[:i]))


def _coord_extent(A: GramMatrix, budget: int) -> list[int]:
    """``max |x_j|`` over integer x with ``x^T A x <= budget``."""
    inv = inverse(A)
    out = []
    for j in range(A.dim):
        v = inv[j][j] * budget
        out.append(isqrt(v.numerator // v.denominator))
    return out


def _fits_int64(stack, dets, ext, budget: int) -> bool:
    r = len(dets)
    for i in range(r):
        M = stack[i]
        T = budget * dets[i]
        bb = sum(abs(M[i][j]) * ext[j] for j in range(i + 1, r))
        bg = sum(abs(M[j][l]) * ext[j] * ext[l] for j in range(i + 1, r) for l in range(i + 1, r))
        alpha = M[i][i]
        worst = max(bb * bb + alpha * (bg + T), alpha * ext[i] ** 2 + 2 * bb * ext[i] + bg, T)
        if worst >= INT64_SAFE:
            return False
    if r >= 3:
        # finite-difference quantities of the shell row kernel
        A0 = stack[0]
        b2 = sum(abs(A0[0][j]) * ext[j] for j in range(2, r))
        c2 = sum(abs(A0[1][j]) * ext[j] for j in range(2, r))
        g2 = sum(abs(A0[j][l]) * ext[j] * ext[l] for j in range(2, r) for l in range(2, r))
        a00, a01, a11 = A0[0][0], abs(A0[0][1]), A0[1][1]
        e1 = ext[1] + 1
        row = (a01 * a01 + a00 * a11) * e1 * e1 + 2 * (b2 * a01 + a00 * c2) * e1 + b2 * b2 + a00 * (g2 + budget)
        if 4 * row >= INT64_SAFE:
            return False
    return True


def _range(alpha: int, beta: int, gamma: int, T: int) -> range:
    disc = beta * beta - alpha * (gamma - T)
    if disc < 0:
        return range(0)
    s = isqrt(disc)
    return range(-((beta + s) // alpha), (s - beta) // alpha + 1)


def _py_enumerate(stack, dets, r: int, budget: int, shell: bool, out: list[int] | None) -> int:
    """Reference implementation of the compiled kernels, Python integers."""
    x = [0] * r
    total = 0

    def coeffs(i):
        M = stack[i]
        beta = sum(M[i][j] * x[j] for j in range(i + 1, r))
        gamma = sum(M[j][l] * x[j] * x[l] for j in range(i + 1, r) for l in range(i + 1, r))
        return M[i][i], beta, gamma

    def rec(i):
        nonlocal total
        alpha, beta, gamma = coeffs(i)
        T = budget * dets[i]
        if i == 0:
            if shell:
                disc = beta * beta - alpha * (gamma - T)
                if disc < 0:
                    return
                s = isqrt(disc)
                if s * s != disc:
                    return
                total += (s - beta) % alpha == 0
                total += s != 0 and (-s - beta) % alpha == 0
            else:
                for x0 in _range(alpha, beta, gamma, T):
                    out[(alpha * x0 * x0 + 2 * beta * x0 + gamma) // 2] += 1
            return
        for xi in _range(alpha, beta, gamma, T):
            x[i] = xi
            rec(i - 1)
        x[i] = 0

    rec(r - 1)
    return total


def _prepare(A: GramMatrix, budget: int):
    stack, dets = _schur_stack(A)
    top = A.dim - 1
    tops = list(_range(stack[top][top][top], 0, 0, budget * dets[top]))
    ext = _coord_extent(A, budget)
    return stack, dets, tops, _fits_int64(stack, dets, ext, budget)


def _set_threads(workers: int) -> None:
    if _kernels.HAVE_NUMBA:
        _kernels.numba.set_num_threads(max(1, min(workers, _kernels.numba.config.NUMBA_NUM_THREADS)))


def _use_kernel(fast: bool, backend: str) -> bool:
    if backend not in ("auto", "python"):
        raise ValueError(f"unknown backend {backend!r}")
    return backend == "auto" and fast and _kernels.HAVE_NUMBA


def rep_count_shell(A: GramMatrix, n: int, workers: int | None = None, backend: str = "auto") -> int:
    """``r_Q(n)`` for one ``n`` with O(r) memory.

    ``backend="python"`` forces the arbitrary-precision reference loop; the
    compiled kernel is otherwise used whenever every intermediate fits int64.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return 1
    stack, dets, tops, fast = _prepare(A, 2 * n)
    r = A.dim
    if _use_kernel(fast, backend):
        _set_threads(workers or default_workers())
        M = np.array(stack, dtype=np.int64)
        T = np.array([2 * n * e for e in dets], dtype=np.int64)
        return int(_kernels.shell_count(M, T, r, np.array(tops, dtype=np.int64), n))
    return _py_enumerate(stack, dets, r, 2 * n, True, None)


def _enumerate_table(A: GramMatrix, B: int, workers: int, backend: str) -> list[int]:
    stack, dets, tops, fast = _prepare(A, 2 * B)
    r = A.dim
    if _use_kernel(fast, backend):
        _set_threads(workers)
        M = np.array(stack, dtype=np.int64)
        T = np.array([2 * B * e for e in dets], dtype=np.int64)
        return [int(v) for v in _kernels.table_count(M, T, r, np.array(tops, dtype=np.int64), B)]
    out = [0] * (B + 1)
    _py_enumerate(stack, dets, r, 2 * B, False, out)
    return out


# -- memoised enumeration over shift classes ---------------------------------

class _ShiftMemo:
    """Counts ``#{y in Z^i : (y+u)^T A_i (y+u) = t}`` per shift class ``u``.

    ``A_i`` is the leading i x i block.  All values for a fixed class lie in
    ``t0 + 2Z`` (``A_i u`` is integral for every class that occurs), so a
    table is stored as ``(t0, counts[j] for t = t0 + 2j, j = 0..B)``.
    """

    def __init__(self, A: GramMatrix, B: int):
        self.A = A
        self.B = B
        r = A.dim
        self.dets = [bareiss_det(_leading(A, i)) for i in range(r + 1)]
        self.pivot = [None] + [Fraction(self.dets[i], self.dets[i - 1]) for i in range(1, r + 1)]
        self.lift: list[list[Fraction]] = [[]]
        for i in range(1, r + 1):
            if i == 1:
                self.lift.append([])
                continue
            inv = inverse(_block(A, i - 1))
            col = [A.entries[p][i - 1] for p in range(i - 1)]
            self.lift.append([sum(inv[p][q] * col[q] for q in range(i - 1)) for p in range(i - 1)])
        self.memo: dict = {}

    def _t0(self, i: int, u: tuple[Fraction, ...]) -> Fraction:
        a = self.A.entries
        val = sum(a[p][q] * u[p] * u[q] for p in range(i) for q in range(i))
        return val % 2

    def _xs(self, i: int, u: tuple[Fraction, ...], t0: Fraction) -> list[int]:
        """Integers x with ``pivot_i (x + u_last)^2 <= t0 + 2B``."""
        R = (t0 + 2 * self.B) / self.pivot[i]
        c = u[i - 1]
        h = isqrt(floor(R)) + 1
        base = floor(-c)
        return [x for x in range(base - h, base + h + 2) if (x + c) ** 2 <= R]

    def contributions(self, i: int, u: tuple[Fraction, ...], xs: Sequence[int]):
        t0 = self._t0(i, u)
        s = self.pivot[i]
        g = self.lift[i]
        for x in xs:
            v = x + u[i - 1]
            child_u = tuple((u[p] + g[p] * v) % 1 for p in range(i - 1))
            tc, carr = self.table(i - 1, child_u)
            off = (tc + s * v * v - t0) / 2
            assert off.denominator == 1 and off >= 0
            yield int(off), carr

    def table(self, i: int, u: tuple[Fraction, ...]):
        key = (i, u)
        if key not in self.memo:
            self.memo[key] = self.combine(i, u)
        return self.memo[key]

    def combine(self, i: int, u: tuple[Fraction, ...], xs: Sequence[int] | None = None):
        """Table for class ``u`` at level ``i``, restricted to ``x_i in xs``."""
        B = self.B
        if i == 0:
            arr = np.zeros(B + 1, dtype=np.int64)
            arr[0] = 1
            return Fraction(0), arr
        t0 = self._t0(i, u)
        if xs is None:
            xs = self._xs(i, u, t0)
        parts = [(off, carr) for off, carr in self.contributions(i, u, xs) if off <= B]
        # every entry is a sum of child entries, so this bounds the result
        bound = sum(int(carr[: B + 1 - off].max()) for off, carr in parts)
        dtype = np.int64 if bound < INT64_SAFE else object
        arr = np.zeros(B + 1, dtype=dtype)
        for off, carr in parts:
            if carr.dtype != arr.dtype:
                carr = carr.astype(arr.dtype)
            arr[off:] += carr[: B + 1 - off]
        return t0, arr

    def top_range(self) -> list[int]:
        r = self.A.dim
        u = (Fraction(0),) * r
        return self._xs(r, u, Fraction(0))


def _memo_partial(args) -> list[int]:
    entries, B, xs = args
    memo = _ShiftMemo(GramMatrix(entries), B)
    r = len(entries)
    _, arr = memo.combine(r, (Fraction(0),) * r, xs)
    return [int(v) for v in arr]


def _memo_table(A: GramMatrix, B: int, workers: int) -> list[int]:
    memo = _ShiftMemo(A, B)
    tops = memo.top_range()
    if workers <= 1 or len(tops) < 2:
        _, arr = memo.table(A.dim, (Fraction(0),) * A.dim)
        return [int(v) for v in arr]
    chunks = [tops[w::workers] for w in range(workers)]
    chunks = [c for c in chunks if c]
    with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
        parts = list(pool.map(_memo_partial, [(A.entries, B, c) for c in chunks]))
    return [sum(col) for col in zip(*parts)]


def theta_series(A: GramMatrix, B: int, workers: int | None = None, method: str = "memo",
                 backend: str = "auto") -> RepTable:
    """``(r_Q(0), ..., r_Q(B))``."""
    if B < 0:
        raise ValueError("bound must be nonnegative")
    w = workers if workers is not None else default_workers()
    if w < 1:
        raise ValueError("workers must be >= 1")
    if method == "memo":
        counts = _memo_table(A, B, w)
    elif method == "enumerate":
        counts = _enumerate_table(A, B, w, backend)
    else:
        raise ValueError(f"unknown method {method!r}")
    return RepTable(A, B, tuple(counts))


# -- naive oracle ------------------------------------------------------------

def oracle_box(A: GramMatrix, B: int) -> list[int]:
    """Half-widths of the smallest integer box containing ``Q(x) <= B``."""
    return _coord_extent(A, 2 * B)


def theta_series_oracle(A: GramMatrix, B: int, max_box: int = ORACLE_MAX_BOX) -> RepTable:
    """Count every point of the bounding box; independent of the enumerators."""
    if B < 0:
        raise ValueError("bound must be nonnegative")
    h = oracle_box(A, B)
    volume = 1
    for v in h:
        volume *= 2 * v + 1
    if volume > max_box:
        raise BoxTooLarge(f"box volume {volume} exceeds {max_box}")
    r = A.dim
    a = np.array(A.entries, dtype=np.int64)
    # vectorise over the trailing coordinates, loop over the leading ones
    k = r
    inner = 1
    while k > 0 and inner * (2 * h[k - 1] + 1) <= 1 << 20:
        k -= 1
        inner *= 2 * h[k] + 1
    axes = [np.arange(-v, v + 1, dtype=np.int64) for v in h[k:]]
    grid = np.stack([g.ravel() for g in np.meshgrid(*axes, indexing="ij")], axis=1) if axes else np.zeros((1, 0), dtype=np.int64)
    a_in = a[k:, k:]
    q_in = np.einsum("ij,jk,ik->i", grid, a_in, grid)
    a_cross = a[k:, :k]
    counts = np.zeros(B + 1, dtype=np.int64)
    for outer in product(*[range(-v, v + 1) for v in h[:k]]):
        xo = np.array(outer, dtype=np.int64)
        q_out = int(xo @ a[:k, :k] @ xo) if k else 0
        total = q_in + 2 * (grid @ (a_cross @ xo)) + q_out
        vals = total[total <= 2 * B] // 2
        counts += np.bincount(vals, minlength=B + 1)[: B + 1]
    return RepTable(A, B, tuple(int(c) for c in counts))


def reptable_to_json(t: RepTable) -> dict:
    return {"bound": t.bound, "counts": list(t.counts)}


def reptable_from_json(obj: dict, form: GramMatrix) -> RepTable:
    counts = tuple(int(c) for c in obj["counts"])
    if len(counts) != obj["bound"] + 1:
        raise ValueError("counts length does not match bound")
    return RepTable(form, int(obj["bound"]), counts)
