"""Gram matrices of positive-definite even integral quadratic forms.

``Q(x) = x^T A x / 2`` for a symmetric integer matrix ``A`` with even
diagonal.  Everything here is exact: determinants by Bareiss elimination,
inverses as ``adj(A) / det(A)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .exactnum import IntPolynomial, divisors

__all__ = [
    "FormError",
    "GramMatrix",
    "FormProfile",
    "validate",
    "determinant",
    "bareiss_det",
    "inverse",
    "adjugate",
    "level",
    "char_poly",
    "profile",
    "parse_gram",
    "gram_to_json",
]


class FormError(ValueError):
    """Input matrix is not the Gram matrix of an even positive form."""


def bareiss_det(rows: Sequence[Sequence[int]]) -> int:
    """Fraction-free determinant of a square integer matrix."""
    m = [list(map(int, r)) for r in rows]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                # exact by Sylvester's identity
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


@dataclass(frozen=True)
class GramMatrix:
    """A validated Gram matrix; construct through :func:`validate`."""

    entries: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.entries)

    @property
    def weight(self) -> int:
        return self.dim // 2

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def rows(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def value(self, x: Sequence[int]) -> int:
        """``Q(x)``."""
        n = self.dim
        tot = 0
        for i in range(n):
            xi = x[i]
            if xi == 0:
                continue
            row = self.entries[i]
            tot += xi * sum(row[j] * x[j] for j in range(n))
        return tot // 2

    def permuted(self, perm: Sequence[int]) -> "GramMatrix":
        """Gram matrix of the form with coordinates reordered by ``perm``."""
        return GramMatrix(tuple(tuple(self.entries[p][q] for q in perm) for p in perm))

    @cached_property
    def det(self) -> int:
        return bareiss_det(self.entries)

    def __str__(self) -> str:
        return ";".join(",".join(str(v) for v in r) for r in self.entries)


def validate(matrix: Sequence[Sequence[int]]) -> GramMatrix:
    rows = [list(r) for r in matrix]
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise FormError("matrix must be square and non-empty")
    try:
        ent = tuple(tuple(int(v) for v in r) for r in rows)
    except (TypeError, ValueError) as exc:
        raise FormError(f"non-integer entry: {exc}") from None
    if any(ent[i][j] != rows[i][j] for i in range(n) for j in range(n)):
        raise FormError("entries must be integers")
    for i in range(n):
        for j in range(i + 1, n):
            if ent[i][j] != ent[j][i]:
                raise FormError(f"not symmetric at ({i},{j})")
    for i in range(n):
        if ent[i][i] % 2:
            raise FormError(f"odd diagonal entry {ent[i][i]} at position {i}")
    for k in range(1, n + 1):
        minor = bareiss_det([r[:k] for r in ent[:k]])
        if minor <= 0:
            raise FormError(f"not positive definite: leading minor {k} is {minor}")
    if n % 2:
        raise FormError(f"odd dimension {n}; theta series here need even rank")
    return GramMatrix(ent)


def determinant(A: GramMatrix) -> int:
    return A.det


def adjugate(A: GramMatrix) -> list[list[int]]:
    inv = inverse(A)
    d = A.det
    out = [[x * d for x in r] for r in inv]
    assert all(x.denominator == 1 for r in out for x in r)
    return [[int(x) for x in r] for r in out]


def inverse(A: GramMatrix) -> list[list[Fraction]]:
    """Exact inverse by Gauss-Jordan over the rationals."""
    n = A.dim
    m = [[Fraction(v) for v in r] + [Fraction(int(i == j)) for j in range(n)]
         for i, r in enumerate(A.entries)]
    for c in range(n):
        p = next(i for i in range(c, n) if m[i][c] != 0)
        m[c], m[p] = m[p], m[c]
        piv = m[c][c]
        m[c] = [v / piv for v in m[c]]
        for i in range(n):
            if i != c and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return [r[n:] for r in m]


def _dual_ok(inv: list[list[Fraction]], N: int) -> bool:
    n = len(inv)
    for i in range(n):
        for j in range(n):
            v = inv[i][j] * N
            if v.denominator != 1:
                return False
        if (inv[i][i] * N).numerator % 2:
            return False
    return True


def level(A: GramMatrix) -> tuple[int, list[int]]:
    """Minimal ``N`` with ``N A^{-1}`` integral and even on the diagonal.

    Returns ``(N, diagonal of N A^{-1})``.  ``N`` always divides ``2 det A``.
    """
    inv = inverse(A)
    for N in divisors(2 * A.det):
        if _dual_ok(inv, N):
            return N, [int(inv[i][i] * N) for i in range(A.dim)]
    raise AssertionError("2*det(A) must satisfy the level condition")


def char_poly(A: GramMatrix) -> IntPolynomial:
    """``det(xI - A)`` by Faddeev-LeVerrier; every division is exact."""
    n = A.dim
    a = A.entries
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    M = [[0] * n for _ in range(n)]  # M_0 = 0
    c = 1
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        M = [[sum(a[i][t] * M[t][j] for t in range(n)) + (c if i == j else 0)
              for j in range(n)] for i in range(n)]
        AM_trace = sum(a[i][t] * M[t][i] for i in range(n) for t in range(n))
        num = -AM_trace
        if num % k:
            raise AssertionError("non-exact Faddeev-LeVerrier step")
        c = num // k
        coeffs[n - k] = c
    return IntPolynomial(coeffs)


@dataclass(frozen=True)
class FormProfile:
    det: int
    level: int
    dual_diag: tuple[int, ...]
    weight: int
    char_disc: int


def profile(A: GramMatrix) -> FormProfile:
    N, dd = level(A)
    k = A.weight
    disc = (-1) ** k * A.det
    assert disc % 4 in (0, 1)
    return FormProfile(A.det, N, tuple(dd), k, disc)


def parse_gram(text: str) -> GramMatrix:
    """Parse ``"2,0,1,1;0,4,0,1;..."`` or a JSON object/array literal."""
    s = text.strip()
    if s.startswith("{") or s.startswith("["):
        obj = json.loads(s)
        entries = obj["entries"] if isinstance(obj, dict) else obj
        if isinstance(obj, dict) and "dim" in obj and obj["dim"] != len(entries):
            raise FormError("dim does not match entries")
        return validate(entries)
    try:
        rows = [[int(v) for v in r.split(",")] for r in s.split(";") if r.strip()]
    except ValueError as exc:
        raise FormError(f"cannot parse matrix {text!r}: {exc}") from None
    return validate(rows)


def gram_to_json(A: GramMatrix) -> dict:
    return {"dim": A.dim, "entries": A.rows()}
