"""Generalized Bernoulli numbers ``B_{k,chi}`` and ``L(1-k, chi)``.

The defining identity

    sum_{a=1}^{N-1} chi(a) t e^{at} / (e^{Nt} - 1) = sum_k B_{k,chi} t^k / k!

is expanded with exact truncated power series in ``t``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .dirichlet import QuadCharacter, is_primitive

__all__ = [
    "BernoulliResult",
    "bernoulli_number",
    "gen_bernoulli",
    "gen_bernoulli_poly",
    "l_value",
    "zeta_value",
    "bernoulli_result",
]


def _check_char(chi: QuadCharacter) -> int:
    if chi.is_trivial:
        raise ValueError("generalized Bernoulli numbers need a nontrivial character")
    prim, _ = is_primitive(chi)
    if not prim:
        raise ValueError(f"character {chi.label} is not primitive")
    return chi.modulus


def _series_inverse(c: list[Fraction], n: int) -> list[Fraction]:
    """First ``n`` coefficients of ``1 / sum c_j t^j`` (``c_0 != 0``)."""
    inv = [Fraction(0)] * n
    inv[0] = 1 / c[0]
    for m in range(1, n):
        s = sum(c[j] * inv[m - j] for j in range(1, min(m, len(c) - 1) + 1))
        inv[m] = -s / c[0]
    return inv


@lru_cache(maxsize=None)
def gen_bernoulli(chi: QuadCharacter, k: int) -> Fraction:
    """``B_{k,chi}`` from the defining generating series."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    N = _check_char(chi)
    terms = k + 1
    # (e^{Nt} - 1)/t = sum_j N^{j+1} t^j / (j+1)!
    denom = [Fraction(N ** (j + 1), factorial(j + 1)) for j in range(terms)]
    kernel = _series_inverse(denom, terms)  # t/(e^{Nt}-1)
    vals = [(a, chi(a)) for a in range(1, N) if chi(a)]
    numer = [Fraction(sum(c * a ** j for a, c in vals), factorial(j)) for j in range(terms)]
    coeff = sum(numer[j] * kernel[k - j] for j in range(terms))
    return coeff * factorial(k)


@lru_cache(maxsize=None)
def bernoulli_number(n: int) -> Fraction:
    """Classical ``B_n`` with ``B_1 = -1/2``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return Fraction(1)
    if n > 1 and n % 2:
        return Fraction(0)
    s = sum(comb(n + 1, j) * bernoulli_number(j) for j in range(n))
    return -s / (n + 1)


def _bernoulli_poly(k: int, x: Fraction) -> Fraction:
    return sum(comb(k, j) * bernoulli_number(j) * x ** (k - j) for j in range(k + 1))


def gen_bernoulli_poly(chi: QuadCharacter, k: int) -> Fraction:
    """``N^{k-1} sum_{a=1}^{N} chi(a) B_k(a/N)``; agrees with :func:`gen_bernoulli`."""
    N = _check_char(chi)
    if k == 0:
        return Fraction(0)
    s = sum(chi(a) * _bernoulli_poly(k, Fraction(a, N)) for a in range(1, N + 1))
    return Fraction(N) ** (k - 1) * s


def l_value(chi: QuadCharacter, k: int) -> Fraction:
    """``L(1-k, chi) = -B_{k,chi}/k`` for nontrivial primitive ``chi``."""
    if k < 1:
        raise ValueError("k must be positive")
    return -gen_bernoulli(chi, k) / k


def zeta_value(k: int) -> Fraction:
    """``zeta(1-k) = -B_k/k`` for ``k >= 2``."""
    if k < 2:
        raise ValueError("zeta(1-k) is only supported for k >= 2")
    return -bernoulli_number(k) / k


@dataclass(frozen=True)
class BernoulliResult:
    k: int
    chi: QuadCharacter
    B: Fraction
    L: Fraction


def bernoulli_result(chi: QuadCharacter, k: int) -> BernoulliResult:
    B = gen_bernoulli(chi, k)
    return BernoulliResult(k, chi, B, -B / k)
