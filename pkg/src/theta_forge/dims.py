"""Cohen-Oesterle dimensions of ``M_k(N, chi)`` for quadratic ``chi`` and ``k >= 2``."""

from __future__ import annotations

from fractions import Fraction

from .dirichlet import QuadCharacter, is_fundamental
from .exactnum import factorize, is_prime

__all__ = [
    "lambda_factor",
    "alpha_beta",
    "nu",
    "mu",
    "dim_mk",
    "dim2_candidates",
    "classify_dim2",
    "quadratic_character",
]


def lambda_factor(r_p: int, s_p: int, p: int) -> int:
    if r_p < 1 or not 0 <= s_p <= r_p:
        raise ValueError("need r_p >= 1 and 0 <= s_p <= r_p")
    if 2 * s_p <= r_p:
        h = r_p // 2
        if r_p % 2 == 0:
            return p ** h + p ** (h - 1)
        return 2 * p ** h
    return 2 * p ** (r_p - s_p)


def alpha_beta(chi: QuadCharacter, N: int) -> tuple[int, int]:
    alpha = sum(chi(x) for x in range(N) if (x * x + 1) % N == 0)
    beta = sum(chi(x) for x in range(N) if (x * x + x + 1) % N == 0)
    return alpha, beta


def nu(k: int) -> Fraction:
    if k % 2:
        return Fraction(0)
    return Fraction(-1, 4) if k % 4 == 2 else Fraction(1, 4)


def mu(k: int) -> Fraction:
    return {0: Fraction(1, 3), 1: Fraction(0), 2: Fraction(-1, 3)}[k % 3]


def _valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def dim_mk(k: int, N: int, chi: QuadCharacter) -> int:
    """``dim M_k(N, chi)``.  Zero when ``chi(-1) != (-1)^k``."""
    if k < 2:
        raise ValueError("only weights k >= 2 are supported")
    if N < 1 or N % chi.conductor:
        raise ValueError(f"conductor of {chi.label} must divide N = {N}")
    if chi.parity != (-1) ** k:
        return 0
    fac = factorize(N) if N > 1 else {}
    f = chi.conductor
    index = Fraction(N)
    lam = 1
    for p, r_p in fac.items():
        index *= 1 + Fraction(1, p)
        lam *= lambda_factor(r_p, _valuation(f, p), p)
    alpha, beta = alpha_beta(chi, N)
    j = 2 - k
    d = Fraction(k - 1, 12) * index + Fraction(lam, 2) - nu(j) * alpha - mu(j) * beta
    if d.denominator != 1 or d < 0:
        raise AssertionError(f"dimension formula gave {d} for k={k}, N={N}, {chi.label}")
    return int(d)


def quadratic_character(k: int, N: int) -> QuadCharacter:
    """``chi_{(-1)^k N}``."""
    return QuadCharacter((-1) ** k * N)


def dim2_candidates() -> list[tuple[int, int]]:
    """Prime ``N`` and ``k >= 2`` with ``(-1)^k N`` fundamental and ``(k-1)(N+1) <= 26``."""
    out = []
    for N in range(2, 26):
        if not is_prime(N):
            continue
        k = 2
        while (k - 1) * (N + 1) <= 26:
            if is_fundamental((-1) ** k * N):
                out.append((k, N))
            k += 1
    return sorted(out, key=lambda kn: (kn[1], kn[0]))


def classify_dim2() -> set[tuple[int, int]]:
    return {(k, N) for k, N in dim2_candidates() if dim_mk(k, N, quadratic_character(k, N)) == 2}
