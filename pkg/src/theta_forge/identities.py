"""Closed formulas for ``r_Q(n)`` in two-dimensional spaces and their checks.

Every ``verify_*`` function compares against enumerated counts only; the
formulas are never checked against each other.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .bernoulli import l_value
from .dims import dim_mk
from .dirichlet import QuadCharacter, is_fundamental
from .exactnum import divisors, factorize, is_prime, primes_up_to
from .lattice import rep_count_shell, theta_series
from .qform import GramMatrix, profile

__all__ = [
    "ClosedForm",
    "closed_form",
    "closed_rq",
    "rq_prime_power",
    "rq_square",
    "IdentityReport",
    "verify_main_identity",
    "verify_conditional",
    "conditional_report",
    "verify_formula",
    "verify_square",
    "verify_conjecture",
    "jacobi_r6",
    "PreconditionError",
]

SQUARE_FACTOR_LIMIT = 10 ** 6


class PreconditionError(ValueError):
    """A verification was requested outside the hypotheses it checks."""


@dataclass(frozen=True)
class ClosedForm:
    k: int
    N: int
    chi: QuadCharacter
    c1: Fraction
    c2: Fraction
    rq1: int


def closed_form(A: GramMatrix, rq1: int | None = None) -> ClosedForm:
    """Closed form for a form with ``det A = N`` in a two-dimensional space."""
    prof = profile(A)
    k, N = prof.weight, prof.det
    if k < 2:
        raise PreconditionError("weight must be at least 2")
    if prof.level != N:
        raise PreconditionError(f"level {prof.level} differs from det {N}")
    D = (-1) ** k * N
    if not is_fundamental(D):
        raise PreconditionError(f"(-1)^k N = {D} is not a fundamental discriminant")
    chi = QuadCharacter(D)
    if dim_mk(k, N, chi) != 2:
        raise PreconditionError(f"dim M_{k}({N}, {chi.label}) != 2")
    if rq1 is None:
        rq1 = rep_count_shell(A, 1)
    c1 = 2 / l_value(chi, k)
    return ClosedForm(k, N, chi, c1, rq1 - c1, rq1)


def _sig(cf: ClosedForm, n: int) -> tuple[int, int]:
    """``sum chi(d) d^{k-1}`` and ``sum chi(n/d) d^{k-1}`` over ``d | n``."""
    s1 = s2 = 0
    for d in divisors(n):
        w = d ** (cf.k - 1)
        s1 += cf.chi(d) * w
        s2 += cf.chi(n // d) * w
    return s1, s2


def closed_rq(cf: ClosedForm, n: int) -> Fraction:
    if n == 0:
        return Fraction(1)
    if n < 0:
        raise ValueError("n must be nonnegative")
    s1, s2 = _sig(cf, n)
    return cf.c1 * s1 + cf.c2 * s2


def rq_prime_power(cf: ClosedForm, p: int, m: int) -> Fraction:
    """``r_Q(p^m)`` from the prime-power specialisations of the closed form."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if m < 0:
        raise ValueError("m must be nonnegative")
    w = p ** (cf.k - 1)
    if cf.N % p == 0:
        return cf.c1 + cf.c2 * w ** m
    e = cf.chi(p)
    ratio = e * w
    if ratio == 1:
        geom = m + 1
    else:
        geom = (1 - ratio ** (m + 1)) // (1 - ratio)
    return (cf.c1 + cf.c2 * e ** m) * geom


def rq_square(cf: ClosedForm, n: int) -> Fraction:
    """``r_Q(n^2)`` as a product over the prime powers dividing ``n``."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > SQUARE_FACTOR_LIMIT:
        raise ValueError(f"n > {SQUARE_FACTOR_LIMIT} is outside the trial-division guard")
    if not is_prime(cf.N):
        raise PreconditionError("the square formula assumes a prime level")
    if cf.rq1 == 0:
        raise PreconditionError("r_Q(1) = 0")
    if n == 1:
        return Fraction(cf.rq1)
    fac = factorize(n)
    m = fac.pop(cf.N, 0)
    val = rq_prime_power(cf, cf.N, 2 * m)
    for p, e in fac.items():
        val *= rq_prime_power(cf, p, 2 * e)
    return val / Fraction(cf.rq1) ** len(fac)


# -- verification against enumeration ----------------------------------------

@dataclass
class IdentityReport:
    name: str
    checked: list[dict] = field(default_factory=list)
    failures: list[dict] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def add(self, passed: bool, **row) -> None:
        row["pass"] = passed
        self.checked.append(row)
        if not passed:
            self.failures.append(row)

    def to_json(self) -> dict:
        def enc(v):
            return str(v) if isinstance(v, Fraction) else v
        return {
            "name": self.name,
            "ok": self.ok,
            "checked": [{k: enc(v) for k, v in r.items()} for r in self.checked],
            "failures": len(self.failures),
            "seconds": round(self.seconds, 3),
        }


def _table(A: GramMatrix, B: int, table: tuple[int, ...] | None, workers: int | None):
    if table is not None and len(table) > B:
        return table
    return theta_series(A, B, workers=workers).counts


def verify_main_identity(A: GramMatrix, p: int, m: int, n_max: int,
                         table: tuple[int, ...] | None = None,
                         workers: int | None = None) -> IdentityReport:
    """``r(1) r(p^m n) == r(p^m) r(n)`` for ``n <= n_max`` prime to ``p``."""
    t = time.perf_counter()
    prof = profile(A)
    chi = QuadCharacter(prof.char_disc)
    if not is_prime(p):
        raise PreconditionError(f"{p} is not prime")
    if prof.level % p == 0:
        raise PreconditionError(f"p = {p} divides the level {prof.level}")
    if m < 1:
        raise PreconditionError("m must be positive")
    if chi(p ** m) != 1:
        raise PreconditionError(f"chi(p^m) = {chi(p ** m)} != 1 for p = {p}, m = {m}")
    pm = p ** m
    r = _table(A, pm * n_max, table, workers)
    rep = IdentityReport(f"main p={p} m={m}")
    for n in range(1, n_max + 1):
        if gcd(n, p) != 1:
            continue
        lhs = r[1] * r[pm * n]
        rhs = r[pm] * r[n]
        rep.add(lhs == rhs, p=p, m=m, n=n, lhs=lhs, rhs=rhs)
    rep.seconds = time.perf_counter() - t
    return rep


def conditional_value(A: GramMatrix, p: int, rq1: int | None = None) -> int:
    prof = profile(A)
    chi = QuadCharacter(prof.char_disc)
    k = prof.weight
    rq1 = rep_count_shell(A, 1) if rq1 is None else rq1
    return rq1 * sum(chi(p ** a) * p ** (a * (k - 1)) for a in range(3))


def verify_conditional(A: GramMatrix, p: int, workers: int | None = None,
                       rq1: int | None = None) -> bool:
    """``r(p^2) == r(1) sum_{a<=2} chi(p^a) p^{a(k-1)}`` by shell enumeration."""
    prof = profile(A)
    if not is_prime(p):
        raise PreconditionError(f"{p} is not prime")
    if prof.level % p == 0:
        raise PreconditionError(f"p = {p} divides the level {prof.level}")
    return rep_count_shell(A, p * p, workers=workers) == conditional_value(A, p, rq1)


def conditional_report(A: GramMatrix, pmax: int, workers: int | None = None) -> IdentityReport:
    """:func:`verify_conditional` for every prime ``p <= pmax`` not dividing the level."""
    t = time.perf_counter()
    prof = profile(A)
    rq1 = rep_count_shell(A, 1, workers=workers)
    rep = IdentityReport("conditional")
    for p in primes_up_to(pmax):
        if prof.level % p == 0:
            continue
        got = rep_count_shell(A, p * p, workers=workers)
        want = conditional_value(A, p, rq1)
        rep.add(got == want, p=p, enumerated=got, predicted=want)
    rep.seconds = time.perf_counter() - t
    return rep


def verify_formula(A: GramMatrix, n_max: int, table: tuple[int, ...] | None = None,
                   workers: int | None = None) -> IdentityReport:
    t = time.perf_counter()
    r = _table(A, n_max, table, workers)
    cf = closed_form(A, rq1=r[1] if n_max >= 1 else None)
    rep = IdentityReport("formula")
    for n in range(1, n_max + 1):
        v = closed_rq(cf, n)
        rep.add(v == r[n], n=n, closed=v, enumerated=r[n])
    rep.seconds = time.perf_counter() - t
    return rep


def verify_square(A: GramMatrix, n_max: int, workers: int | None = None) -> IdentityReport:
    t = time.perf_counter()
    cf = closed_form(A)
    rep = IdentityReport("square")
    for n in range(1, n_max + 1):
        v = rq_square(cf, n)
        e = rep_count_shell(A, n * n, workers=workers)
        rep.add(v == e, n=n, closed=v, enumerated=e)
    rep.seconds = time.perf_counter() - t
    return rep


def verify_conjecture(A: GramMatrix, pmax: int, nmax: int, workers: int | None = None,
                      main_pmax: int = 11) -> tuple[IdentityReport, IdentityReport]:
    """Conditional relation for every prime ``p <= pmax`` not dividing the level,
    then the multiplicative identity with ``m = 2`` for ``p <= min(pmax, main_pmax)``."""
    cond = conditional_report(A, pmax, workers)
    primes = [row["p"] for row in cond.checked]
    t = time.perf_counter()
    main = IdentityReport("main m=2")
    small = [p for p in primes if p <= main_pmax]
    if small:
        table = theta_series(A, max(small) ** 2 * nmax, workers=workers).counts
        for p in small:
            sub = verify_main_identity(A, p, 2, nmax, table=table)
            main.checked.extend(sub.checked)
            main.failures.extend(sub.failures)
    main.seconds = time.perf_counter() - t
    return cond, main


def jacobi_r6(n: int) -> int:
    """Number of representations of ``n`` as a sum of six squares."""
    if n < 1:
        raise ValueError("n must be positive")
    chi = QuadCharacter(-4)
    s1 = sum(chi(d) * d * d for d in divisors(n))
    s2 = sum(chi(n // d) * d * d for d in divisors(n))
    return -4 * s1 + 16 * s2
