"""Exact integer/rational arithmetic helpers and integer polynomials.

Rationals are :class:`fractions.Fraction` values; the helpers here only add
the error type, JSON encoding and a few integer utilities shared by the
other modules.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Sequence

Rational = Fraction

__all__ = [
    "Rational",
    "RationalDivisionError",
    "IntPolynomial",
    "rat",
    "rat_add",
    "rat_mul",
    "rat_div",
    "rat_to_json",
    "rat_from_json",
    "rat_str",
    "poly_eval_int",
    "divisors",
    "factorize",
    "is_prime",
    "primes_up_to",
    "is_squarefree",
]


class RationalDivisionError(ZeroDivisionError):
    """Raised when dividing a rational by zero."""


def rat(num: int | Fraction, den: int = 1) -> Fraction:
    if den == 0:
        raise RationalDivisionError("zero denominator")
    return Fraction(num, den)


def rat_add(a: Fraction, b: Fraction) -> Fraction:
    return Fraction(a) + Fraction(b)


def rat_mul(a: Fraction, b: Fraction) -> Fraction:
    return Fraction(a) * Fraction(b)


def rat_div(a: Fraction, b: Fraction) -> Fraction:
    if b == 0:
        raise RationalDivisionError(f"division of {a} by zero")
    return Fraction(a) / Fraction(b)


def rat_to_json(x: Fraction) -> list[str]:
    """Encode as ``["num", "den"]`` decimal strings."""
    x = Fraction(x)
    return [str(x.numerator), str(x.denominator)]


def rat_from_json(obj: Sequence[str]) -> Fraction:
    num, den = obj
    return rat(int(num), int(den))


def rat_str(x: Fraction) -> str:
    """Always ``num/den``, also for integers."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


class IntPolynomial:
    """Univariate polynomial with integer coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[int, ...] = tuple(cs)

    @classmethod
    def from_roots(cls, roots: Iterable[int]) -> "IntPolynomial":
        p = cls([1])
        for r in roots:
            p = p * cls([-r, 1])
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x: int) -> int:
        return poly_eval_int(self, x)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, IntPolynomial):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return IntPolynomial(x + y for x, y in zip(a, b))

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        if self.is_zero() or other.is_zero():
            return IntPolynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPolynomial(out)

    def __repr__(self) -> str:
        return f"IntPolynomial({list(self.coeffs)})"

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for e in range(self.degree, -1, -1):
            c = self.coeffs[e]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                body = ("" if mag == 1 else str(mag)) + ("x" if e == 1 else f"x^{e}")
            terms.append((sign, body))
        head_sign, head = terms[0]
        s = ("-" if head_sign == "-" else "") + head
        for sign, body in terms[1:]:
            s += f" {sign} {body}"
        return s


def poly_eval_int(p: IntPolynomial, x: int) -> int:
    acc = 0
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


# -- small integer utilities ------------------------------------------------

def factorize(n: int) -> dict[int, int]:
    """Trial-division factorization of ``|n|`` (n != 0)."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n: int) -> list[int]:
    """Positive divisors of ``n >= 1`` in increasing order."""
    if n < 1:
        raise ValueError("n must be positive")
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
    return small + large[::-1]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, n + 1, i)))
    return [i for i, v in enumerate(sieve) if v]


def is_squarefree(n: int) -> bool:
    if n == 0:
        return False
    return all(e == 1 for e in factorize(n).values())


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b
