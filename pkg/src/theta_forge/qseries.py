"""Truncated q-expansions with exact coefficients.

A :class:`QSeries` carries the weight, level and character of the space it
is meant to live in; arithmetic refuses to mix different spaces.  Nothing
here checks modularity, only formal coefficients.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .bernoulli import l_value, zeta_value
from .dirichlet import TRIVIAL, QuadCharacter, is_fundamental, is_primitive, parse_character
from .exactnum import divisors, rat_from_json, rat_to_json

__all__ = [
    "QSeries",
    "SpaceMismatch",
    "TruncationError",
    "DecompositionError",
    "eisenstein_general",
    "eisenstein_G",
    "eisenstein_H",
    "hecke_apply",
    "hecke_image_coeff",
    "decompose",
    "qseries_to_json",
    "qseries_from_json",
    "dumps",
]

DEFAULT_TRUNCATION = 100


class SpaceMismatch(ValueError):
    """Series tagged with different (weight, level, character)."""


class TruncationError(ValueError):
    def __init__(self, have: int, need: int):
        super().__init__(f"input truncation {have} too small; need at least {need}")
        self.have = have
        self.need = need


class DecompositionError(ValueError):
    def __init__(self, message: str, n: int | None = None):
        super().__init__(message)
        self.n = n


@dataclass(frozen=True)
class QSeries:
    coeffs: tuple[Fraction, ...]
    weight: int
    level: int
    char: QuadCharacter = TRIVIAL
    # label used on output; "disc-product:D" marks a product of two nontrivial characters
    char_label: str | None = None

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("a series needs at least the constant term")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))
        if self.char_label is None:
            object.__setattr__(self, "char_label", self.char.label)

    @property
    def truncation(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> Fraction:
        return self.coeffs[n]

    def _space(self) -> tuple[int, int, int]:
        return self.weight, self.level, self.char.disc

    def _check(self, other: "QSeries") -> None:
        if self._space() != other._space():
            raise SpaceMismatch(f"cannot combine {self._space()} with {other._space()}")

    def _like(self, coeffs: Iterable[Fraction]) -> "QSeries":
        return QSeries(tuple(coeffs), self.weight, self.level, self.char, self.char_label)

    def __add__(self, other: "QSeries") -> "QSeries":
        self._check(other)
        return self._like(a + b for a, b in zip(self.coeffs, other.coeffs))

    def __sub__(self, other: "QSeries") -> "QSeries":
        self._check(other)
        return self._like(a - b for a, b in zip(self.coeffs, other.coeffs))

    def __neg__(self) -> "QSeries":
        return self._like(-a for a in self.coeffs)

    def __mul__(self, c: int | Fraction) -> "QSeries":
        if isinstance(c, QSeries):
            return NotImplemented
        c = Fraction(c)
        return self._like(c * a for a in self.coeffs)

    __rmul__ = __mul__

    def truncate(self, B: int) -> "QSeries":
        if B > self.truncation:
            raise TruncationError(self.truncation, B)
        return self._like(self.coeffs[: B + 1])

    def __str__(self) -> str:
        terms = []
        for n, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if n == 0 else ("q" if n == 1 else f"q^{n}")
            if n and c == 1:
                terms.append(mono)
            elif n and c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}{'*' if mono else ''}{mono}")
        body = " + ".join(terms).replace("+ -", "- ") if terms else "0"
        return f"{body} + O(q^{self.truncation + 1})"


def from_counts(counts: Sequence[int], weight: int, level: int, char: QuadCharacter) -> QSeries:
    return QSeries(tuple(Fraction(c) for c in counts), weight, level, char)


def _twisted_divisor_sum(n: int, chi: QuadCharacter, psi: QuadCharacter, k: int) -> int:
    return sum(chi(n // d) * psi(d) * d ** (k - 1) for d in divisors(n))


def eisenstein_general(chi: QuadCharacter, psi: QuadCharacter, k: int,
                       B: int = DEFAULT_TRUNCATION) -> QSeries:
    """``E_{k,chi,psi}`` for primitive ``chi`` (mod L) and ``psi`` (mod M)."""
    if chi.parity * psi.parity != (-1) ** k:
        raise ValueError(f"parity mismatch: chi(-1)psi(-1) != (-1)^{k}")
    if k == 2 and chi.is_trivial and psi.is_trivial:
        raise ValueError("E_2 with trivial characters is not modular")
    if k < 1:
        raise ValueError("weight must be positive")
    for c in (chi, psi):
        if not is_primitive(c)[0]:
            raise ValueError(f"character {c.label} is not primitive")
    L, M = chi.modulus, psi.modulus
    if L > 1:
        c0 = Fraction(0)
    elif psi.is_trivial:
        c0 = zeta_value(k) / 2
    else:
        c0 = l_value(psi, k) / 2
    coeffs = [c0] + [Fraction(_twisted_divisor_sum(n, chi, psi, k)) for n in range(1, B + 1)]
    prod = chi * psi
    label = f"disc-product:{prod.disc}" if not chi.is_trivial and not psi.is_trivial else prod.label
    return QSeries(tuple(coeffs), k, L * M, prod, label)


def _quad_char(k: int, N: int) -> QuadCharacter:
    D = (-1) ** k * N
    if not is_fundamental(D):
        raise ValueError(f"(-1)^k N = {D} is not a fundamental discriminant")
    return QuadCharacter(D)


def eisenstein_G(k: int, N: int, B: int = DEFAULT_TRUNCATION) -> QSeries:
    return eisenstein_general(TRIVIAL, _quad_char(k, N), k, B)


def eisenstein_H(k: int, N: int, B: int = DEFAULT_TRUNCATION) -> QSeries:
    return eisenstein_general(_quad_char(k, N), TRIVIAL, k, B)


def hecke_image_coeff(f: QSeries, m: int, n: int, k: int, chi: QuadCharacter) -> Fraction:
    g = gcd(m, n)  # gcd(m, 0) = m
    tot = Fraction(0)
    for d in divisors(g):
        if gcd(d, f.level) != 1:
            continue
        tot += chi(d) * d ** (k - 1) * f.coeffs[m * n // (d * d)]
    return tot


def hecke_apply(f: QSeries, m: int, k: int | None = None, chi: QuadCharacter | None = None,
                B_out: int | None = None) -> QSeries:
    """``f | T_{m,k,chi}`` up to ``q^{B_out}``; needs ``f`` known to ``q^{m B_out}``."""
    if m < 1:
        raise ValueError("m must be positive")
    k = f.weight if k is None else k
    chi = f.char if chi is None else chi
    if B_out is None:
        B_out = f.truncation // m
    if B_out < 0:
        raise ValueError("B_out must be nonnegative")
    if f.truncation < m * B_out:
        raise TruncationError(f.truncation, m * B_out)
    return f._like(hecke_image_coeff(f, m, n, k, chi) for n in range(B_out + 1))


def decompose(f: QSeries, k: int | None = None, N: int | None = None) -> tuple[Fraction, Fraction]:
    """``(c1, c2)`` with ``f = c1 G_{k,N} + c2 H_{k,N}``, checked on every coefficient."""
    from .dims import dim_mk  # dims is independent of this module otherwise

    k = f.weight if k is None else k
    N = f.level if N is None else N
    chi = _quad_char(k, N)
    if dim_mk(k, N, chi) != 2:
        raise DecompositionError(f"dim M_{k}({N}, {chi.label}) != 2")
    if f.truncation < 1:
        raise DecompositionError("need at least the coefficients of q^0 and q^1")
    L = l_value(chi, k)
    c1 = 2 * f.coeffs[0] / L
    c2 = f.coeffs[1] - c1
    B = f.truncation
    G = eisenstein_G(k, N, B)
    H = eisenstein_H(k, N, B)
    for n in range(B + 1):
        if c1 * G.coeffs[n] + c2 * H.coeffs[n] != f.coeffs[n]:
            raise DecompositionError(f"coefficient of q^{n} is not in span(G, H)", n)
    return c1, c2


def qseries_to_json(f: QSeries) -> dict:
    return {
        "weight": f.weight,
        "level": f.level,
        "char": f.char_label,
        "truncation": f.truncation,
        "coeffs": [rat_to_json(c) for c in f.coeffs],
    }


def qseries_from_json(obj: dict) -> QSeries:
    coeffs = tuple(rat_from_json(c) for c in obj["coeffs"])
    if len(coeffs) != obj["truncation"] + 1:
        raise ValueError("coeffs length does not match truncation")
    label = obj["char"]
    return QSeries(coeffs, int(obj["weight"]), int(obj["level"]), parse_character(label), label)


def dumps(obj) -> str:
    """Canonical JSON text used for every emitted document."""
    return json.dumps(obj, separators=(",", ":"), sort_keys=True)
