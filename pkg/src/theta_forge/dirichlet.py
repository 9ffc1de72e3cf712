"""Quadratic Dirichlet characters given by Kronecker symbols.

The trivial character is represented as ``QuadCharacter(1)``: ``(1/d)`` is 1
for every integer ``d`` (including 0), which is exactly the convention for
the character of modulus 1.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exactnum import factorize, is_squarefree

__all__ = [
    "kronecker",
    "QuadCharacter",
    "TRIVIAL",
    "chi_eval",
    "chi_parity",
    "is_primitive",
    "is_fundamental",
    "fundamental_part",
    "parse_character",
]

_TAB2 = (0, 1, 0, -1, 0, -1, 0, 1)  # (2/b) indexed by b mod 8


def kronecker(a: int, b: int) -> int:
    """Kronecker symbol ``(a/b)`` for arbitrary integers."""
    if b == 0:
        return 1 if abs(a) == 1 else 0
    if a % 2 == 0 and b % 2 == 0:
        return 0
    v = 0
    while b % 2 == 0:
        v += 1
        b //= 2
    k = 1 if v % 2 == 0 else _TAB2[a & 7]
    if b < 0:
        b = -b
        if a < 0:
            k = -k
    # b is now odd and positive: Jacobi symbol with sign bookkeeping
    while True:
        if a == 0:
            return k if b == 1 else 0
        v = 0
        while a % 2 == 0:
            v += 1
            a //= 2
        if v % 2:
            k *= _TAB2[b & 7]
        if a & b & 2:
            k = -k
        r = abs(a)
        a = b % r
        b = r


def is_fundamental(D: int) -> bool:
    """True iff ``D`` is the discriminant of a quadratic field."""
    if D in (0, 1):
        return False
    if D % 4 == 1:
        return is_squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


def fundamental_part(D: int) -> int:
    """The fundamental discriminant ``D0`` with ``D = f^2 D0`` (1 for squares)."""
    if D == 0:
        raise ValueError("D must be nonzero")
    m = -1 if D < 0 else 1
    for p, e in factorize(D).items():
        if e % 2:
            m *= p
    return m if m % 4 == 1 else 4 * m


@dataclass(frozen=True)
class QuadCharacter:
    """``d -> (disc/d)``; ``disc == 1`` is the trivial character."""

    disc: int

    def __post_init__(self):
        if self.disc == 0 or self.disc % 4 not in (0, 1):
            raise ValueError(f"discriminant must be nonzero and 0 or 1 mod 4, got {self.disc}")

    @property
    def modulus(self) -> int:
        return abs(self.disc)

    @property
    def is_trivial(self) -> bool:
        return self.disc == 1

    @property
    def parity(self) -> int:
        return -1 if self.disc < 0 else 1

    @property
    def conductor(self) -> int:
        return abs(fundamental_part(self.disc))

    @property
    def label(self) -> str:
        return "trivial" if self.is_trivial else f"disc:{self.disc}"

    def __call__(self, d: int) -> int:
        return kronecker(self.disc, d)

    def __mul__(self, other: "QuadCharacter") -> "QuadCharacter":
        # (D1/d)(D2/d) = (D1 D2/d) for every d
        return QuadCharacter(self.disc * other.disc)

    def __str__(self) -> str:
        return self.label


TRIVIAL = QuadCharacter(1)


def chi_eval(chi: QuadCharacter, d: int) -> int:
    return kronecker(chi.disc, d)


def chi_parity(chi: QuadCharacter) -> int:
    return chi.parity


def is_primitive(chi: QuadCharacter) -> tuple[bool, int]:
    """``(primitive?, conductor)``; the trivial character counts as primitive."""
    if chi.is_trivial:
        return True, 1
    return is_fundamental(chi.disc), chi.conductor


def parse_character(text: str) -> QuadCharacter:
    s = text.strip()
    if s == "trivial":
        return TRIVIAL
    for prefix in ("disc:", "disc-product:"):
        if s.startswith(prefix):
            return QuadCharacter(int(s[len(prefix):]))
    raise ValueError(f"unknown character {text!r}; use 'trivial' or 'disc:D'")
