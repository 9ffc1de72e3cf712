"""The six Gram matrices with two-dimensional theta spaces, and their known data."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .qform import GramMatrix, validate

__all__ = ["TableRow", "TABLE", "table_row", "table_form"]


@dataclass(frozen=True)
class TableRow:
    k: int
    N: int
    matrix: tuple[tuple[int, ...], ...]
    dual_diag: tuple[int, ...]
    rq1: int
    l_value: Fraction
    c1: Fraction
    c2: Fraction
    leading: tuple[int, ...]
    # det(xI - A), lowest degree first
    char_poly: tuple[int, ...]

    @property
    def form(self) -> GramMatrix:
        return validate(self.matrix)


def _m(rows: str) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(v) for v in r.split()) for r in rows.strip().split(";"))


TABLE: tuple[TableRow, ...] = (
    TableRow(
        2, 5,
        _m("2 1 1 1; 1 2 1 1; 1 1 2 1; 1 1 1 2"),
        (4, 4, 4, 4), 20, Fraction(-2, 5), Fraction(-5), Fraction(25), (1, 20, 30),
        # (x-1)^3 (x-5)
        (5, -16, 18, -8, 1),
    ),
    TableRow(
        2, 13,
        _m("2 0 1 1; 0 4 0 1; 1 0 2 0; 1 1 0 2"),
        (14, 4, 10, 12), 12, Fraction(-2), Fraction(-1), Fraction(13), (1, 12, 14),
        (13, -40, 33, -10, 1),
    ),
    TableRow(
        2, 17,
        _m("2 1 0 0; 1 2 0 1; 0 0 2 1; 0 1 1 4"),
        (12, 14, 10, 6), 8, Fraction(-4), Fraction(-1, 2), Fraction(17, 2), (1, 8, 24, 18),
        (17, -42, 33, -10, 1),
    ),
    TableRow(
        3, 3,
        _m("2 0 0 0 0 1; 0 2 0 0 1 0; 0 0 2 1 0 0; 0 0 1 2 0 1; 0 1 0 0 2 1; 1 0 0 1 1 2"),
        (6, 4, 4, 10, 10, 18), 72, Fraction(-2, 9), Fraction(-9), Fraction(81), (1, 72, 270),
        # (x-1)(x-3)((x-2)^4 - 4(x-2)^2 + 1)
        (3, -52, 125, -120, 55, -12, 1),
    ),
    TableRow(
        4, 5,
        _m("2 1 0 0 0 0 0 0; 1 2 1 0 0 0 0 0; 0 1 2 1 0 0 0 0; 0 0 1 2 2 0 0 0;"
           "0 0 0 2 4 1 0 0; 0 0 0 0 1 2 1 0; 0 0 0 0 0 1 2 1; 0 0 0 0 0 0 1 4"),
        (12, 38, 78, 132, 50, 28, 12, 2), 126, Fraction(2), Fraction(1), Fraction(125), (1, 126, 868),
        (5, -352, 1370, -2092, 1611, -684, 162, -20, 1),
    ),
    TableRow(
        5, 3,
        _m("2 1 0 0 0 0 0 0 0 0; 1 2 0 0 0 0 0 0 0 0; 0 0 2 1 0 0 0 0 0 0;"
           "0 0 1 2 1 0 0 0 0 0; 0 0 0 1 2 1 0 0 0 0; 0 0 0 0 1 2 2 0 0 0;"
           "0 0 0 0 0 2 4 1 0 0; 0 0 0 0 0 0 1 2 1 0; 0 0 0 0 0 0 0 1 2 1;"
           "0 0 0 0 0 0 0 0 1 2"),
        (2, 2, 12, 42, 90, 156, 60, 36, 18, 6), 246, Fraction(2, 3), Fraction(3), Fraction(243),
        (1, 246, 3600),
        # (x-1)(x-3) times the octic with eight positive roots
        (3, -424, 2499, -6150, 8235, -6628, 3341, -1060, 205, -22, 1),
    ),
)


def table_row(k: int, N: int) -> TableRow:
    for row in TABLE:
        if (row.k, row.N) == (k, N):
            return row
    raise KeyError(f"no built-in form for (k, N) = ({k}, {N})")


def table_form(k: int, N: int) -> GramMatrix:
    return table_row(k, N).form
