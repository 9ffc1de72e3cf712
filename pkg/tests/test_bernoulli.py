from fractions import Fraction

import pytest
import sympy

from theta_forge.bernoulli import (
    bernoulli_number, bernoulli_result, gen_bernoulli, gen_bernoulli_poly, l_value, zeta_value,
)
from theta_forge.dirichlet import TRIVIAL, QuadCharacter, is_fundamental

SMALL = [D for D in range(-30, 31) if D != 1 and is_fundamental(D)]
MEDIUM = [D for D in range(-50, 51) if D != 1 and is_fundamental(D)]


def _sympy_gen_bernoulli(D, k):
    N = abs(D)
    chi = QuadCharacter(D)
    x = sympy.Symbol("x")
    Bk = sympy.bernoulli(k, x)
    s = sum(chi(a) * Bk.subs(x, sympy.Rational(a, N)) for a in range(1, N + 1))
    return Fraction(str(sympy.nsimplify(N ** (k - 1) * s)))


def test_examples():
    assert gen_bernoulli(QuadCharacter(13), 2) == 4
    assert gen_bernoulli(QuadCharacter(-4), 1) == Fraction(-1, 2)
    assert gen_bernoulli(QuadCharacter(5), 3) == 0
    assert l_value(QuadCharacter(13), 2) == -2
    assert l_value(QuadCharacter(5), 4) == 2
    assert l_value(QuadCharacter(-3), 3) == Fraction(-2, 9)


def test_table_l_values(row):
    chi = QuadCharacter((-1) ** row.k * row.N)
    v = l_value(chi, row.k)
    assert v == row.l_value
    assert v != 0


@pytest.mark.parametrize("D", SMALL)
def test_polynomial_path_matches_series(D):
    for k in range(0, 11):
        assert gen_bernoulli(QuadCharacter(D), k) == gen_bernoulli_poly(QuadCharacter(D), k)


@pytest.mark.parametrize("D", SMALL[::4])
def test_series_matches_sympy(D):
    for k in range(1, 7):
        assert gen_bernoulli(QuadCharacter(D), k) == _sympy_gen_bernoulli(D, k)


@pytest.mark.parametrize("D", MEDIUM)
def test_vanishing_exactly_on_parity_mismatch(D):
    chi = QuadCharacter(D)
    for k in range(1, 9):
        v = l_value(chi, k)
        assert (v == 0) == (chi.parity != (-1) ** k), (D, k)


def test_k_zero_and_rejections():
    assert gen_bernoulli(QuadCharacter(5), 0) == 0
    with pytest.raises(ValueError):
        gen_bernoulli(TRIVIAL, 2)
    with pytest.raises(ValueError):
        gen_bernoulli(QuadCharacter(-12), 2)
    with pytest.raises(ValueError):
        l_value(QuadCharacter(5), 0)


def test_classical_bernoulli():
    for n in range(0, 20):
        expected = Fraction(str(sympy.bernoulli(n))) if n != 1 else Fraction(-1, 2)
        assert bernoulli_number(n) == expected
    assert zeta_value(2) == Fraction(-1, 12)
    assert zeta_value(4) == Fraction(1, 120)


def test_result_record():
    r = bernoulli_result(QuadCharacter(-3), 3)
    assert r.L == -r.B / 3 == Fraction(-2, 9)
