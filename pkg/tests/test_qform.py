import json

import pytest
import sympy
from hypothesis import given, strategies as st

from theta_forge.qform import (
    FormError, char_poly, determinant, gram_to_json, inverse, level, parse_gram, profile,
    validate,
)
from conftest import GRAM_2_13, random_forms


def _sympy_level(A):
    inv = sympy.Matrix(A.rows()).inv()
    N = 1
    while True:
        M = N * inv
        if all(v.is_integer for v in M) and all(M[i, i] % 2 == 0 for i in range(A.dim)):
            return N
        N += 1


def test_validate_table_matrix():
    assert validate([[2, 0, 1, 1], [0, 4, 0, 1], [1, 0, 2, 0], [1, 1, 0, 2]]).dim == 4


@pytest.mark.parametrize("m, msg", [
    ([[2, 3], [3, 2]], "positive definite"),
    ([[1, 0], [0, 1]], "odd diagonal"),
    ([[2, 1], [0, 2]], "symmetric"),
    ([[2]], "dimension"),
    ([[2, 0], [0]], "square"),
])
def test_validate_rejects(m, msg):
    with pytest.raises(FormError, match=msg):
        validate(m)


def test_determinant_examples():
    assert determinant(parse_gram(GRAM_2_13)) == 13
    assert determinant(validate([[2, 1], [1, 2]])) == 3


def test_level_examples():
    assert level(parse_gram(GRAM_2_13)) == (13, [14, 4, 10, 12])
    assert level(validate([[2, 0], [0, 2]])) == (4, [2, 2])


def test_char_poly_examples():
    assert char_poly(validate([[2, 0], [0, 2]])).coeffs == (4, -4, 1)
    assert char_poly(parse_gram(GRAM_2_13)).coeffs == (13, -40, 33, -10, 1)


def test_table_profile(row):
    A = row.form
    prof = profile(A)
    assert prof.det == row.N
    assert prof.level == row.N
    assert tuple(prof.dual_diag) == row.dual_diag
    assert prof.weight == row.k
    assert prof.char_disc == (-1) ** row.k * row.N
    assert prof.char_disc % 4 == 1


def test_table_char_poly(row):
    A = row.form
    x = sympy.Symbol("x")
    oracle = sympy.Matrix(A.rows()).charpoly(x).all_coeffs()[::-1]
    cp = char_poly(A)
    assert list(cp.coeffs) == [int(c) for c in oracle]
    assert cp.coeffs == row.char_poly
    assert cp.coeffs[0] == (-1) ** A.dim * row.N
    assert cp.coeffs[-2] == -sum(A[i, i] for i in range(A.dim))


@pytest.mark.parametrize("A", random_forms(25, seed=7), ids=str)
def test_against_sympy(A):
    S = sympy.Matrix(A.rows())
    assert determinant(A) == S.det()
    assert sympy.Matrix(inverse(A)) == S.inv()
    N, dual = level(A)
    assert N == _sympy_level(A)
    # minimality: the level divides any admissible multiple
    assert (2 * determinant(A)) % N == 0
    assert dual == [N * S.inv()[i, i] for i in range(A.dim)]


def test_parse_formats():
    A = parse_gram(GRAM_2_13)
    assert parse_gram(json.dumps(gram_to_json(A))) == A
    assert parse_gram(json.dumps(A.rows())) == A
    with pytest.raises(FormError):
        parse_gram('{"dim": 3, "entries": [[2,1],[1,2]]}')
    with pytest.raises(FormError):
        parse_gram("2,x;1,2")


@given(st.permutations(range(4)))
def test_permutation_preserves_invariants(perm):
    A = parse_gram(GRAM_2_13)
    B = A.permuted(perm)
    assert profile(B).det == 13 and profile(B).level == 13
    assert char_poly(B) == char_poly(A)
