import json

import pytest
import sympy
from hypothesis import assume, given, settings, strategies as st

from theta_forge import _kernels
from theta_forge.exactnum import primes_up_to
from theta_forge.lattice import (
    BoxTooLarge, oracle_box, rep_count_shell, reptable_from_json, reptable_to_json,
    theta_series, theta_series_oracle,
)
from theta_forge.qform import FormError, parse_gram, validate
from conftest import GRAM_2_13, random_forms

A13 = parse_gram(GRAM_2_13)
R13 = (1, 12, 14, 48, 36, 56, 56, 84, 70, 156, 48)


@st.composite
def gram_matrices(draw, dims=(2, 4), bound=6):
    r = draw(st.sampled_from(dims))
    m = [[0] * r for _ in range(r)]
    for i in range(r):
        m[i][i] = draw(st.sampled_from(range(2, bound + 1, 2)))
        for j in range(i + 1, r):
            m[i][j] = m[j][i] = draw(st.integers(-bound, bound))
    try:
        return validate(m)
    except FormError:
        assume(False)


def test_examples():
    assert theta_series(A13, 2).counts == (1, 12, 14)
    assert theta_series(validate([[2, 0], [0, 2]]), 2).counts == (1, 4, 4)
    assert rep_count_shell(A13, 1) == 12
    assert rep_count_shell(A13, 4) == 36
    assert rep_count_shell(A13, 0) == 1


def test_table_leading(row):
    B = len(row.leading) - 1
    assert theta_series(row.form, B).counts == row.leading
    assert rep_count_shell(row.form, 1) == row.rq1


def test_oracle_examples():
    assert theta_series_oracle(A13, 10).counts == R13
    assert theta_series_oracle(validate([[2 if i == j else 0 for j in range(6)] for i in range(6)]), 1).counts == (1, 12)
    assert theta_series_oracle(parse_gram("2,1,1,1;1,2,1,1;1,1,2,1;1,1,1,2"), 2).counts == (1, 20, 30)


def test_routes_agree_on_2_13():
    for method in ("memo", "enumerate"):
        assert theta_series(A13, 10, method=method).counts == R13
    assert tuple(rep_count_shell(A13, n) for n in range(11)) == R13
    assert tuple(rep_count_shell(A13, n, backend="python") for n in range(11)) == R13


def test_oracle_guard():
    with pytest.raises(BoxTooLarge):
        theta_series_oracle(A13, 10**6)


@pytest.mark.parametrize("B", [0, 1, 7, 25])
def test_oracle_box_half_widths(B):
    # max |x_j| over the real ellipsoid x^T A x <= 2B is sqrt(2B (A^-1)_jj)
    inv = sympy.Matrix(A13.rows()).inv()
    want = [int(sympy.floor(sympy.sqrt(2 * B * inv[j, j]))) for j in range(4)]
    assert oracle_box(A13, B) == want


@pytest.mark.parametrize("A", random_forms(50), ids=str)
def test_random_forms_against_oracle(A):
    o = theta_series_oracle(A, 15).counts
    assert theta_series(A, 15).counts == o
    assert theta_series(A, 15, method="enumerate").counts == o
    assert theta_series(A, 15, method="enumerate", backend="python").counts == o


@settings(max_examples=40)
@given(gram_matrices(), st.integers(0, 12))
def test_property_oracle(A, B):
    o = theta_series_oracle(A, B).counts
    assert theta_series(A, B).counts == o
    assert o[0] == 1
    assert all(c % 2 == 0 for c in o[1:])


@settings(max_examples=30)
@given(gram_matrices(), st.integers(0, 30))
def test_shell_matches_table(A, n):
    assert rep_count_shell(A, n) == theta_series(A, n).counts[n]


@settings(max_examples=25)
@given(st.permutations(range(4)))
def test_permutation_invariance(perm):
    assert theta_series(A13.permuted(perm), 60).counts == theta_series(A13, 60).counts


@settings(max_examples=10)
@given(st.permutations(range(6)))
def test_permutation_invariance_6(perm):
    A = parse_gram("2,0,0,0,0,1;0,2,0,0,1,0;0,0,2,1,0,0;0,0,1,2,0,1;0,1,0,0,2,1;1,0,0,1,1,2")
    assert theta_series(A.permuted(perm), 30).counts == theta_series(A, 30).counts


def test_worker_count_independence(row):
    B = 30
    one = theta_series(row.form, B, workers=1).counts
    assert theta_series(row.form, B, workers=2).counts == one
    assert theta_series(row.form, min(B, 12), method="enumerate", workers=2).counts == one[:13]
    assert rep_count_shell(row.form, 9, workers=2) == one[9]


def test_env_workers(monkeypatch):
    from theta_forge.lattice import default_workers
    monkeypatch.setenv("THETA_FORGE_WORKERS", "3")
    assert default_workers() == 3
    monkeypatch.setenv("THETA_FORGE_WORKERS", "0")
    with pytest.raises(ValueError):
        default_workers()


@pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="compiled kernels unavailable")
def test_backends_agree_on_shells():
    for p in primes_up_to(23):
        assert rep_count_shell(A13, p * p) == rep_count_shell(A13, p * p, backend="python")


def test_large_shell():
    p = 347
    assert rep_count_shell(A13, p * p) == 12 * (1 + p + p * p)


def test_memo_large_table_matches_shells():
    t = theta_series(A13, 2000).counts
    for n in (1009, 1331, 1999, 2000):
        assert t[n] == rep_count_shell(A13, n)


def test_json_roundtrip():
    t = theta_series(A13, 20)
    text = json.dumps(reptable_to_json(t), separators=(",", ":"), sort_keys=True)
    again = reptable_from_json(json.loads(text), A13)
    assert again == t
    assert json.dumps(reptable_to_json(again), separators=(",", ":"), sort_keys=True) == text
    with pytest.raises(ValueError):
        reptable_from_json({"bound": 3, "counts": [1, 12]}, A13)


def test_negative_bound():
    with pytest.raises(ValueError):
        theta_series(A13, -1)
