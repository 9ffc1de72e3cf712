from fractions import Fraction

import numpy as np
import pytest

from theta_forge.exactnum import is_prime, primes_up_to
from theta_forge.identities import (
    PreconditionError, closed_form, closed_rq, jacobi_r6, rq_prime_power, rq_square,
    verify_conditional, verify_conjecture, verify_formula, verify_main_identity,
)
from theta_forge.lattice import rep_count_shell, theta_series
from theta_forge.qform import parse_gram, validate
from theta_forge.tables import table_form
from conftest import GRAM_2_13

A13 = parse_gram(GRAM_2_13)


def _six_squares_brute(nmax):
    """Count x in Z^6 with sum x_i^2 = n by convolving two brute-force Z^3 counts."""
    h = int(nmax ** 0.5)
    ax = np.arange(-h, h + 1)
    x, y, z = np.meshgrid(ax, ax, ax, indexing="ij")
    s = (x * x + y * y + z * z).ravel()
    r3 = np.bincount(s[s <= nmax], minlength=nmax + 1)
    return np.convolve(r3, r3)[: nmax + 1]


def test_closed_rq_examples():
    cf = closed_form(A13)
    assert (cf.c1, cf.c2, cf.rq1) == (-1, 13, 12)
    assert closed_rq(cf, 1) == 12
    assert closed_rq(cf, 2) == 14
    assert closed_rq(cf, 13) == 168 == rep_count_shell(A13, 13)
    assert closed_rq(cf, 0) == 1


def test_prime_power_examples():
    cf = closed_form(A13)
    assert rq_prime_power(cf, 13, 2) == 2196 == rep_count_shell(A13, 169)
    assert rq_prime_power(cf, 2, 2) == 36 == rep_count_shell(A13, 4)
    assert rq_prime_power(cf, 7, 0) == 12


def test_prime_power_consistency(row):
    cf = closed_form(row.form)
    for p in primes_up_to(50):
        for m in range(4):
            assert rq_prime_power(cf, p, m) == closed_rq(cf, p ** m)


def test_formula_matches_enumeration(row):
    r = theta_series(row.form, 200).counts
    cf = closed_form(row.form)
    for n in range(1, 201):
        assert closed_rq(cf, n) == r[n]


def test_square_examples():
    cf = closed_form(A13)
    assert rq_square(cf, 1) == 12
    assert rq_square(cf, 6) == rep_count_shell(A13, 36)
    assert rq_square(cf, 26) == rq_prime_power(cf, 13, 2) * rq_prime_power(cf, 2, 2) / 12
    assert rq_square(cf, 26) == rep_count_shell(A13, 676)


def test_square_against_shells():
    cf = closed_form(A13)
    for n in range(1, 31):
        assert rq_square(cf, n) == rep_count_shell(A13, n * n)


def test_square_preconditions():
    cf = closed_form(A13)
    with pytest.raises(ValueError):
        rq_square(cf, 10 ** 6 + 1)
    zero = type(cf)(cf.k, cf.N, cf.chi, cf.c1, Fraction(1) - cf.c1, 0)
    with pytest.raises(PreconditionError):
        rq_square(zero, 2)


def test_closed_form_preconditions():
    with pytest.raises(PreconditionError):
        closed_form(validate([[2, 1], [1, 2]]))  # weight 1
    with pytest.raises(PreconditionError):
        closed_form(validate([[2, 0, 0, 0], [0, 2, 0, 0], [0, 0, 2, 0], [0, 0, 0, 2]]))


@pytest.mark.parametrize("p, m, nmax", [(2, 2, 30), (3, 1, 30), (3, 2, 20)])
def test_main_identity_2_13(p, m, nmax):
    rep = verify_main_identity(A13, p, m, nmax)
    assert rep.ok and len(rep.checked) == sum(1 for n in range(1, nmax + 1) if n % p)


def test_main_identity_2_5():
    assert verify_main_identity(table_form(2, 5), 2, 2, 20).ok


def test_main_identity_all(row):
    for p in (2, 3, 5, 7, 11):
        if row.N % p:
            assert verify_main_identity(row.form, p, 2, 50).ok


def test_main_identity_preconditions():
    with pytest.raises(PreconditionError):
        verify_main_identity(A13, 13, 2, 10)
    with pytest.raises(PreconditionError):
        verify_main_identity(A13, 2, 1, 10)  # chi(2) = -1
    with pytest.raises(PreconditionError):
        verify_main_identity(A13, 4, 2, 10)


def test_main_identity_reports_failures():
    t = list(theta_series(A13, 4 * 10).counts)
    t[4 * 7] += 2
    rep = verify_main_identity(A13, 2, 2, 10, table=tuple(t))
    assert not rep.ok and [f["n"] for f in rep.failures] == [7]


def test_conditional():
    assert verify_conditional(A13, 2)
    assert verify_conditional(A13, 3)
    with pytest.raises(PreconditionError):
        verify_conditional(A13, 13)


def test_conjecture_run():
    cond, main = verify_conjecture(A13, 47, 20)
    assert cond.ok and main.ok
    assert [r["p"] for r in cond.checked] == [p for p in primes_up_to(47) if p != 13]
    cond, main = verify_conjecture(A13, 1, 20)
    assert not cond.checked and not main.checked


def test_jacobi_examples():
    assert jacobi_r6(1) == 12
    assert jacobi_r6(2) == 60
    assert jacobi_r6(4) == 252


def test_jacobi_against_brute_force():
    brute = _six_squares_brute(60)
    for n in range(1, 61):
        assert jacobi_r6(n) == brute[n]


def test_jacobi_against_lattice():
    six = validate([[2 if i == j else 0 for j in range(6)] for i in range(6)])
    t = theta_series(six, 40).counts
    assert all(jacobi_r6(n) == t[n] for n in range(1, 41))
