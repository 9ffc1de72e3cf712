from math import gcd

import pytest
from hypothesis import given, strategies as st

from theta_forge.dirichlet import (
    TRIVIAL, QuadCharacter, chi_eval, chi_parity, is_fundamental, is_primitive, kronecker,
    parse_character,
)
from theta_forge.exactnum import is_squarefree, primes_up_to

FUNDAMENTAL = [D for D in range(-200, 201) if D not in (0, 1) and is_fundamental(D)]


def _fundamental_oracle(D):
    if D % 4 == 1:
        return D != 1 and is_squarefree(abs(D))
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and is_squarefree(abs(m))
    return False


def _legendre_oracle(D, p):
    """``(D/p)`` from the squares mod p, or the 2-adic rule."""
    if p == 2:
        if D % 2 == 0:
            return 0
        return 1 if D % 8 in (1, 7) else -1
    if D % p == 0:
        return 0
    return 1 if D % p in {x * x % p for x in range(1, p)} else -1


def test_examples():
    assert QuadCharacter(13)(13) == 0
    assert QuadCharacter(-4)(-1) == -1
    assert QuadCharacter(13)(2) == -1
    assert QuadCharacter(13)(3) == 1
    assert chi_eval(QuadCharacter(-3), 2) == -1


def test_primitivity():
    assert is_primitive(QuadCharacter(13)) == (True, 13)
    assert is_primitive(QuadCharacter(-4)) == (True, 4)
    ok, cond = is_primitive(QuadCharacter(36))
    assert not ok and cond == 1
    assert is_primitive(QuadCharacter(-12)) == (False, 3)


def test_parity():
    assert chi_parity(QuadCharacter(13)) == 1
    assert chi_parity(QuadCharacter(-3)) == -1
    assert chi_parity(TRIVIAL) == 1


def test_table_parity(row):
    assert chi_parity(QuadCharacter((-1) ** row.k * row.N)) == (-1) ** row.k


def test_fundamental_matches_definition():
    for D in range(-500, 501):
        assert is_fundamental(D) == _fundamental_oracle(D), D


@pytest.mark.parametrize("D", FUNDAMENTAL)
def test_multiplicative_and_periodic(D):
    chi = QuadCharacter(D)
    M = abs(D)
    vals = [chi(a) for a in range(0, 501 + M)]
    for a in range(1, 501):
        assert vals[a + M] == vals[a]
        assert (vals[a] == 0) == (gcd(a, M) != 1)
    for a in range(1, 60):
        for b in range(1, 60):
            assert chi(a * b) == vals[a] * vals[b]


@given(st.sampled_from(FUNDAMENTAL), st.integers(1, 10**6))
def test_multiplicative_random(D, a):
    chi = QuadCharacter(D)
    b = a * 7 + 3
    assert chi(a * b) == chi(a) * chi(b)


@pytest.mark.parametrize("p", primes_up_to(200))
def test_prime_values_against_squares(p):
    for D in FUNDAMENTAL[::3]:
        assert kronecker(D, p) == _legendre_oracle(D, p)


@pytest.mark.parametrize("N", [p for p in primes_up_to(100) if p > 2])
def test_euler_criterion(N):
    D = N if N % 4 == 1 else -N
    chi = QuadCharacter(D)
    for a in range(1, N):
        e = pow(a, (N - 1) // 2, N)
        assert chi(a) == (1 if e == 1 else -1)


def test_zero_and_negative_arguments():
    assert QuadCharacter(5)(0) == 0
    assert TRIVIAL(0) == 1
    assert QuadCharacter(-3)(-2) == QuadCharacter(-3)(-1) * QuadCharacter(-3)(2)


def test_products_and_labels():
    assert (QuadCharacter(-3) * QuadCharacter(-4)).disc == 12
    assert QuadCharacter(5) * TRIVIAL == QuadCharacter(5)
    assert parse_character("disc:-4") == QuadCharacter(-4)
    assert parse_character("trivial") is TRIVIAL or parse_character("trivial") == TRIVIAL
    assert parse_character("disc-product:12").disc == 12
    with pytest.raises(ValueError):
        parse_character("chi13")
    with pytest.raises(ValueError):
        QuadCharacter(3)
