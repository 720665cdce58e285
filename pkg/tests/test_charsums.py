"""Exactness checks for rho, Xi, and the S-sums, against brute-force oracles."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from triplesieve.charsums import (
    coordinate_after,
    count_zero_locus,
    disjointness_check,
    local_weight,
    orbit_divisibility_count,
    rho,
    s1,
    s2,
    s3_direct,
    s3_factorization_check,
    s4,
    s4_bound,
    s4_closed_form,
    s5,
    xi,
)
from triplesieve.gl2 import Form, UnimodularMatrix
from triplesieve.groups import enumerate_ball, modular_generators, sample_words

I2 = UnimodularMatrix.identity()
OMEGAS = sample_words(modular_generators(), 8, seed=20260816)


def test_rho_and_xi_basics():
    assert rho(5) == Fraction(9, 25)
    assert rho(1) == 1
    assert rho(15) == rho(3) * rho(5)
    assert local_weight(7).value == Fraction(13, 49)
    assert xi(5, 10) == Fraction(16, 25)
    assert xi(5, 7) == Fraction(-9, 25)
    assert xi(1, 42) == 0
    assert rho(6) == Fraction(5, 12)  # rho itself is fine at 2; the S-sums are not
    with pytest.raises(ValueError):
        rho(9)  # not squarefree


@given(st.integers(-1000, 1000))
def test_xi_multiplicative(n):
    assert xi(15, n) == xi(3, n) * xi(5, n)
    assert xi(105, n) == xi(3, n) * xi(5, n) * xi(7, n)


def test_zero_locus_counts():
    assert count_zero_locus(Form.Z, 5, I2) == 9
    assert count_zero_locus(Form.Y, 7, I2) == 13
    for w in OMEGAS[:5]:
        assert count_zero_locus(Form.X, 11, w) == 21
    with pytest.raises(ValueError):
        count_zero_locus(Form.Z, 7, I2)  # 7 = 3 mod 4 inadmissible


def test_s1_vanishes():
    assert s1(5, Form.Z, I2).value == 0
    assert s1(13, Form.X, OMEGAS[3]).value == 0
    assert s1(1, Form.Y, I2).value == 0
    assert s1(15, Form.Y, OMEGAS[1]).value == 0  # composite via multiplicativity
    for p in (3, 7, 11, 19, 23):
        for w in OMEGAS:
            assert s1(p, Form.X, w).value == 0
            assert s1(p, Form.Y, w).value == 0
    for p in (5, 13, 17, 29):
        for w in OMEGAS:
            assert s1(p, Form.Z, w).value == 0


def test_s2_value_and_multiplicativity():
    assert s2(5, Form.Z, I2, I2).value == Fraction(144, 625)
    assert s2(1, Form.X, I2, I2).value == 0
    w = OMEGAS[2]
    assert s2(15, Form.X, I2, w).value == s2(3, Form.X, I2, w).value * s2(5, Form.X, I2, w).value
    assert abs(s2(35, Form.Y, OMEGAS[0], OMEGAS[1]).value) <= 1


def brute_s4_fractions(p, f, k, l, omega):
    """Definition-level oracle: group the grid by m = ck+dl and collapse the
    unit-root sum with sum_{m != 0} e_p(-m) = -1 (no histogram shortcuts)."""
    by_m = [Fraction(0)] * p
    for c in range(p):
        for d in range(p):
            by_m[(c * k + d * l) % p] += xi(p, coordinate_after(f, c, d, omega))
    if (k % p, l % p) == (0, 0):
        total = by_m[0]
    else:
        rest = by_m[1]
        for m in range(2, p):
            assert by_m[m] == rest
        total = by_m[0] - rest
    return total / (p * p)


@pytest.mark.parametrize("p", [3, 5, 7])
@pytest.mark.parametrize("f", [Form.X, Form.Y, Form.Z])
def test_s4_matches_definition_oracle(p, f):
    for w in OMEGAS[:3]:
        for k in range(p):
            for l in range(p):
                assert s4(p, f, k, l, w).value == brute_s4_fractions(p, f, k, l, w)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_s4_closed_form_xy(p):
    for f in (Form.X, Form.Y):
        for w in OMEGAS[:5]:
            for k in range(p):
                for l in range(p):
                    if k == 0 and l == 0:
                        continue
                    assert s4(p, f, k, l, w).value == s4_closed_form(p, f, k, l, w)


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_s4_z_bound_and_value(p):
    for w in OMEGAS[:5]:
        for k in range(p):
            for l in range(p):
                if k == 0 and l == 0:
                    continue
                v = s4(p, Form.Z, k, l, w).value
                assert abs(v) <= s4_bound(p, Form.Z, k, l, w)
                assert v == s4_closed_form(p, Form.Z, k, l, w)


def test_s4_degenerate_and_conventions():
    assert s4(5, Form.Y, 0, 0, I2).value == 0  # reduces to S1
    assert s4(1, Form.Y, 1, 1, I2).value == 1  # empty product
    assert s5(1, Form.Y, 1, 1, I2, I2).value == 1
    # multiplicativity of s4 over coprime primes
    w = OMEGAS[4]
    assert s4(15, Form.X, 2, 7, w).value == s4(3, Form.X, 2, 7, w).value * s4(5, Form.X, 2, 7, w).value


def test_s5_trivial_bound():
    for p in (5, 7):
        for k in range(p):
            for l in range(p):
                assert abs(s5(p, Form.Y, k, l, OMEGAS[0], OMEGAS[1]).value) <= 1


def test_s3_factorization_same_prime():
    for p in (5, 7):
        assert s3_factorization_check(p, p, Form.Y, 2, 3, OMEGAS[0], OMEGAS[1])
        assert s3_direct(p, p, Form.Y, 2, 3, OMEGAS[0], OMEGAS[1]) == s5(
            p, Form.Y, 2, 3, OMEGAS[0], OMEGAS[1]
        ).value


def test_s3_factorization_coprime():
    d = s3_direct(3, 5, Form.X, 1, 2, OMEGAS[0], OMEGAS[1])
    assert d == s4(3, Form.X, 1, 2, OMEGAS[0]).value * s4(5, Form.X, 1, 2, OMEGAS[1]).value
    assert s3_factorization_check(3, 5, Form.X, 1, 2, OMEGAS[0], OMEGAS[1])


def test_s3_factorization_mixed_moduli():
    rng = random.Random(3)
    for _ in range(10):
        k, l = rng.randrange(105), rng.randrange(105)
        w1, w2 = rng.choice(OMEGAS), rng.choice(OMEGAS)
        assert s3_factorization_check(15, 35, Form.X, k, l, w1, w2)


def test_s3_degenerate_rejected():
    with pytest.raises(ValueError):
        s3_direct(1, 1, Form.X, 0, 0, I2, I2)


def test_disjointness_small_and_exhaustive():
    # (c,d) = (1,2): x=3, y=4, z=5; only z vanishes mod 5
    x, y, z = 3, 4, 5
    assert (x % 5 == 0) + (y % 5 == 0) + (z % 5 == 0) == 1
    for p in (3, 5, 7, 11, 13, 17, 97):
        assert disjointness_check(p)
    with pytest.raises(ValueError):
        disjointness_check(2)


def test_orbit_divisibility_counts():
    ball = enumerate_ball(modular_generators(), 30)
    n = len(ball)
    count, main, ratio = orbit_divisibility_count(ball, Form.Z, 1)
    assert count == n and main == n and ratio == 1.0
    count, main, ratio = orbit_divisibility_count(ball, Form.Z, 5)
    assert main == Fraction(2 * n, 6)
    assert 0.5 <= ratio <= 2.0  # pinned regression band
    # z is never 0 mod a 3-mod-4 prime on the orbit
    count, main, ratio = orbit_divisibility_count(ball, Form.Z, 7)
    assert count == 0 and main == 0 and ratio == 0.0


def test_s_sums_reject_even_or_squarefull_moduli():
    with pytest.raises(ValueError):
        s1(2, Form.X, I2)
    with pytest.raises(ValueError):
        s4(9, Form.X, 1, 1, I2)
    with pytest.raises(ValueError):
        s1(7, Form.Z, I2)  # z needs p = 1 mod 4
