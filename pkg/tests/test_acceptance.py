"""End-to-end acceptance checks, one verdict line per guarantee.

Each test covers one headline guarantee of the package at its stated
tolerance and runtime budget, printing a single PASS/FAIL line (visible
under pytest -s; pytest -v shows the per-test verdict either way).
Exact identities are compared with ==; analytic constants carry the
tolerance they were pinned with.
"""

import time
from fractions import Fraction

import sympy

from triplesieve import (
    Form,
    UnimodularMatrix,
    a_q,
    alpha_min_for_R,
    build_sequence,
    coset_table,
    count_zero_locus,
    delta0,
    disjointness_check,
    distribution_probe,
    enumerate_ball,
    estimate_delta,
    eta,
    greaves_threshold,
    is_squarefree,
    local_density,
    modular_generators,
    optimize_m,
    project_group,
    s1,
    s4,
    s4_bound,
    s4_closed_form,
    sample_words,
    saturation_R,
    schottky_generators,
    sl2_order,
    strong_approx_check,
    two_path_counts,
)

I2 = UnimodularMatrix(1, 0, 0, 1)
MOD = modular_generators()


def _verdict(label, body):
    t0 = time.perf_counter()
    try:
        body()
    except BaseException:
        print(f"FAIL {label}")
        raise
    print(f"PASS {label} ({time.perf_counter() - t0:.2f}s)")


def odd_primes(bound):
    return list(sympy.primerange(3, bound + 1))


def test_01_delta0_pins():
    def body():
        assert abs(delta0(2, greaves_threshold()) - 0.983994188) < 5e-6
        assert abs(delta0(4, 0.1483334) - 0.995472) < 1e-5
        assert abs(delta0(6, 0.09980986) - 0.996263) < 1e-5

    _verdict("delta0 quadratic-root pins", body)


def test_02_saturation_numbers():
    def body():
        t0 = time.perf_counter()
        _, m_area = optimize_m(Fraction(5, 32), 4)
        _, m_prod = optimize_m(Fraction(5, 48), 5)
        assert 17.5 < m_area < 18.0 and saturation_R(Fraction(5, 32), 4) == 18
        assert 25.4 < m_prod < 26.0 and saturation_R(Fraction(5, 48), 5) == 26
        assert saturation_R(Fraction(7, 48), 4) == 19
        assert saturation_R(Fraction(7, 72), 5) == 27
        assert time.perf_counter() - t0 < 1.0

    _verdict("saturation numbers via sieve-dimension optimization", body)


def test_03_minimal_alpha_levels():
    def body():
        t0 = time.perf_counter()
        assert abs(alpha_min_for_R(4, 18) - 0.14833) < 1e-4
        assert abs(alpha_min_for_R(5, 26) - 0.09981) < 1e-4
        assert time.perf_counter() - t0 < 5.0

    _verdict("minimal distribution levels for target saturation", body)


def test_04_weighted_character_sum_vanishes():
    def body():
        t0 = time.perf_counter()
        for p in odd_primes(97):
            omegas = sample_words(MOD, 20, seed=p)
            forms = [Form.X, Form.Y] + ([Form.Z] if p % 4 == 1 else [])
            for f in forms:
                for om in omegas:
                    assert s1(p, f, om).value == 0
        assert time.perf_counter() - t0 < 30.0

    _verdict("weighted character sum vanishes exactly", body)


def test_05_twisted_sum_closed_forms():
    def body():
        t0 = time.perf_counter()
        for p in odd_primes(31):
            omegas = sample_words(MOD, 5, seed=p)
            pairs = [(k, l) for k in range(p) for l in range(p) if (k, l) != (0, 0)]
            for om in omegas:
                for k, l in pairs:
                    assert s4(p, Form.X, k, l, om).value == s4_closed_form(p, Form.X, k, l, om)
                    assert s4(p, Form.Y, k, l, om).value == s4_closed_form(p, Form.Y, k, l, om)
                    assert abs(s4(p, Form.Z, k, l, om).value) <= s4_bound(p, Form.Z, k, l, om)
        assert time.perf_counter() - t0 < 60.0

    _verdict("twisted sums match closed forms, hypotenuse bound holds", body)


def test_06_coset_vanishing_densities():
    def body():
        for p in odd_primes(97):
            for f in (Form.X, Form.Y, Form.Z):
                rep = local_density(f, p)
                assert rep.match
                if f is Form.Z and p % 4 == 3:
                    assert rep.measured == 0
                else:
                    assert rep.measured == Fraction(2, p + 1)

    _verdict("coset vanishing densities exact", body)


def test_07_disjointness_and_two_path():
    def body():
        for p in odd_primes(97):
            assert disjointness_check(p)
        for ball in (enumerate_ball(MOD, 60.0), enumerate_ball(schottky_generators(), 500.0)):
            for p in (3, 5, 7, 11, 13):
                direct, split = two_path_counts(ball, p)
                assert direct == split

    _verdict("coordinate disjointness and census two-path agreement", body)


def test_08_counting_and_structure():
    def body():
        t0 = time.perf_counter()
        for p in odd_primes(97):
            omegas = [I2] + sample_words(MOD, 2, seed=p)
            forms = [Form.X, Form.Y] + ([Form.Z] if p % 4 == 1 else [])
            for f in forms:
                for om in omegas:
                    assert count_zero_locus(f, p, om) == 2 * p - 1
        for q in range(2, 3001):
            if not is_squarefree(q):
                continue
            table = coset_table(q)
            product = 1
            for p in sympy.factorint(q):
                product *= eta(p)
            assert table.index == eta(q) == product == len(set(table.reps))
        gens = [g for g in MOD.gens]
        for p in odd_primes(50):
            assert len(project_group(gens, p)) == sl2_order(p) == p * (p * p - 1)
            assert strong_approx_check(gens, p)
        assert time.perf_counter() - t0 < 120.0

    _verdict("zero-locus counts, coset CRT glue, strong approximation", body)


def test_09_growth_exponent_sanity():
    def body():
        t0 = time.perf_counter()
        lattice = estimate_delta(MOD, [125.0, 250.0, 500.0, 1000.0])
        assert 0.9 <= lattice.delta_hat <= 1.05
        thin = estimate_delta(schottky_generators(), [62.5, 125, 250, 500, 1000, 2000, 4000])
        assert thin.delta_hat < 1
        assert abs(thin.delta_hat - 0.366) < 0.03
        assert time.perf_counter() - t0 < 300.0

    _verdict("growth exponents: lattice near 1, free pair thin", body)


def test_10_sequence_mass_accounting():
    def body():
        builds = [
            (MOD, Form.Z, 24),
            (MOD, Form.AREA, 16),
            (MOD, Form.PRODUCT, 12),
            (schottky_generators(), Form.Z, 64),
        ]
        for gens, f, size in builds:
            seq = build_sequence(gens, float(size), float(size), f)
            assert seq.total_mass() == seq.chi
            mass, main, remainder = a_q(seq, 1)
            assert mass == seq.chi and main == seq.chi and remainder == 0
            if f is Form.Z:
                for q in (3, 7, 11):
                    assert a_q(seq, q)[1] == 0

    _verdict("sequence mass identities and density-table zeros", body)


def test_11_remainder_ratio_trend():
    def body():
        ratios = []
        for size in (16, 24, 32):
            seq = build_sequence(MOD, float(size), float(size), Form.Z)
            total, chi, ratio = distribution_probe(seq, 0.15)
            ratios.append(ratio)
            print(f"  ball size {size}: remainder ratio = {float(ratio):.3e}")
        assert all(b <= a for a, b in zip(ratios, ratios[1:]))

    _verdict("remainder mass ratio non-increasing across ball sizes", body)
