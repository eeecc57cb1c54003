"""Gaussian-prime density sums, the quarter-circle main term, and the
annulus decomposition of the box sum."""

import math

import numpy as np
import pytest

from gbv import (
    CapacityError,
    ValidationError,
    WorkerPool,
    constant_c,
    density_report,
    density_sum,
    fi_compare,
    geometric_decomposition_check,
    is_prime,
    lambda_,
    parse_spec_string,
    theorem14_condition,
    theta,
)
from gbv.density import chi4
from gbv.moduli import eval_factors, eval_poly, iter_box, validate_spec

SPEC12 = parse_spec_string("k=1 ell=2 pairs=1:2")
SPEC23 = validate_spec(2, 3, [(1, 2), (2, 3)])


def test_theorem14_condition_examples():
    chain = validate_spec(3, 4, [(1, 2), (2, 3), (3, 4)])
    assert theorem14_condition(chain)
    cycle = validate_spec(3, 3, [(1, 2), (2, 3), (3, 1)])
    assert not theorem14_condition(cycle)
    assert theorem14_condition(SPEC12)  # single pair, vacuous
    disjoint = validate_spec(2, 4, [(1, 2), (3, 4)])
    assert theorem14_condition(disjoint)


def test_chi4_pattern():
    assert [chi4(n) for n in range(8)] == [0, 1, 0, -1, 0, 1, 0, -1]


def test_theta_frozen_values(small_tables):
    assert theta(1, small_tables) == pytest.approx(1.0)
    assert theta(3, small_tables) == pytest.approx(2.0 / 3.0)
    assert theta(5, small_tables) == pytest.approx(4.0 / 3.0)
    assert theta(2, small_tables) == pytest.approx(1.0)
    assert theta(15, small_tables) == pytest.approx(8.0 / 9.0)


def test_theta_dominates_totient_ratio(small_tables):
    """Each local factor is at least 1 - 1/p, so theta(l) >= phi(l)/l."""
    from gbv import totient

    for ell in range(1, 200):
        assert theta(ell, small_tables) >= totient(small_tables, ell) / ell - 1e-12


def test_constant_c_truncation_three(small_tables):
    value, tail = constant_c(3, small_tables)
    # p = 2 contributes factor 1, p = 3 contributes 1 + 1/8
    assert value == pytest.approx(9.0 / 8.0, abs=1e-15)
    assert tail == pytest.approx(2.0 / (3.0 * math.log(3.0)), abs=1e-15)


def test_constant_c_converges(tables):
    v5, t5 = constant_c(10**5, tables)
    v6, t6 = constant_c(10**6, tables)
    assert abs(v6 - v5) < t5
    assert t6 < 1e-5


def brute_density(spec, Q, tables, with_mu):
    total = 0.0
    for t in iter_box(spec, Q):
        prod = 1.0
        for f in eval_factors(spec, t):
            prod *= lambda_(tables, f)
        if prod == 0.0:
            continue
        if with_mu:
            factors = eval_factors(spec, t)
            if not all(is_prime(tables, f) for f in factors):
                continue
            if len(set(factors)) != len(factors):
                continue
        total += prod
    return total


def test_density_frozen_small_boxes(small_tables):
    rep = density_report(SPEC12, 3, small_tables)
    expect_sta = math.log(2) + 2 * math.log(41) + 2 * math.log(61)
    expect_raw = 2 * math.log(41) + 2 * math.log(61)
    assert rep.sta_sum == pytest.approx(expect_sta, abs=1e-12)
    assert rep.raw_sum == pytest.approx(expect_raw, abs=1e-12)
    assert rep.normalized == pytest.approx(expect_sta * math.log(3) / 9, abs=1e-12)
    assert rep.condition_holds

    rep2 = density_report(SPEC12, 2, small_tables)
    assert rep2.sta_sum == pytest.approx(math.log(2) + 2 * math.log(5), abs=1e-12)
    assert rep2.raw_sum == 0.0


def test_density_frozen_two_factor_box(small_tables):
    rep = density_report(SPEC23, 3, small_tables)
    l2, l41, l61 = math.log(2), math.log(41), math.log(61)
    assert rep.sta_sum == pytest.approx(
        (l2 + l41) ** 2 + (l41 + l61) ** 2 + l61**2, abs=1e-10
    )
    assert rep.raw_sum == pytest.approx(2 * l41 * l61, abs=1e-12)


def test_density_brute_oracle(small_tables):
    specs = [
        SPEC12,
        SPEC23,
        validate_spec(2, 3, [(2, 1), (3, 2)]),  # reversed pair order
        validate_spec(2, 4, [(1, 3), (2, 4)]),
    ]
    for spec in specs:
        for Q in (2, 3, 4.5):
            for with_mu in (False, True):
                got = density_sum(spec, Q, small_tables, with_mu)
                want = brute_density(spec, Q, small_tables, with_mu)
                assert got == pytest.approx(want, abs=1e-9), (spec, Q, with_mu)


def test_density_pool_identical(small_tables):
    with WorkerPool(small_tables, 1) as p1, WorkerPool(small_tables, 4) as p4:
        for with_mu in (False, True):
            a = density_sum(SPEC23, 5, small_tables, with_mu, p1)
            b = density_sum(SPEC23, 5, small_tables, with_mu, p4)
            assert a == b
            # the unpooled path may associate differently; only near-equal
            c = density_sum(SPEC23, 5, small_tables, with_mu)
            assert c == pytest.approx(a, rel=1e-12)


def test_density_capacity_guards(small_tables):
    wide = validate_spec(3, 6, [(1, 2), (3, 4), (5, 6)])
    with pytest.raises(CapacityError):
        density_sum(wide, 50, small_tables)
    with pytest.raises(CapacityError):
        density_sum(SPEC12, 80, small_tables)  # 2 * 160^2 > 10^4


def test_sta_minus_raw_classification(small_tables):
    """Every surviving tuple is raw, carries a proper prime power factor,
    or repeats a prime across factors; the three classes are exact."""
    for spec, Q in ((SPEC12, 3), (SPEC12, 6), (SPEC23, 3), (SPEC23, 4)):
        sta = density_sum(spec, Q, small_tables, False)
        raw = density_sum(spec, Q, small_tables, True)
        correction = 0.0
        repeated_seen = 0
        for t in iter_box(spec, Q):
            factors = eval_factors(spec, t)
            prod = 1.0
            for f in factors:
                prod *= lambda_(small_tables, f)
            if prod == 0.0:
                continue
            if not all(is_prime(small_tables, f) for f in factors):
                correction += prod
            elif len(set(factors)) != len(factors):
                correction += prod
                repeated_seen += 1
        assert sta - raw == pytest.approx(correction, abs=1e-9)
        if spec is SPEC23 and Q == 3:
            # (5, 6, 5) gives 61 * 61: prime factors, but not distinct
            assert repeated_seen > 0


def test_prime_power_correction_bound_single_factor(small_tables):
    """For one factor the correction is exactly the proper-prime-power mass,
    controlled by log(8Q^2) per tuple."""
    for Q in (3, 5, 8):
        sta = density_sum(SPEC12, Q, small_tables, False)
        raw = density_sum(SPEC12, Q, small_tables, True)
        tuples_hit = 0
        for t in iter_box(SPEC12, Q):
            P = eval_poly(SPEC12, t)
            if lambda_(small_tables, P) > 0 and not is_prime(small_tables, P):
                tuples_hit += 1
        assert sta - raw <= tuples_hit * math.log(8 * Q * Q) + 1e-9


def test_fi_compare_tiny_case(tables):
    res = fi_compare(5.0, tables)
    assert res.lam_sum == pytest.approx(math.log(2) + 2 * math.log(5), abs=1e-12)
    assert res.c_tail < 1e-5
    # main term assembled from theta and the quarter-circle count
    expected_main = (4 * res.c_value / math.pi) * (
        theta(1, tables) * 2 + theta(2, tables) * 1
    )
    assert res.main_term == pytest.approx(expected_main, rel=1e-12)


def test_fi_compare_weighted_oracle(tables):
    lam = lambda l: 0.5 * (-1) ** l
    res = fi_compare(200.0, tables, lam_weight=lam)
    brute = 0.0
    for l in range(1, 15):
        for m in range(1, 15):
            if l * l + m * m <= 200:
                brute += lam(l) * lambda_(tables, l * l + m * m)
    assert res.lam_sum == pytest.approx(brute, abs=1e-9)


def test_fi_compare_validation(tables):
    with pytest.raises(ValidationError):
        fi_compare(100.0, tables, lam_weight=lambda l: 1.5)
    with pytest.raises(ValidationError):
        fi_compare(1.0, tables)


def test_fi_compare_custom_bound_cached(tables):
    r1 = fi_compare(100.0, tables, c_bound=1000)
    r2 = fi_compare(150.0, tables, c_bound=1000)
    assert r1.c_value == r2.c_value
    assert r1.c_tail == pytest.approx(2.0 / (1000.0 * math.log(1000.0)))


def brute_lambda_square_box(tables, q1_range, s_lo, s_hi):
    total = 0.0
    for q1 in q1_range:
        for q2 in range(1, math.isqrt(max(s_hi, 0)) + 1):
            s = q1 * q1 + q2 * q2
            if s_lo < s <= s_hi:
                total += lambda_(tables, s)
    return total


def test_geometric_decomposition_residual(small_tables):
    for Q in (4.0, 5.5, 7.0, 10.0):
        dec = geometric_decomposition_check(Q, small_tables)
        assert abs(dec.residual) < 1e-9, Q
        assert dec.rhs == pytest.approx(dec.lhs, abs=1e-9)


def test_geometric_decomposition_components(small_tables):
    Q = 4.0
    dec = geometric_decomposition_check(Q, small_tables)
    lo, hi = math.floor(Q), math.floor(2 * Q)
    lhs_brute = sum(
        lambda_(small_tables, a * a + b * b)
        for a in range(lo + 1, hi + 1)
        for b in range(lo + 1, hi + 1)
    )
    assert dec.lhs == pytest.approx(lhs_brute, abs=1e-12)
    s8_lo, s8_hi, s5_hi = math.floor(2 * Q * Q), math.floor(8 * Q * Q), math.floor(5 * Q * Q)
    a_brute = brute_lambda_square_box(
        small_tables, range(1, math.isqrt(s8_hi) + 1), s8_lo, s8_hi
    )
    assert dec.annulus_full == pytest.approx(a_brute, abs=1e-12)
    b_brute = brute_lambda_square_box(
        small_tables, range(hi + 1, math.isqrt(s8_hi) + 1), s8_lo, s8_hi
    )
    assert dec.annulus_high_q1 == pytest.approx(b_brute, abs=1e-12)
    c_brute = brute_lambda_square_box(small_tables, range(1, lo + 1), s8_lo, s5_hi)
    assert dec.tight_low_q1 == pytest.approx(c_brute, abs=1e-12)
    d_brute = brute_lambda_square_box(
        small_tables, range(hi + 1, math.isqrt(s5_hi) + 1), s8_lo, s5_hi
    )
    assert dec.tight_high_q1 == pytest.approx(d_brute, abs=1e-12)
    rhs = a_brute - 2 * b_brute - 2 * (c_brute - d_brute)
    assert dec.rhs == pytest.approx(rhs, abs=1e-12)
