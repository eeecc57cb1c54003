"""Vaughan's three-range decomposition and character interval oscillation."""

import math

import numpy as np
import pytest

from gbv import (
    ValidationError,
    character_context,
    characters_mod,
    lambda_,
    mobius,
    psi,
    pv_max_ratio,
    pv_ratio,
    type1_envelope,
    vaughan_decompose,
    verify_vaughan,
)
from gbv.identities import a2_coefficients, b3_coefficients, char_interval_sum


def brute_a2(m, U, tables):
    total = 0.0
    for b in range(1, U + 1):
        if m % b == 0:
            c = m // b
            if c <= U:
                total += mobius(tables, b) * lambda_(tables, c)
    return total


def test_a2_coefficients_oracle(small_tables):
    for U in (1, 2, 5, 9):
        a2 = a2_coefficients(U, small_tables)
        assert len(a2) == U * U + 1
        for m in range(1, U * U + 1):
            assert a2[m] == pytest.approx(brute_a2(m, U, small_tables), abs=1e-12)
            # the divisor sum over Lambda caps the coefficient at log m
            assert abs(a2[m]) <= math.log(max(m, 2)) + 1e-12


def test_b3_coefficients_oracle(small_tables):
    U, kmax = 6, 60
    b3 = b3_coefficients(U, kmax, small_tables)
    for k in range(1, kmax + 1):
        brute = sum(mobius(small_tables, d) for d in range(1, U + 1) if k % d == 0)
        assert b3[k] == brute, k
        ndiv = sum(1 for d in range(1, k + 1) if k % d == 0)
        assert abs(b3[k]) <= ndiv
    # complete Moebius sums collapse below the cut
    for k in range(2, U + 1):
        assert b3[k] == 0
    assert b3[1] == 1


def test_vaughan_constant_function(small_tables):
    dec = vaughan_decompose(lambda n: 1.0, 400, 7, small_tables)
    expected = psi(small_tables, 400) - psi(small_tables, 7)
    assert dec.tail().real == pytest.approx(expected, abs=1e-9)
    assert abs(dec.tail().imag) < 1e-12
    assert dec.total().real == pytest.approx(psi(small_tables, 400), abs=1e-9)


def test_vaughan_seeded_trials(small_tables):
    """Fifty random complex f against the direct tail sum."""
    rng = np.random.default_rng(0x42D)
    for trial in range(50):
        x = int(rng.integers(4, 5000))
        U = int(rng.integers(1, math.isqrt(x) + 1))
        vals = rng.normal(size=x) + 1j * rng.normal(size=x)
        residual = verify_vaughan(lambda n: vals[n - 1], x, U, small_tables)
        assert residual < 1e-8, (trial, x, U)


def test_vaughan_u_equals_one(small_tables):
    vals = np.arange(1, 101, dtype=np.float64) ** 0.5
    dec = vaughan_decompose(lambda n: vals[n - 1], 100, 1, small_tables)
    direct = sum(vals[n - 1] * lambda_(small_tables, n) for n in range(2, 101))
    assert dec.tail().real == pytest.approx(direct, abs=1e-9)
    assert dec.s2 == 0.0  # no coefficient survives both cuts at U = 1


def test_vaughan_preconditions(small_tables):
    with pytest.raises(ValidationError):
        vaughan_decompose(lambda n: 1.0, 100, 0, small_tables)
    with pytest.raises(ValidationError):
        vaughan_decompose(lambda n: 1.0, 100, 11, small_tables)  # U^2 > x
    with pytest.raises(ValidationError):
        vaughan_decompose(lambda n: 1.0, 20_000, 10, small_tables)  # x > limit


def test_type1_envelope_oracle():
    rng = np.random.default_rng(7)
    vals = rng.normal(size=60)
    f = lambda n: vals[n - 1]
    x, U = 60, 4
    total = 0.0
    for ell in range(1, U + 1):
        best = 0.0
        kmax = x // ell
        for w in range(kmax + 1):
            s = sum(f(k * ell) for k in range(w + 1, kmax + 1))
            best = max(best, abs(s))
        total += best
    assert type1_envelope(f, x, U) == pytest.approx(total, abs=1e-9)


def test_char_interval_sum_oracle(small_tables):
    ctx = character_context(7, small_tables)
    for chi in characters_mod(ctx):
        for w, z in ((0, 6.5), (2, 2.0), (3.2, 11.9), (0, 35)):
            brute = sum(chi(n) for n in range(math.floor(w) + 1, math.floor(z) + 1))
            assert abs(char_interval_sum(chi, w, z) - brute) < 1e-10


def test_pv_ratio_quadratic_mod5(small_tables):
    ctx = character_context(5, small_tables)
    quad = next(
        chi for chi in characters_mod(ctx)
        if not chi.is_principal and abs(chi(2) + 1) < 1e-9
    )
    # chi(1) + chi(2) = 1 - 1 cancels over the window (0, 2]
    assert pv_ratio(quad, 0, 2) == pytest.approx(0.0, abs=1e-12)
    assert pv_ratio(quad, 0, 1) == pytest.approx(
        1 / (math.sqrt(5) * math.log(5)), abs=1e-12
    )


def test_pv_ratio_rejects_principal(small_tables):
    ctx = character_context(5, small_tables)
    with pytest.raises(ValidationError):
        pv_ratio(characters_mod(ctx)[0], 0, 3)
    with pytest.raises(ValidationError):
        pv_max_ratio(characters_mod(ctx)[0])


def test_pv_max_ratio_matches_window_scan(small_tables):
    """The periodicity collapse must agree with an explicit scan of every
    window 0 <= w < z <= 5q."""
    for q in (5, 7, 13, 15):
        ctx = character_context(q, small_tables)
        for chi in characters_mod(ctx):
            if chi.is_principal:
                continue
            tab = chi.value_table()
            prefix = np.concatenate(
                ([0.0 + 0.0j], np.cumsum(tab[np.arange(1, 5 * q + 1) % q]))
            )
            brute = max(
                abs(prefix[z] - prefix[w])
                for z in range(1, 5 * q + 1)
                for w in range(z)
            )
            brute /= math.sqrt(q) * math.log(q)
            assert pv_max_ratio(chi) == pytest.approx(brute, abs=1e-12)


def test_pv_max_ratio_short_limit(small_tables):
    ctx = character_context(13, small_tables)
    chi = characters_mod(ctx)[3]
    tab = chi.value_table()
    prefix = np.concatenate(([0.0 + 0.0j], np.cumsum(tab[np.arange(1, 4) % 13])))
    brute = max(
        abs(prefix[z] - prefix[w]) for z in range(1, 4) for w in range(z)
    ) / (math.sqrt(13) * math.log(13))
    assert pv_max_ratio(chi, z_limit=3) == pytest.approx(brute, abs=1e-12)


def test_hull_diameter_large_set_path(small_tables):
    """Moduli above the pairwise cutoff exercise the convex hull branch."""
    for q in (101, 103):
        ctx = character_context(q, small_tables)
        chi = characters_mod(ctx)[1]
        tab = chi.value_table()
        prefix = np.concatenate(
            ([0.0 + 0.0j], np.cumsum(tab[np.arange(1, q) % q]))
        )
        brute = max(
            abs(prefix[z] - prefix[w])
            for z in range(1, q)
            for w in range(z)
        ) / (math.sqrt(q) * math.log(q))
        assert pv_max_ratio(chi) == pytest.approx(brute, abs=1e-12)
