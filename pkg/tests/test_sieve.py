"""Sieve tables against trial-division oracles and frozen values."""

import math

import numpy as np
import pytest

from gbv import (
    CacheFormatError,
    CapacityError,
    SieveTables,
    ValidationError,
    build_sieve,
    divisors,
    factorize,
    is_prime,
    lambda_,
    load_cache,
    mobius,
    psi,
    save_cache,
    totient,
    verify_cache,
)


def trial_spf(n):
    for p in range(2, n + 1):
        if n % p == 0:
            return p
    raise AssertionError


def trial_factorize(n):
    out = []
    d = 2
    while d * d <= n:
        e = 0
        while n % d == 0:
            n //= d
            e += 1
        if e:
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


def test_spf_matches_trial_division(small_tables):
    for n in range(2, 2000):
        assert small_tables.spf[n] == trial_spf(n), n


def test_primes_array(small_tables):
    primes = small_tables.primes
    assert primes[0] == 2 and primes[1] == 3
    expected = [n for n in range(2, 10_001) if trial_spf(n) == n]
    assert primes.tolist() == expected


def test_factorize_small(small_tables):
    assert factorize(small_tables, 1) == []
    assert factorize(small_tables, 360) == [(2, 3), (3, 2), (5, 1)]
    for n in range(2, 500):
        assert factorize(small_tables, n) == trial_factorize(n), n


def test_is_prime(small_tables):
    hits = [n for n in range(1, 100) if is_prime(small_tables, n)]
    assert hits == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47,
                    53, 59, 61, 67, 71, 73, 79, 83, 89, 97]


def test_lambda_values(small_tables):
    assert lambda_(small_tables, 1) == 0.0
    assert lambda_(small_tables, 2) == pytest.approx(math.log(2))
    assert lambda_(small_tables, 8) == pytest.approx(math.log(2))
    assert lambda_(small_tables, 9) == pytest.approx(math.log(3))
    assert lambda_(small_tables, 6) == 0.0
    assert lambda_(small_tables, 97) == pytest.approx(math.log(97))


def test_mobius_totient_divisors_oracle(small_tables):
    for n in range(1, 300):
        fac = trial_factorize(n)
        mu = 0 if any(e > 1 for _, e in fac) else (-1) ** len(fac)
        assert mobius(small_tables, n) == mu, n
        phi = n
        for p, _ in fac:
            phi = phi // p * (p - 1)
        assert totient(small_tables, n) == phi, n
        divs = sorted(d for d in range(1, n + 1) if n % d == 0)
        assert divisors(small_tables, n) == divs, n


def test_psi_frozen_and_oracle(small_tables):
    # psi(10) = log lcm-ish product 2*2*2*3*3*5*7 = log 2520
    assert psi(small_tables, 10) == pytest.approx(math.log(2520), abs=1e-12)
    assert psi(small_tables, 1.5) == 0.0
    for y in (2.0, 29.0, 100.7, 997.0):
        brute = sum(lambda_(small_tables, n) for n in range(1, int(y) + 1))
        assert psi(small_tables, y) == pytest.approx(brute, abs=1e-9)


def test_prime_power_jumps(small_tables):
    n, lam = small_tables.prime_power_jumps(30.5)
    expected = [m for m in range(2, 31) if len(trial_factorize(m)) == 1]
    assert n.tolist() == expected
    for m, l in zip(n, lam):
        p = trial_factorize(int(m))[0][0]
        assert l == pytest.approx(math.log(p))
    # below the first prime power the slice is empty
    n0, lam0 = small_tables.prime_power_jumps(1.9)
    assert n0.size == 0 and lam0.size == 0


def test_prime_power_jumps_capacity(small_tables):
    with pytest.raises(CapacityError):
        small_tables.prime_power_jumps(10_001.0)


def test_build_sieve_validation():
    with pytest.raises(ValidationError):
        build_sieve(1)
    with pytest.raises(CapacityError):
        build_sieve(10**9)


def test_cache_roundtrip(tmp_path, small_tables):
    path = tmp_path / "spf.bin"
    save_cache(small_tables, path)
    loaded = load_cache(path)
    assert loaded.limit == small_tables.limit
    assert np.array_equal(loaded.spf, small_tables.spf)
    assert verify_cache(path) == small_tables.limit


def test_cache_bad_magic(tmp_path, small_tables):
    path = tmp_path / "spf.bin"
    save_cache(small_tables, path)
    raw = bytearray(path.read_bytes())
    raw[0] ^= 0xFF
    path.write_bytes(bytes(raw))
    with pytest.raises(CacheFormatError):
        load_cache(path)


def test_cache_truncated(tmp_path, small_tables):
    path = tmp_path / "spf.bin"
    save_cache(small_tables, path)
    raw = path.read_bytes()
    path.write_bytes(raw[:-5])
    with pytest.raises(CacheFormatError):
        load_cache(path)


def test_cache_payload_corruption(tmp_path, small_tables):
    path = tmp_path / "spf.bin"
    save_cache(small_tables, path)
    raw = bytearray(path.read_bytes())
    # flip a value inside the payload so the spot check disagrees
    raw[16:20] = (99).to_bytes(4, "little")
    path.write_bytes(bytes(raw))
    with pytest.raises(CacheFormatError):
        verify_cache(path)


def test_tables_reject_bad_queries(small_tables):
    with pytest.raises(ValidationError):
        factorize(small_tables, 0)
    with pytest.raises(CapacityError):
        factorize(small_tables, 10_001)
