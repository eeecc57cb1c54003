"""Flat smallest-prime-factor sieve and the arithmetic functions built on it.

Everything downstream (von Mangoldt weights, Mobius/totient evaluations,
progression sweeps) factors integers by walking the spf array, so a single
table build serves a whole session.  Tables can be persisted in a small
binary format (magic ``GBVSPF01``) and re-verified on load.
"""

from __future__ import annotations

import math
import os
import struct

import numpy as np

from .errors import CacheFormatError, CapacityError, ValidationError

# Hard cap on table size: 4 bytes/entry keeps a full build under ~400 MB.
MAX_SIEVE_LIMIT = 10**8

CACHE_MAGIC = b"GBVSPF01"


class SieveTables:
    """Smallest-prime-factor table for 2..limit plus lazily built companions.

    Attributes:
        limit: largest integer covered by the table.
        spf: uint32 array of length limit + 1; spf[n] is the smallest prime
            factor of n for 2 <= n <= limit, and spf[0] = spf[1] = 0.
    """

    def __init__(self, limit: int, spf: np.ndarray):
        self.limit = int(limit)
        self.spf = spf
        self._primes: np.ndarray | None = None
        self._pp_n: np.ndarray | None = None
        self._pp_lam: np.ndarray | None = None

    @property
    def primes(self) -> np.ndarray:
        """Sorted int64 array of all primes <= limit."""
        if self._primes is None:
            idx = np.arange(self.limit + 1, dtype=np.uint32)
            self._primes = np.flatnonzero(self.spf == idx)[1:].astype(np.int64)
            # flatnonzero picks up n = 0 (spf 0 == idx 0); drop it above.
        return self._primes

    def prime_power_jumps(self, x: float) -> tuple[np.ndarray, np.ndarray]:
        """All n <= x with Lambda(n) > 0, with their Lambda values.

        Returns a pair (n, lam) of equal-length arrays sorted by n.  Cached
        for the full table range and sliced per call.
        """
        if x > self.limit:
            raise CapacityError(f"prime powers up to {x} exceed table limit {self.limit}")
        if self._pp_n is None:
            primes = self.primes
            ns = [primes]
            ls = [np.log(primes.astype(np.float64))]
            # Proper powers only exist for p <= sqrt(limit).
            for p in primes[primes <= math.isqrt(self.limit)]:
                p = int(p)
                logp = math.log(p)
                pk = p * p
                while pk <= self.limit:
                    ns.append(np.array([pk], dtype=np.int64))
                    ls.append(np.array([logp]))
                    pk *= p
            n_all = np.concatenate(ns)
            lam_all = np.concatenate(ls)
            order = np.argsort(n_all, kind="stable")
            self._pp_n = n_all[order]
            self._pp_lam = lam_all[order]
        cut = np.searchsorted(self._pp_n, math.floor(x), side="right")
        return self._pp_n[:cut], self._pp_lam[:cut]


def build_sieve(limit: int) -> SieveTables:
    """Build the spf table for 2..limit.

    Args:
        limit: inclusive upper bound, 2 <= limit <= MAX_SIEVE_LIMIT.
    """
    if limit < 2:
        raise ValidationError(f"sieve limit must be >= 2, got {limit}")
    if limit > MAX_SIEVE_LIMIT:
        raise CapacityError(f"sieve limit {limit} exceeds cap {MAX_SIEVE_LIMIT}")
    spf = np.zeros(limit + 1, dtype=np.uint32)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            spf[p] = p
            sl = spf[p * p :: p]
            sl[sl == 0] = p
    # Whatever is still unmarked has no factor <= sqrt(limit), hence is prime.
    rest = np.flatnonzero(spf[2:] == 0) + 2
    spf[rest] = rest
    return SieveTables(limit, spf)


def _check_range(tables: SieveTables, n: int) -> int:
    n = int(n)
    if n < 1:
        raise ValidationError(f"argument must be >= 1, got {n}")
    if n > tables.limit:
        raise CapacityError(f"{n} exceeds table limit {tables.limit}")
    return n


def factorize(tables: SieveTables, n: int) -> list[tuple[int, int]]:
    """Prime factorization of n as a list of (prime, exponent) pairs."""
    n = _check_range(tables, n)
    out = []
    while n > 1:
        p = int(tables.spf[n])
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out.append((p, e))
    return out


def is_prime(tables: SieveTables, n: int) -> bool:
    n = _check_range(tables, n)
    return n >= 2 and int(tables.spf[n]) == n


def lambda_(tables: SieveTables, n: int) -> float:
    """Von Mangoldt Lambda(n): log p if n = p^k, else 0."""
    n = _check_range(tables, n)
    if n == 1:
        return 0.0
    p = int(tables.spf[n])
    while n % p == 0:
        n //= p
    return math.log(p) if n == 1 else 0.0


def mobius(tables: SieveTables, n: int) -> int:
    """Mobius mu(n); 0 when any prime repeats."""
    n = _check_range(tables, n)
    sign = 1
    while n > 1:
        p = int(tables.spf[n])
        n //= p
        if n % p == 0:
            return 0
        sign = -sign
    return sign


def totient(tables: SieveTables, n: int) -> int:
    """Euler phi(n)."""
    n = _check_range(tables, n)
    result = n
    m = n
    while m > 1:
        p = int(tables.spf[m])
        while m % p == 0:
            m //= p
        result -= result // p
    return result


def divisors(tables: SieveTables, n: int) -> list[int]:
    """All positive divisors of n, sorted."""
    ds = [1]
    for p, e in factorize(tables, n):
        ds = [d * p**j for d in ds for j in range(e + 1)]
    return sorted(ds)


def psi(tables: SieveTables, y: float) -> float:
    """Chebyshev psi(y) = sum of Lambda(n) over n <= y."""
    if y < 2:
        return 0.0
    _, lam = tables.prime_power_jumps(y)
    return float(np.sum(lam))


# ---------------------------------------------------------------------------
# On-disk cache: 8-byte magic, little-endian u64 limit, then little-endian
# u32 spf values for n = 2..limit in order.


def save_cache(tables: SieveTables, path: str | os.PathLike) -> None:
    body = tables.spf[2:].astype("<u4").tobytes()
    with open(path, "wb") as fh:
        fh.write(CACHE_MAGIC)
        fh.write(struct.pack("<Q", tables.limit))
        fh.write(body)


def load_cache(path: str | os.PathLike) -> SieveTables:
    """Load a cache file, verifying magic, limit, and payload length."""
    with open(path, "rb") as fh:
        magic = fh.read(8)
        if magic != CACHE_MAGIC:
            raise CacheFormatError(f"{path}: bad magic {magic!r}")
        raw = fh.read(8)
        if len(raw) != 8:
            raise CacheFormatError(f"{path}: truncated header")
        (limit,) = struct.unpack("<Q", raw)
        if limit < 2 or limit > MAX_SIEVE_LIMIT:
            raise CacheFormatError(f"{path}: implausible limit {limit}")
        body = fh.read()
    expected = (limit - 1) * 4
    if len(body) != expected:
        raise CacheFormatError(
            f"{path}: payload is {len(body)} bytes, expected {expected}"
        )
    spf = np.zeros(limit + 1, dtype=np.uint32)
    spf[2:] = np.frombuffer(body, dtype="<u4")
    return SieveTables(int(limit), spf)


def verify_cache(path: str | os.PathLike) -> int:
    """Check header and length without keeping the table; returns the limit."""
    tables = load_cache(path)
    # Spot-check a few entries so a zeroed payload cannot pass.
    for n in (2, 3, 4):
        if n <= tables.limit and int(tables.spf[n]) != (2 if n % 2 == 0 else n):
            raise CacheFormatError(f"{path}: spf[{n}] = {int(tables.spf[n])}")
    return tables.limit
