"""Vaughan's identity in explicit three-range form, plus character sum ratios.

With both cut parameters equal to U, the weighted sum of f against Lambda
over (U, x] splits exactly as S1 - S2 - S3:

    S1 = sum_{b<=U} mu(b) sum_{U/b < r <= x/b} f(br) log r
    S2 = sum_{m<=U^2} a2(m) sum_{U/m < k <= x/m} f(mk),
         a2(m) = sum_{bc=m, b,c<=U} mu(b) Lambda(c)
    S3 = sum_{U<m<=x/U} Lambda(m) sum_{U<k<=x/m} b3(k) f(mk),
         b3(k) = sum_{d|k, d<=U} mu(d)

The identity is exact for every f, which makes the residual a direct test.
Coefficient sizes obey |a2(m)| <= log m, Lambda(m) <= log m, |b3(k)| <= d(k).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .characters import DirichletCharacter
from .errors import ValidationError
from .sieve import SieveTables, lambda_, mobius


@dataclass
class VaughanDecomposition:
    """Signed pieces of the split; total() restores the full weighted sum."""

    x: int
    U: int
    head: complex  # sum over n <= U of f(n) Lambda(n)
    s1: complex
    s2: complex
    s3: complex

    def tail(self) -> complex:
        """The decomposed sum over U < n <= x."""
        return self.s1 - self.s2 - self.s3

    def total(self) -> complex:
        return self.head + self.tail()


def _f_array(f: Callable[[int], complex], x: int) -> np.ndarray:
    """f evaluated on 1..x; index 0 unused."""
    arr = np.zeros(x + 1, dtype=np.complex128)
    for n in range(1, x + 1):
        arr[n] = f(n)
    return arr


def a2_coefficients(U: int, tables: SieveTables) -> np.ndarray:
    """a2(m) for 0 <= m <= U^2 (indices 0, 1 are zero)."""
    a2 = np.zeros(U * U + 1, dtype=np.float64)
    for b in range(1, U + 1):
        mb = mobius(tables, b)
        if mb == 0:
            continue
        for c in range(2, U + 1):
            lc = lambda_(tables, c)
            if lc != 0.0:
                a2[b * c] += mb * lc
    return a2


def b3_coefficients(U: int, kmax: int, tables: SieveTables) -> np.ndarray:
    """b3(k) = sum of mu(d) over divisors d <= U, for 0 <= k <= kmax."""
    b3 = np.zeros(kmax + 1, dtype=np.float64)
    for d in range(1, min(U, kmax) + 1):
        md = mobius(tables, d)
        if md != 0:
            b3[d::d] += md
    return b3


def vaughan_decompose(
    f: Callable[[int], complex], x: int, U: int, tables: SieveTables
) -> VaughanDecomposition:
    """Compute head, S1, S2, S3 for the cut U.

    Args:
        f: arbitrary complex-valued function on positive integers.
        x: sum endpoint; requires U^2 <= x <= tables.limit.
        U: cut parameter, U >= 1.
    """
    x, U = int(x), int(U)
    if U < 1:
        raise ValidationError(f"cut U must be >= 1, got {U}")
    if U * U > x:
        raise ValidationError(f"need U^2 <= x, got U={U}, x={x}")
    if x > tables.limit:
        raise ValidationError(f"x={x} exceeds table limit {tables.limit}")
    farr = _f_array(f, x)

    ns, lam = tables.prime_power_jumps(U)
    head = complex(np.sum(farr[ns] * lam))

    s1 = 0.0j
    for b in range(1, U + 1):
        mb = mobius(tables, b)
        if mb == 0:
            continue
        lo = U // b  # r > U/b  <=>  r >= floor(U/b) + 1 for integer r
        hi = x // b
        if hi > lo:
            r = np.arange(lo + 1, hi + 1)
            s1 += mb * complex(np.dot(farr[b * r], np.log(r)))

    s2 = 0.0j
    a2 = a2_coefficients(U, tables)
    for m in np.flatnonzero(a2):
        m = int(m)
        lo, hi = U // m, x // m
        if hi > lo:
            k = np.arange(lo + 1, hi + 1)
            s2 += a2[m] * complex(np.sum(farr[m * k]))

    s3 = 0.0j
    b3 = b3_coefficients(U, x // U if U else 0, tables)
    pp_ns, pp_lam = tables.prime_power_jumps(x // U)
    start = np.searchsorted(pp_ns, U, side="right")
    for m, lm in zip(pp_ns[start:], pp_lam[start:]):
        m = int(m)
        hi = x // m
        if hi > U:
            k = np.arange(U + 1, hi + 1)
            s3 += lm * complex(np.dot(farr[m * k], b3[k]))

    return VaughanDecomposition(x=x, U=U, head=head, s1=s1, s2=s2, s3=s3)


def type1_envelope(f: Callable[[int], complex], x: int, U: int) -> float:
    """sum over l <= U of max_w |sum_{w<k<=x/l} f(kl)|.

    The max over real w reduces to integer w in [0, x/l]; suffix partial
    sums are scanned from the top, so every attainable value is covered.
    """
    total = 0.0
    for ell in range(1, U + 1):
        kmax = x // ell
        vals = np.array([f(k * ell) for k in range(1, kmax + 1)], dtype=np.complex128)
        suffix = np.cumsum(vals[::-1])
        total += float(np.max(np.abs(suffix))) if len(suffix) else 0.0
    return total


def verify_vaughan(
    f: Callable[[int], complex], x: int, U: int, tables: SieveTables
) -> float:
    """|decomposed tail - direct tail|; zero up to roundoff for every f."""
    dec = vaughan_decompose(f, x, U, tables)
    ns, lam = tables.prime_power_jumps(x)
    keep = ns > U
    direct = complex(np.sum(np.array([f(int(n)) for n in ns[keep]]) * lam[keep]))
    return abs(dec.tail() - direct)


# ---------------------------------------------------------------------------
# Polya-Vinogradov ratios


def char_interval_sum(chi: DirichletCharacter, w: float, z: float) -> complex:
    """sum of chi(k) over integers w < k <= z."""
    lo, hi = math.floor(w), math.floor(z)
    if hi <= lo:
        return 0.0j
    ks = np.arange(lo + 1, hi + 1, dtype=np.int64)
    return complex(np.sum(chi.value_table()[ks % chi.q]))


def pv_ratio(chi: DirichletCharacter, w: float, z: float) -> float:
    """|sum_{w<k<=z} chi(k)| / (sqrt(q) log q) for non-principal chi."""
    if chi.is_principal:
        raise ValidationError("interval ratio needs a non-principal character")
    return abs(char_interval_sum(chi, w, z)) / (math.sqrt(chi.q) * math.log(chi.q))


def _hull_diameter(points: np.ndarray) -> float:
    """Exact diameter of a planar point set given as complex values."""
    pts = np.unique(points)
    n = len(pts)
    if n == 1:
        return 0.0
    if n <= 64:
        diff = pts[:, None] - pts[None, :]
        return float(np.max(np.abs(diff)))
    order = np.lexsort((pts.imag, pts.real))
    xs, ys = pts.real[order], pts.imag[order]

    def build(rng):
        hull: list[int] = []
        for i in rng:
            while len(hull) >= 2:
                o, a = hull[-2], hull[-1]
                cross = (xs[a] - xs[o]) * (ys[i] - ys[o]) - (ys[a] - ys[o]) * (xs[i] - xs[o])
                if cross <= 0:
                    hull.pop()
                else:
                    break
            hull.append(i)
        return hull

    lower = build(range(n))
    upper = build(range(n - 1, -1, -1))
    idx = np.array(lower[:-1] + upper[:-1], dtype=np.int64)
    hp = xs[idx] + 1j * ys[idx]
    diff = hp[:, None] - hp[None, :]
    return float(np.max(np.abs(diff)))


def pv_max_ratio(chi: DirichletCharacter, z_limit: int | None = None) -> float:
    """Exact max of pv_ratio over all windows 0 <= w < z <= z_limit.

    Default z_limit is 5q.  For non-principal chi the prefix sums repeat
    with period q (each full period sums to zero), so windows longer than
    one period add no new values and the search space collapses to at most
    q prefix points; the max window sum is the diameter of that point set.
    """
    if chi.is_principal:
        raise ValidationError("interval ratio needs a non-principal character")
    q = chi.q
    if z_limit is None:
        z_limit = 5 * q
    t = min(z_limit, q - 1)
    prefix = np.concatenate(
        ([0.0 + 0.0j], np.cumsum(chi.value_table()[np.arange(1, t + 1) % q]))
    )
    return _hull_diameter(prefix) / (math.sqrt(q) * math.log(q))
