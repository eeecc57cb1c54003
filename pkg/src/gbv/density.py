"""Prime density sums over the box, and the sums-of-two-squares comparison.

The box quantity is sum over tuples of the product of Lambda over the factor
values, with or without the mu^2(P) restriction.  The two-variable case is
cross-checked against the classical count of primes of the form l^2 + m^2:
lam_sum = sum_{l^2+m^2<=x} lambda_l Lambda(l^2+m^2) against the main term
(4c/pi) sum lambda_l theta(l), plus the exact four-sum annulus decomposition
that reduces a dyadic box to quarter annuli.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import CapacityError, ValidationError
from .moduli import GaussPolySpec, box_range, box_side, box_tuple_count
from .sieve import SieveTables, factorize, is_prime

MAX_DENSITY_TUPLES = 5 * 10**7

_c_cache: dict[int, float] = {}


def theorem14_condition(spec: GaussPolySpec) -> bool:
    """True when each pair owns a variable unused by all later pairs."""
    for i, (u, v) in enumerate(spec.pairs):
        later = set()
        for uu, vv in spec.pairs[i + 1 :]:
            later.add(uu)
            later.add(vv)
        if u in later and v in later:
            return False
    return True


def chi4(n: int) -> int:
    """The nontrivial character mod 4."""
    r = n % 4
    return 0 if r % 2 == 0 else (1 if r == 1 else -1)


def theta(ell_value: int, tables: SieveTables) -> float:
    """prod over p | l of (1 - chi4(p)/(p-1))^(-1); the local density of l."""
    out = 1.0
    for p, _ in factorize(tables, ell_value):
        out /= 1.0 - chi4(p) / (p - 1)
    return out


def constant_c(bound: int, tables: SieveTables) -> tuple[float, float]:
    """Truncated product for the twin-character constant c, with a tail bound.

    Returns (value, tail) where tail = 2/(bound log bound) crudely dominates
    |log of the discarded factors| = |sum_{p>bound} log(1 - chi4(p)/...)|,
    each term being at most 2/p^2.  Cached per bound within the process.
    """
    bound = int(bound)
    if bound < 3:
        raise ValidationError(f"truncation bound must be >= 3, got {bound}")
    if bound > tables.limit:
        raise CapacityError(f"bound {bound} exceeds table limit {tables.limit}")
    if bound not in _c_cache:
        p = tables.primes[tables.primes <= bound].astype(np.float64)
        chi = np.where(p % 4 == 1, 1.0, np.where(p % 4 == 3, -1.0, 0.0))
        _c_cache[bound] = float(np.prod(1.0 - chi / ((p - 1.0) * (p - chi))))
    return _c_cache[bound], 2.0 / (bound * math.log(bound))


def _lambda_lookup(tables: SieveTables, top: int) -> np.ndarray:
    """Dense Lambda table 0..top for vectorized indexing."""
    ns, lam = tables.prime_power_jumps(top)
    out = np.zeros(top + 1, dtype=np.float64)
    out[ns] = lam
    return out


def _distinct_prime_factors(spec: GaussPolySpec, q, tables: SieveTables) -> bool:
    vals = [int(q[u - 1]) ** 2 + int(q[v - 1]) ** 2 for u, v in spec.pairs]
    return len(set(vals)) == len(vals) and all(is_prime(tables, f) for f in vals)


def density_sum(
    spec: GaussPolySpec,
    Q: float,
    tables: SieveTables,
    with_mu_squared: bool = False,
    pool=None,
) -> float:
    """Box sum of prod Lambda(factors), optionally restricted by mu^2(P).

    The restricted sum keeps exactly the tuples whose factors are pairwise
    distinct primes (mu^2 of the product is then 1), evaluated factor-wise.
    """
    if box_tuple_count(Q, spec.ell) > MAX_DENSITY_TUPLES:
        raise CapacityError(
            f"density grid of {box_tuple_count(Q, spec.ell)} tuples exceeds cap"
        )
    _, hi = box_range(Q)
    top = 2 * hi * hi
    if top > tables.limit:
        raise CapacityError(f"factor values up to {top} exceed table limit {tables.limit}")
    side_all = np.array(box_side(Q), dtype=np.int64)
    if pool is not None:
        partials = pool.map(
            "density_outer", [(spec, Q, with_mu_squared, int(v)) for v in side_all]
        )
        total = 0.0
        for part in partials:
            total += part
        return total
    return _density_partial(spec, Q, with_mu_squared, None, tables)


def _density_partial(
    spec: GaussPolySpec,
    Q: float,
    with_mu_squared: bool,
    first_coord: int | None,
    tables: SieveTables,
) -> float:
    """Box sum restricted to q_1 = first_coord (or the whole box when None)."""
    _, hi = box_range(Q)
    lam_tab = _lambda_lookup(tables, 2 * hi * hi)
    side = np.array(box_side(Q), dtype=np.int64)
    sides = [side] * spec.ell
    if first_coord is not None:
        sides[0] = np.array([first_coord], dtype=np.int64)

    # Mixed side lengths only differ on axis 0; rebuild the grid accordingly.
    n_axes = [len(s) for s in sides]
    sq = [s**2 for s in sides]
    grid = np.ones(tuple(n_axes), dtype=np.float64)
    for u, v in spec.pairs:
        a = lam_tab[sq[u - 1][:, None] + sq[v - 1][None, :]]
        p0, p1 = u - 1, v - 1
        if p0 > p1:
            a = a.T
            p0, p1 = p1, p0
        other = tuple(d for d in range(spec.ell) if d not in (p0, p1))
        grid = grid * np.expand_dims(a, axis=other)

    if not with_mu_squared:
        return float(np.sum(grid))
    total = 0.0
    for idx in zip(*np.nonzero(grid)):
        q = tuple(int(sides[d][idx[d]]) for d in range(spec.ell))
        if _distinct_prime_factors(spec, q, tables):
            total += float(grid[idx])
    return total


@dataclass
class DensityReport:
    Q: float
    raw_sum: float  # with the mu^2 restriction
    sta_sum: float  # without it
    normalized: float  # sta * (log Q)^k / Q^ell
    condition_holds: bool


def density_report(
    spec: GaussPolySpec, Q: float, tables: SieveTables, pool=None
) -> DensityReport:
    sta = density_sum(spec, Q, tables, with_mu_squared=False, pool=pool)
    raw = density_sum(spec, Q, tables, with_mu_squared=True, pool=pool)
    normalized = sta * math.log(Q) ** spec.k / Q ** float(spec.ell)
    return DensityReport(
        Q=float(Q),
        raw_sum=raw,
        sta_sum=sta,
        normalized=normalized,
        condition_holds=theorem14_condition(spec),
    )


# ---------------------------------------------------------------------------
# Two-squares comparison


@dataclass
class FiCompareResult:
    x: float
    lam_sum: float
    main_term: float
    ratio: float
    c_value: float
    c_tail: float


def fi_compare(
    x: float,
    tables: SieveTables,
    lam_weight: Callable[[int], float] | None = None,
    c_bound: int | None = None,
) -> FiCompareResult:
    """Weighted count of prime powers l^2 + m^2 <= x against its main term.

    lam_weight maps l to a weight in [-1, 1] (None means identically 1).
    main = (4c/pi) sum over the same index set of lam_weight(l) theta(l).
    """
    x = float(x)
    if x < 2:
        raise ValidationError(f"need x >= 2, got {x}")
    if x > tables.limit:
        raise CapacityError(f"x={x} exceeds table limit {tables.limit}")
    if c_bound is None:
        c_bound = min(10**6, tables.limit)
    c_value, c_tail = constant_c(c_bound, tables)

    top = math.floor(x)
    lam_tab = _lambda_lookup(tables, top)
    lmax = math.isqrt(top - 1)
    lam_sum = 0.0
    main = 0.0
    for ell in range(1, lmax + 1):
        w = 1.0 if lam_weight is None else float(lam_weight(ell))
        if abs(w) > 1.0 + 1e-12:
            raise ValidationError(f"weight {w} at l={ell} is outside [-1, 1]")
        mmax = math.isqrt(top - ell * ell)
        if mmax < 1:
            continue
        if w != 0.0:
            ms = np.arange(1, mmax + 1, dtype=np.int64)
            lam_sum += w * float(np.sum(lam_tab[ell * ell + ms * ms]))
            main += w * theta(ell, tables) * mmax
    main *= 4.0 * c_value / math.pi
    ratio = lam_sum / main if main != 0.0 else math.nan
    return FiCompareResult(
        x=x, lam_sum=lam_sum, main_term=main, ratio=ratio, c_value=c_value, c_tail=c_tail
    )


@dataclass
class GeometricDecomposition:
    """Exact reduction of the box sum to four constrained annulus sums.

    lhs is the dyadic box sum; rhs = A - 2B - 2(C - D) with A the full
    annulus 2Q^2 < s <= 8Q^2, B its part with q1 > 2Q, and C, D the parts
    of the tighter annulus 2Q^2 < s <= 5Q^2 with q1 <= Q and q1 > 2Q.
    All coordinate cuts are strict on the 2Q side, which is what makes the
    identity exact when 2Q is an integer.
    """

    Q: float
    lhs: float
    annulus_full: float
    annulus_high_q1: float
    tight_low_q1: float
    tight_high_q1: float
    rhs: float
    residual: float


def _annulus_sum(
    lam_tab: np.ndarray, s_lo: int, s_hi: int, q1_lo: int, q1_hi: int | None
) -> float:
    """sum of Lambda(q1^2 + q2^2) over q1_lo < q1 (<= q1_hi), s_lo < s <= s_hi, q2 >= 1."""
    total = 0.0
    q1 = q1_lo + 1
    top = math.isqrt(max(s_hi - 1, 0))
    last = top if q1_hi is None else min(q1_hi, top)
    while q1 <= last:
        t = s_lo - q1 * q1
        q2_min = math.isqrt(t) + 1 if t >= 0 else 1
        q2_max = math.isqrt(s_hi - q1 * q1)
        if q2_max >= q2_min:
            q2 = np.arange(q2_min, q2_max + 1, dtype=np.int64)
            total += float(np.sum(lam_tab[q1 * q1 + q2 * q2]))
        q1 += 1
    return total


def geometric_decomposition_check(Q: float, tables: SieveTables) -> GeometricDecomposition:
    """Evaluate both sides of the annulus decomposition independently."""
    if Q < 1:
        raise ValidationError(f"need Q >= 1, got {Q}")
    lo, hi = box_range(Q)
    top = math.floor(8 * Q * Q)
    if top > tables.limit:
        raise CapacityError(f"annulus values up to {top} exceed table limit {tables.limit}")
    lam_tab = _lambda_lookup(tables, top)

    lhs = 0.0
    for q1 in range(lo + 1, hi + 1):
        q2 = np.arange(lo + 1, hi + 1, dtype=np.int64)
        lhs += float(np.sum(lam_tab[q1 * q1 + q2 * q2]))

    s8_lo, s8_hi = math.floor(2 * Q * Q), math.floor(8 * Q * Q)
    s5_hi = math.floor(5 * Q * Q)
    a_full = _annulus_sum(lam_tab, s8_lo, s8_hi, 0, None)
    b_high = _annulus_sum(lam_tab, s8_lo, s8_hi, hi, None)  # q1 > 2Q
    c_low = _annulus_sum(lam_tab, s8_lo, s5_hi, 0, lo)  # q1 <= Q
    d_high = _annulus_sum(lam_tab, s8_lo, s5_hi, hi, None)  # q1 > 2Q
    rhs = a_full - 2.0 * b_high - 2.0 * (c_low - d_high)
    return GeometricDecomposition(
        Q=float(Q),
        lhs=lhs,
        annulus_full=a_full,
        annulus_high_q1=b_high,
        tight_low_q1=c_low,
        tight_high_q1=d_high,
        rhs=rhs,
        residual=lhs - rhs,
    )
