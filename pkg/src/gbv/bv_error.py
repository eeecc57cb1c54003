"""Prime counting error in arithmetic progressions, swept over a whole modulus.

E(y; m, a) = psi(y; m, a) - y/phi(m) jumps by Lambda(n) at prime powers
n == a (mod m) and drifts down at slope -1/phi(m) in between, so its extreme
absolute values over y <= x occur at jump points (both one-sided values) or
at y = x.  One pass over the prime powers, grouped by residue class, yields
sup over y and max over a in O(pi(x) + m) per modulus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, ValidationError
from .moduli import GaussPolySpec, box_tuple_count, eval_poly, iter_box, weight_G
from .sieve import SieveTables, totient


@dataclass
class ModulusErrorRecord:
    """sup_error = sup_{y<=x} (max over residues a) |E(y; modulus, a)|.

    witness_y is a point where one of the one-sided values of E at the
    witness residue attains the sup; recompute with error_sides to confirm.
    """

    modulus: int
    sup_error: float
    witness_a: int
    witness_y: float
    coprime_only: bool


def psi_progression(tables: SieveTables, m: int, a: int, y: float, strict: bool = False) -> float:
    """Sum of Lambda(n) over n <= y (or n < y when strict) with n == a mod m."""
    if y < 2:
        return 0.0
    ns, lam = tables.prime_power_jumps(y)
    if strict:
        cut = np.searchsorted(ns, y, side="left")
        ns, lam = ns[:cut], lam[:cut]
    mask = ns % m == a % m
    return float(np.sum(lam[mask]))


def error_sides(tables: SieveTables, m: int, a: int, y: float) -> tuple[float, float]:
    """(E(y-; m, a), E(y; m, a)); the two differ only when y is a jump of a."""
    phi = totient(tables, m)
    left = psi_progression(tables, m, a, y, strict=True) - y / phi
    value = psi_progression(tables, m, a, y, strict=False) - y / phi
    return left, value


def sweep_modulus(
    m: int, x: float, tables: SieveTables, coprime_only: bool = False
) -> ModulusErrorRecord:
    """One-pass sup/max of |E| for a single modulus.

    Candidates per residue class: the value right after each of its jumps,
    the left limit at its next jump (or at y = x), and the left limit at its
    first jump; classes with no jumps contribute |E(x)| = x/phi.  Ties pick
    the smallest (a, y) in scan order, so results are reproducible.
    """
    m = int(m)
    if m < 1:
        raise ValidationError(f"modulus must be >= 1, got {m}")
    if x < 0:
        raise ValidationError(f"need x >= 0, got {x}")
    if m > tables.limit:
        raise CapacityError(f"modulus {m} exceeds table limit {tables.limit}")
    phi = totient(tables, m)
    ns, lam = tables.prime_power_jumps(x) if x >= 2 else (np.array([], np.int64), np.array([]))

    res = ns % m
    order = np.argsort(res, kind="stable")  # ns ascending within each class
    rs, nss, ls = res[order], ns[order], lam[order]

    cand_val: list[np.ndarray] = []
    cand_a: list[np.ndarray] = []
    cand_y: list[np.ndarray] = []

    if len(rs):
        csum = np.cumsum(ls)
        starts = np.flatnonzero(np.r_[True, rs[1:] != rs[:-1]])
        ends = np.r_[starts[1:], len(rs)] - 1
        lengths = np.diff(np.r_[starts, len(rs)])
        base = np.repeat(np.r_[0.0, csum[ends[:-1]]], lengths)
        psi_after = csum - base
        next_n = np.empty(len(nss), dtype=np.float64)
        next_n[:-1] = nss[1:]
        next_n[ends] = x

        # value at own jump, then left limit at the next own jump / at x
        cand_val += [psi_after - nss / phi, psi_after - next_n / phi]
        cand_a += [rs, rs]
        cand_y += [nss.astype(np.float64), next_n]
        # left limit at the first own jump (E has only drifted so far)
        cand_val.append(-nss[starts] / phi)
        cand_a.append(rs[starts])
        cand_y.append(nss[starts].astype(np.float64))
        jump_classes = rs[starts]
    else:
        jump_classes = np.array([], dtype=np.int64)

    silent = np.setdiff1d(np.arange(m, dtype=np.int64), jump_classes)
    if len(silent):
        cand_val.append(np.full(len(silent), -x / phi))
        cand_a.append(silent)
        cand_y.append(np.full(len(silent), float(x)))

    val = np.concatenate(cand_val)
    aa = np.concatenate(cand_a)
    yy = np.concatenate(cand_y)

    if coprime_only:
        keep = np.gcd(aa, m) == 1
        val, aa, yy = val[keep], aa[keep], yy[keep]
        if len(val) == 0:
            raise ValidationError(f"modulus {m} has no coprime residues")

    order = np.lexsort((yy, aa))
    val, aa, yy = val[order], aa[order], yy[order]
    best = int(np.argmax(np.abs(val)))
    return ModulusErrorRecord(
        modulus=m,
        sup_error=float(abs(val[best])),
        witness_a=int(aa[best]),
        witness_y=float(yy[best]),
        coprime_only=coprime_only,
    )


def classical_bv_sum(
    Q: float, x: float, tables: SieveTables, coprime_only: bool = False, pool=None
) -> float:
    """sum over q <= Q of sup_y max_a |E(y; q, a)|, all residues by default."""
    if Q > x:
        raise ValidationError(f"need Q <= x, got Q={Q}, x={x}")
    qs = list(range(1, math.floor(Q) + 1))
    if pool is not None:
        recs = pool.map("sweep_sup", [(q, x, coprime_only) for q in qs])
        sups = [r[0] for r in recs]
    else:
        sups = [sweep_modulus(q, x, tables, coprime_only).sup_error for q in qs]
    total = 0.0
    for s in sups:
        total += s
    return total


@dataclass
class WeightedBvReport:
    """Box-weighted error sum with accounting of skipped tuples."""

    value: float
    contributing_tuples: int
    skipped_tuples: int
    distinct_moduli: int


def weighted_gaussian_bv_sum(
    spec: GaussPolySpec, Q: float, x: float, tables: SieveTables, pool=None
) -> WeightedBvReport:
    """sum over box tuples of G_q [phi(P)/Q^ell] sup_y max_{(a,P)=1} |E(y; P, a)|.

    Tuples with G_q = 0 are skipped without sweeping.  Each distinct modulus
    is swept once; accumulation follows lexicographic tuple order, so the
    memoized and recomputed paths agree to the last bit.
    """
    weights: list[tuple[tuple, int, float]] = []
    skipped = 0
    for q in iter_box(spec, Q):
        g = weight_G(spec, q, tables)
        if g == 0.0:
            skipped += 1
            continue
        weights.append((q, eval_poly(spec, q), g))

    needed = sorted({P for _, P, _ in weights})
    if pool is not None:
        recs = pool.map("sweep_sup", [(P, x, True) for P in needed])
        sup_of = {P: r[0] for P, r in zip(needed, recs)}
    else:
        sup_of = {P: sweep_modulus(P, x, tables, True).sup_error for P in needed}

    scale = Q ** float(spec.ell)
    total = 0.0
    for _, P, g in weights:
        total += g * (totient(tables, P) / scale) * sup_of[P]
    return WeightedBvReport(
        value=total,
        contributing_tuples=len(weights),
        skipped_tuples=skipped,
        distinct_moduli=len(needed),
    )
