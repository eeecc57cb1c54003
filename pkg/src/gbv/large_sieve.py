"""Large sieve quantities over polynomial moduli P(q) in a dyadic box.

The measured side is sum over box tuples q, then over reduced fractions
a/P(q), of |S(a/P(q))|^2 with S(alpha) = sum v_n e(alpha n).  The bound side
is Delta(Q, N) = Q^(k+l) + Q^(l-s) N + Q^(l+ks) N^(1-s) with k the total
degree and s the smoothness exponent.  Character forms restrict to odd
squarefree modulus values (others are skipped and counted); the double-sum
identity linking the two shapes is implemented and testable to roundoff.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .characters import (
    character_context,
    characters_mod,
    primitive_characters,
)
from .errors import ValidationError
from .moduli import GaussPolySpec, eval_poly, iter_box
from .sieve import SieveTables, mobius, totient


@dataclass
class TrigSequence:
    """Complex weights v_n supported on offset < n <= offset + len(values)."""

    values: np.ndarray
    offset: int = 0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.complex128)
        if self.values.ndim != 1 or len(self.values) == 0:
            raise ValidationError("sequence values must be a nonempty 1-d array")

    @property
    def length(self) -> int:
        return len(self.values)

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.offset + 1, self.offset + self.length + 1, dtype=np.int64)

    @property
    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.values) ** 2))


def random_unit_disk_sequence(n: int, seed_key, offset: int = 0) -> TrigSequence:
    """Seeded sequence with values uniform on the complex unit disk.

    seed_key feeds numpy's SeedSequence unchanged, so lists make disjoint
    streams for (seed, grid point, trial) triples.
    """
    rng = np.random.default_rng(seed_key)
    radius = np.sqrt(rng.random(n))
    angle = 2.0 * np.pi * rng.random(n)
    return TrigSequence(values=radius * np.exp(1j * angle), offset=offset)


def exp_sum(seq: TrigSequence, alpha: float) -> complex:
    """S(alpha) = sum v_n e(alpha n) over the sequence support."""
    phase = np.exp(2j * np.pi * alpha * seq.indices)
    return complex(np.dot(seq.values, phase))


def _fold_mod(seq: TrigSequence, P: int) -> np.ndarray:
    """w[r] = sum of v_n over n == r mod P."""
    idx = seq.indices % P
    v = seq.values
    return np.bincount(idx, weights=v.real, minlength=P) + 1j * np.bincount(
        idx, weights=v.imag, minlength=P
    )


def farey_values(seq: TrigSequence, P: int) -> np.ndarray:
    """S(a/P) for a = 0..P-1 via the folded DFT."""
    w = _fold_mod(seq, P)
    return np.conj(np.fft.fft(np.conj(w)))


def farey_square_sum(seq: TrigSequence, P: int) -> float:
    """sum over a coprime to P of |S(a/P)|^2."""
    s = farey_values(seq, P)
    mask = np.gcd(np.arange(P), P) == 1
    return float(np.sum(np.abs(s[mask]) ** 2))


def _box_modulus_counts(spec: GaussPolySpec, Q: float) -> list[tuple[int, int]]:
    """Distinct P(q) values over the box with multiplicities, ascending."""
    counts = Counter(eval_poly(spec, q) for q in iter_box(spec, Q))
    return sorted(counts.items())


def sigma_quantity(
    spec: GaussPolySpec, Q: float, seq: TrigSequence, tables: SieveTables, pool=None
) -> float:
    """Double sum of |S(a/P(q))|^2 over box tuples and reduced residues.

    Every box tuple contributes, whatever the arithmetic of P(q).  Grouped
    by distinct modulus value and reduced in ascending order, so the result
    does not depend on worker count.
    """
    items = _box_modulus_counts(spec, Q)
    if pool is not None:
        partials = pool.map("farey_square_sum", [(seq, P) for P, _ in items])
    else:
        partials = [farey_square_sum(seq, P) for P, _ in items]
    total = 0.0
    for (P, count), part in zip(items, partials):
        total += count * part
    return total


def delta_bound(Q: float, N: int, degree: int, ell: int, sigma) -> float:
    """Delta(Q, N) = Q^(degree+ell) + Q^(ell-sigma) N + Q^(ell+degree*sigma) N^(1-sigma)."""
    s = float(sigma)
    return (
        Q ** (degree + ell)
        + Q ** (ell - s) * N
        + Q ** (ell + degree * s) * N ** (1.0 - s)
    )


def delta_bound_for_spec(spec: GaussPolySpec, Q: float, N: int) -> float:
    return delta_bound(Q, N, spec.degree, spec.ell, spec.sigma)


def _usable_modulus(P: int, tables: SieveTables) -> bool:
    return P % 2 == 1 and mobius(tables, P) != 0


@dataclass
class CharBoxResult:
    """A box-summed character quantity with skip accounting."""

    value: float
    used_tuples: int
    skipped_tuples: int


def char_form_lhs(
    spec: GaussPolySpec, Q: float, seq: TrigSequence, tables: SieveTables, pool=None
) -> CharBoxResult:
    """sum over the box of [P/phi(P)] sum over primitive chi of |sum v_n chi(n)|^2.

    Box tuples whose P(q) is even or not squarefree are skipped and counted.
    """
    items = _box_modulus_counts(spec, Q)
    value = 0.0
    used = skipped = 0
    work = [(P, c) for P, c in items if _usable_modulus(P, tables)]
    skipped = sum(c for P, c in items if not _usable_modulus(P, tables))
    if pool is not None:
        partials = pool.map("char_form_one_modulus", [(seq, P) for P, _ in work])
    else:
        partials = [char_form_one_modulus(seq, P, tables) for P, _ in work]
    for (P, count), part in zip(work, partials):
        value += count * part
        used += count
    return CharBoxResult(value=value, used_tuples=used, skipped_tuples=skipped)


def char_form_one_modulus(seq: TrigSequence, P: int, tables: SieveTables) -> float:
    """[P/phi(P)] sum over primitive chi mod P of |sum v_n chi(n)|^2."""
    ctx = character_context(P, tables)
    w = _fold_mod(seq, P)
    total = 0.0
    for chi in primitive_characters(ctx):
        total += abs(complex(np.dot(w, chi.value_table()))) ** 2
    return (P / ctx.phi) * total


def char_identity_chain(q: int, seq: TrigSequence, tables: SieveTables) -> tuple[float, float]:
    """Both sides of the all-character / reduced-fraction identity at modulus q.

    lhs = (1/q) sum over all chi of |sum_a conj(chi(a)) S(a/q)|^2
    rhs = (phi(q)/q) sum over a coprime of |S(a/q)|^2

    Orthogonality makes these equal exactly; the pair is returned so tests
    can assert the residual.
    """
    ctx = character_context(q, tables)
    s = farey_values(seq, q)
    lhs = 0.0
    for chi in characters_mod(ctx):
        inner = complex(np.dot(np.conj(chi.value_table()), s))
        lhs += abs(inner) ** 2
    lhs /= q
    mask = np.gcd(np.arange(q), q) == 1
    rhs = (ctx.phi / q) * float(np.sum(np.abs(s[mask]) ** 2))
    return lhs, rhs


def bilinear_lhs_one_modulus(
    a_seq: TrigSequence, b_seq: TrigSequence, P: int, tables: SieveTables
) -> float:
    """[P/phi(P)] sum over primitive chi of max_X |sum_{mn<=X} a_m b_n chi(mn)|.

    X runs over the distinct product values mn plus the full rectangle, so
    the max sees every attainable cut.
    """
    ctx = character_context(P, tables)
    m = a_seq.indices
    n = b_seq.indices
    prod = (m[:, None] * n[None, :]).ravel()
    order = np.argsort(prod, kind="stable")
    prod_sorted = prod[order]
    # group ends: last position of each distinct product value
    ends = np.flatnonzero(np.r_[prod_sorted[1:] != prod_sorted[:-1], True])
    total = 0.0
    for chi in primitive_characters(ctx):
        tab = chi.value_table()
        am = a_seq.values * tab[m % P]
        bn = b_seq.values * tab[n % P]
        terms = (am[:, None] * bn[None, :]).ravel()[order]
        csum = np.cumsum(terms)
        total += float(np.max(np.abs(csum[ends])))
    return (P / ctx.phi) * total


@dataclass
class BilinearResult:
    lhs: float
    rhs: float
    used_tuples: int
    skipped_tuples: int


def bilinear_pair(
    spec: GaussPolySpec,
    Q: float,
    a_seq: TrigSequence,
    b_seq: TrigSequence,
    tables: SieveTables,
    pool=None,
) -> BilinearResult:
    """Box-summed bilinear maximum against the geometric-mean bound.

    rhs = sqrt(Delta(Q,M) Delta(Q,N) |a|^2 |b|^2) with M, N the two lengths.
    """
    items = _box_modulus_counts(spec, Q)
    work = [(P, c) for P, c in items if _usable_modulus(P, tables)]
    skipped = sum(c for P, c in items if not _usable_modulus(P, tables))
    if pool is not None:
        partials = pool.map("bilinear_lhs_one_modulus", [(a_seq, b_seq, P) for P, _ in work])
    else:
        partials = [bilinear_lhs_one_modulus(a_seq, b_seq, P, tables) for P, _ in work]
    lhs = 0.0
    used = 0
    for (P, count), part in zip(work, partials):
        lhs += count * part
        used += count
    rhs = math.sqrt(
        delta_bound_for_spec(spec, Q, a_seq.length)
        * delta_bound_for_spec(spec, Q, b_seq.length)
        * a_seq.norm_sq
        * b_seq.norm_sq
    )
    return BilinearResult(lhs=lhs, rhs=rhs, used_tuples=used, skipped_tuples=skipped)


def bmvt_sup_one_modulus(x: float, P: int, tables: SieveTables) -> float:
    """[P/phi(P)] sum over primitive chi of sup_{y<=x} |psi(y, chi)|.

    The sup of the step function is scanned at its jump points (prime
    powers), with the empty prefix included.
    """
    ctx = character_context(P, tables)
    ns, lam = tables.prime_power_jumps(x)
    idx = ns % P
    total = 0.0
    for chi in primitive_characters(ctx):
        vals = chi.value_table()[idx] * lam
        csum = np.cumsum(vals)
        total += float(np.max(np.abs(csum))) if len(csum) else 0.0
    return (P / ctx.phi) * total


def bmvt_lhs(
    spec: GaussPolySpec, Q: float, x: float, tables: SieveTables, pool=None
) -> CharBoxResult:
    """Box-weighted sup of twisted Chebyshev sums over primitive characters."""
    items = _box_modulus_counts(spec, Q)
    work = [(P, c) for P, c in items if _usable_modulus(P, tables)]
    skipped = sum(c for P, c in items if not _usable_modulus(P, tables))
    if pool is not None:
        partials = pool.map("bmvt_sup_one_modulus", [(x, P) for P, _ in work])
    else:
        partials = [bmvt_sup_one_modulus(x, P, tables) for P, _ in work]
    value = 0.0
    used = 0
    for (P, count), part in zip(work, partials):
        value += count * part
        used += count
    return CharBoxResult(value=value, used_tuples=used, skipped_tuples=skipped)


@dataclass
class DeltaTilde:
    """Two-branch bound for the box-weighted character sup sum.

    in_range is False when x sits below both branch windows; then value is
    None and callers report the state instead of a number.  boundary marks
    exact hits of the branch crossover x = Q^(2k+sigma).
    """

    value: float | None
    branch: str | None
    in_range: bool
    boundary: bool


def delta_tilde(spec: GaussPolySpec, Q: float, x: float) -> DeltaTilde:
    """Evaluate the bound at degree k = 2*spec.k with exponent spec.sigma."""
    k = spec.degree
    ell = spec.ell
    s = float(spec.sigma)
    crossover = Q ** (2 * k + s)
    lower = Q ** (k + 3 - s)
    if x >= crossover:
        value = (
            Q ** (ell - s) * x
            + Q ** (ell + (k - s) / 2.0) * x ** (5.0 / 6.0)
            + Q ** (ell + (k - 1) * s / 2.0) * x ** (1.0 - s / 6.0)
        )
        return DeltaTilde(
            value=value, branch="large_x", in_range=True, boundary=(x == crossover)
        )
    if lower <= x <= crossover:
        value = Q ** (ell + 5.0 * k / 6.0 - s / 3.0) * x ** (2.0 / 3.0)
        return DeltaTilde(value=value, branch="mid_x", in_range=True, boundary=False)
    return DeltaTilde(value=None, branch=None, in_range=False, boundary=False)
