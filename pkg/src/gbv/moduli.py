"""Polynomial moduli built from sums of two squares, and their dyadic boxes.

A modulus polynomial is P(x) = prod_i (x_{u(i)}^2 + x_{v(i)}^2) over k index
pairs drawn from ell variables.  Tuples q range over the dyadic box Q < q_i
<= 2Q; the weight G_q singles out tuples where every factor is a distinct
prime (equivalently mu^2(P(q)) times the product of von Mangoldt values is
nonzero).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ValidationError
from .sieve import SieveTables, is_prime, lambda_

# Guard for box enumeration; (2Q - Q)^ell tuples are materialized by sums.
MAX_BOX_TUPLES = 10**8


@dataclass(frozen=True)
class GaussPolySpec:
    """k index pairs over ell variables; degree of P is 2k."""

    k: int
    ell: int
    pairs: tuple[tuple[int, int], ...]

    @property
    def degree(self) -> int:
        return 2 * self.k

    @property
    def r(self) -> int:
        return math.comb(2 * self.k + self.ell - 1, self.ell) - 1

    @property
    def sigma(self) -> Fraction:
        return Fraction(1, 4 * self.k * self.r)


def validate_spec(k: int, ell: int, pairs) -> GaussPolySpec:
    """Check ranges and pair distinctness, returning the frozen spec."""
    if k < 1 or ell < 1:
        raise ValidationError(f"need k >= 1 and ell >= 1, got k={k} ell={ell}")
    pairs = tuple((int(u), int(v)) for u, v in pairs)
    if len(pairs) != k:
        raise ValidationError(f"expected {k} pairs, got {len(pairs)}")
    seen = set()
    for u, v in pairs:
        if not (1 <= u <= ell and 1 <= v <= ell):
            raise ValidationError(f"pair ({u},{v}) out of range 1..{ell}")
        if u == v:
            raise ValidationError(f"pair ({u},{v}) repeats a variable")
        key = frozenset((u, v))
        if key in seen:
            raise ValidationError(f"unordered pair {{{u},{v}}} appears twice")
        seen.add(key)
    return GaussPolySpec(k=k, ell=ell, pairs=pairs)


def parse_spec_string(text: str) -> GaussPolySpec:
    """Parse 'k=3 ell=4 pairs=1:2,2:3,3:4' into a validated spec."""
    fields = {}
    for token in text.split():
        if "=" not in token:
            raise ValidationError(f"bad token {token!r} in spec string")
        key, _, value = token.partition("=")
        if key in fields:
            raise ValidationError(f"duplicate field {key!r} in spec string")
        fields[key] = value
    missing = {"k", "ell", "pairs"} - set(fields)
    if missing:
        raise ValidationError(f"spec string missing fields: {sorted(missing)}")
    extra = set(fields) - {"k", "ell", "pairs"}
    if extra:
        raise ValidationError(f"spec string has unknown fields: {sorted(extra)}")
    try:
        k = int(fields["k"])
        ell = int(fields["ell"])
    except ValueError as exc:
        raise ValidationError(f"non-integer k or ell: {exc}") from None
    pairs = []
    for chunk in fields["pairs"].split(","):
        parts = chunk.split(":")
        if len(parts) != 2:
            raise ValidationError(f"bad pair {chunk!r}; expected u:v")
        try:
            pairs.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise ValidationError(f"non-integer pair {chunk!r}") from None
    return validate_spec(k, ell, pairs)


def format_spec_string(spec: GaussPolySpec) -> str:
    pairs = ",".join(f"{u}:{v}" for u, v in spec.pairs)
    return f"k={spec.k} ell={spec.ell} pairs={pairs}"


def eval_factors(spec: GaussPolySpec, q) -> list[int]:
    """The k factor values q_u^2 + q_v^2 in pair order."""
    if len(q) != spec.ell:
        raise ValidationError(f"tuple has {len(q)} entries, spec needs {spec.ell}")
    return [int(q[u - 1]) ** 2 + int(q[v - 1]) ** 2 for u, v in spec.pairs]


def eval_poly(spec: GaussPolySpec, q) -> int:
    """P(q), the product of the factor values."""
    out = 1
    for f in eval_factors(spec, q):
        out *= f
    return out


def weight_G(spec: GaussPolySpec, q, tables: SieveTables) -> float:
    """mu^2(P(q)) times the product of Lambda over the factors.

    Nonzero exactly when every factor is prime and the factor primes are
    pairwise distinct, in which case the value is the product of their logs.
    Evaluated factor-wise, so only the factors (not P itself) must fit in
    the tables.
    """
    factors = eval_factors(spec, q)
    if len(set(factors)) != len(factors):
        return 0.0
    out = 1.0
    for f in factors:
        if not is_prime(tables, f):
            return 0.0
        out *= math.log(f)
    return out


# ---------------------------------------------------------------------------
# Dyadic boxes


def box_range(Q: float) -> tuple[int, int]:
    """Integer bounds (lo, hi) with box membership lo < q <= hi.

    For any real Q >= 1 this matches the real condition Q < q <= 2Q on
    integers: lo = floor(Q), hi = floor(2Q).
    """
    if Q < 1:
        raise ValidationError(f"box parameter must be >= 1, got {Q}")
    return math.floor(Q), math.floor(2 * Q)


def box_side(Q: float) -> range:
    lo, hi = box_range(Q)
    return range(lo + 1, hi + 1)


def box_tuple_count(Q: float, ell: int) -> int:
    lo, hi = box_range(Q)
    return (hi - lo) ** ell


def iter_box(spec: GaussPolySpec, Q: float):
    """Lexicographic iteration over all box tuples (row-major)."""
    if box_tuple_count(Q, spec.ell) > MAX_BOX_TUPLES:
        raise ValidationError(
            f"box of {box_tuple_count(Q, spec.ell)} tuples exceeds cap {MAX_BOX_TUPLES}"
        )
    return itertools.product(box_side(Q), repeat=spec.ell)


def box_extremes(spec: GaussPolySpec, Q: float) -> tuple[int, int]:
    """Smallest and largest P(q) over the box, from the two corners.

    Every factor is increasing in each coordinate, so the minimum sits at
    the all-(lo+1) corner and the maximum at the all-hi corner.
    """
    lo, hi = box_range(Q)
    low_corner = (lo + 1,) * spec.ell
    high_corner = (hi,) * spec.ell
    return eval_poly(spec, low_corner), eval_poly(spec, high_corner)


# ---------------------------------------------------------------------------
# Exponent bookkeeping


def sigma_for_degree(degree: int, ell: int) -> tuple[int, Fraction]:
    """(r, sigma) for a degree-`degree` polynomial in ell variables.

    r counts the nonconstant monomials of degree <= `degree`, i.e.
    C(degree + ell - 1, ell) - 1, and sigma = 1 / (2 r degree).
    """
    if degree < 1 or ell < 1:
        raise ValidationError(f"need degree >= 1 and ell >= 1, got {degree}, {ell}")
    r = math.comb(degree + ell - 1, ell) - 1
    return r, Fraction(1, 2 * r * degree)


def sigma_for_spec(spec: GaussPolySpec) -> tuple[int, Fraction]:
    """(r, sigma) for the product form; agrees with sigma_for_degree(2k, ell)."""
    return spec.r, spec.sigma


@dataclass(frozen=True)
class QRange:
    """Admissible dyadic range [q_min, q_max] as powers of x.

    empty is True when the exponent window closes (q_min > q_max); callers
    report that state rather than treating it as an error.
    """

    x: float
    epsilon: float
    exp_min: float
    exp_max: float

    @property
    def q_min(self) -> float:
        return self.x**self.exp_min

    @property
    def q_max(self) -> float:
        return self.x**self.exp_max

    @property
    def empty(self) -> bool:
        return self.exp_min > self.exp_max

    @property
    def midpoint(self) -> float:
        """Geometric midpoint x^((exp_min + exp_max)/2); defined even when empty."""
        return self.x ** ((self.exp_min + self.exp_max) / 2.0)


def q_range(spec: GaussPolySpec, x: float, epsilon: float) -> QRange:
    """Admissible range x^(eps/sigma) <= Q <= x^((1/3 - 2 eps)/(2k - sigma))."""
    if x <= 1:
        raise ValidationError(f"need x > 1, got {x}")
    if epsilon <= 0:
        raise ValidationError(f"need epsilon > 0, got {epsilon}")
    sigma = float(spec.sigma)
    exp_min = epsilon / sigma
    exp_max = (1.0 / 3.0 - 2.0 * epsilon) / (2 * spec.k - sigma)
    return QRange(x=float(x), epsilon=float(epsilon), exp_min=exp_min, exp_max=exp_max)
