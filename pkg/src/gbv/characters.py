"""Dirichlet characters for odd squarefree moduli.

For q = p_1 ... p_j the unit group splits into cyclic factors of order
p_i - 1.  Each character is a tuple of exponents (e_1, ..., e_j) against the
smallest primitive root of each p_i; evaluation goes through full discrete
log tables, built once per modulus.  Restricting to odd squarefree q keeps
every local factor cyclic and makes primitivity a per-exponent check.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .errors import UnsupportedModulusError, ValidationError
from .sieve import SieveTables, factorize

TWO_PI = 2.0 * math.pi


def _smallest_primitive_root(p: int, tables: SieveTables) -> int:
    """Smallest generator of (Z/p)^* for an odd prime p."""
    order_primes = [r for r, _ in factorize(tables, p - 1)]
    for g in range(2, p):
        if all(pow(g, (p - 1) // r, p) != 1 for r in order_primes):
            return g
    raise AssertionError(f"no primitive root found mod {p}")  # unreachable


@dataclass
class CharacterGroupContext:
    """Per-modulus tables: prime factors, primitive roots, dlog tables."""

    q: int
    primes: tuple[int, ...]
    roots: tuple[int, ...]
    dlogs: tuple[np.ndarray, ...] = field(repr=False)

    @property
    def phi(self) -> int:
        out = 1
        for p in self.primes:
            out *= p - 1
        return out


def character_context(q: int, tables: SieveTables) -> CharacterGroupContext:
    """Build dlog tables for an odd squarefree modulus q >= 1."""
    q = int(q)
    if q < 1:
        raise ValidationError(f"modulus must be >= 1, got {q}")
    if q % 2 == 0:
        raise UnsupportedModulusError(f"modulus {q} is even")
    fac = factorize(tables, q)
    if any(e > 1 for _, e in fac):
        raise UnsupportedModulusError(f"modulus {q} is not squarefree")
    primes, roots, dlogs = [], [], []
    for p, _ in fac:
        g = _smallest_primitive_root(p, tables)
        dlog = np.full(p, -1, dtype=np.int64)
        val = 1
        for e in range(p - 1):
            dlog[val] = e
            val = (val * g) % p
        primes.append(p)
        roots.append(g)
        dlogs.append(dlog)
    return CharacterGroupContext(q=q, primes=tuple(primes), roots=tuple(roots), dlogs=tuple(dlogs))


class DirichletCharacter:
    """A character mod q given by exponents against the per-prime generators."""

    def __init__(self, ctx: CharacterGroupContext, exponents: tuple[int, ...]):
        if len(exponents) != len(ctx.primes):
            raise ValidationError("exponent tuple length does not match modulus")
        for e, p in zip(exponents, ctx.primes):
            if not 0 <= e < p - 1:
                raise ValidationError(f"exponent {e} out of range for prime {p}")
        self.ctx = ctx
        self.q = ctx.q
        self.exponents = tuple(int(e) for e in exponents)
        self._table: np.ndarray | None = None

    def __repr__(self) -> str:
        return f"DirichletCharacter(q={self.q}, exponents={self.exponents})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DirichletCharacter)
            and self.q == other.q
            and self.exponents == other.exponents
        )

    def __hash__(self) -> int:
        return hash((self.q, self.exponents))

    @property
    def is_principal(self) -> bool:
        return all(e == 0 for e in self.exponents)

    def conjugate(self) -> "DirichletCharacter":
        exps = tuple(
            0 if e == 0 else (p - 1) - e for e, p in zip(self.exponents, self.ctx.primes)
        )
        return DirichletCharacter(self.ctx, exps)

    def __call__(self, n: int) -> complex:
        n = int(n)
        out = 1.0 + 0.0j
        for p, dlog, e in zip(self.ctx.primes, self.ctx.dlogs, self.exponents):
            r = n % p
            if r == 0:
                return 0.0j
            out *= cmath.exp(1j * TWO_PI * e * int(dlog[r]) / (p - 1))
        return out

    def value_table(self) -> np.ndarray:
        """chi on residues 0..q-1 as a complex array, cached."""
        if self._table is None:
            tab = np.ones(self.q, dtype=np.complex128)
            a = np.arange(self.q, dtype=np.int64)
            for p, dlog, e in zip(self.ctx.primes, self.ctx.dlogs, self.exponents):
                local = np.zeros(p, dtype=np.complex128)
                ang = TWO_PI * e / (p - 1)
                local[1:] = np.exp(1j * ang * dlog[1:])
                tab *= local[a % p]
            self._table = tab
        return self._table


def characters_mod(ctx: CharacterGroupContext) -> list[DirichletCharacter]:
    """All phi(q) characters, ordered lexicographically by exponent tuple.

    The principal character (all-zero exponents) comes first.
    """
    ranges = [range(p - 1) for p in ctx.primes]
    return [DirichletCharacter(ctx, exps) for exps in product(*ranges)]


def is_primitive(chi: DirichletCharacter) -> bool:
    """For squarefree q: primitive iff no exponent vanishes (vacuous for q=1)."""
    return all(e != 0 for e in chi.exponents)


def primitive_characters(ctx: CharacterGroupContext) -> list[DirichletCharacter]:
    return [chi for chi in characters_mod(ctx) if is_primitive(chi)]


def conductor(chi: DirichletCharacter) -> int:
    out = 1
    for p, e in zip(chi.ctx.primes, chi.exponents):
        if e != 0:
            out *= p
    return out


def gauss_sum(chi: DirichletCharacter) -> complex:
    """tau(chi) = sum_a chi(a) e(a/q); |tau| = sqrt(q) when chi is primitive."""
    q = chi.q
    a = np.arange(q)
    return complex(np.sum(chi.value_table() * np.exp(2j * np.pi * a / q)))


def psi_chi(chi: DirichletCharacter, y: float, tables: SieveTables) -> complex:
    """Twisted Chebyshev sum over n <= y, accumulated in ascending n."""
    if y < 2:
        return 0.0j
    ns, lam = tables.prime_power_jumps(y)
    vals = chi.value_table()[ns % chi.q]
    return complex(np.sum(vals * lam))


def psi_prime_chi(chi: DirichletCharacter, y: float, tables: SieveTables) -> complex:
    """psi_chi with the expected main term y removed for the principal character."""
    out = psi_chi(chi, y, tables)
    if chi.is_principal:
        out -= y
    return out
