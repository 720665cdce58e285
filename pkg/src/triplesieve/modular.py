"""Reduction mod q: group projections, surjectivity probes, coset tables, densities.

For a squarefree modulus q the projection pi_q : SL(2,Z) -> SL(2,Z/qZ) is
computed by breadth-first closure of the generator images.  A subgroup has
full image at a prime p exactly when the closure reaches p(p^2-1) elements;
primes where this fails (together with 2, which is always excluded) form the
empirical bad-modulus set.

Cosets of the row-stabilizer subgroup {g : (0,1).g = a.(0,1) mod q, a a unit}
are labeled by the projectivized bottom row (c:d) in P^1(Z/pZ) per prime,
glued by CRT; the index is eta(q) = prod_{p|q} (p+1).

Local densities count, among the p+1 coset representatives, those whose row
makes a chosen coordinate form vanish mod p.  Exact rationals throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Sequence, Set, Tuple

import sympy

from .gl2 import Form, UnimodularMatrix, form_value


@lru_cache(maxsize=None)
def _squarefree_factors(q: int) -> Tuple[int, ...]:
    """Sorted prime factors of q; raises if q is not squarefree or q < 1."""
    if q < 1:
        raise ValueError(f"modulus must be positive, got {q}")
    fac = sympy.factorint(q)
    if any(e > 1 for e in fac.values()):
        raise ValueError(f"modulus {q} is not squarefree")
    return tuple(sorted(fac))


def is_squarefree(q: int) -> bool:
    try:
        _squarefree_factors(q)
    except ValueError:
        return False
    return True


def prime_factors(q: int) -> Tuple[int, ...]:
    """Sorted prime factors of a squarefree modulus (raises otherwise)."""
    return _squarefree_factors(q)


def sl2_order(q: int) -> int:
    """|SL(2,Z/qZ)| for squarefree q: prod p(p^2-1)."""
    out = 1
    for p in _squarefree_factors(q):
        out *= p * (p * p - 1)
    return out


class ResidueElement:
    """An element of SL(2,Z/qZ) for squarefree q, entries reduced to [0,q)."""

    __slots__ = ("q", "a", "b", "c", "d")

    def __init__(self, q: int, a: int, b: int, c: int, d: int):
        _squarefree_factors(q)
        a, b, c, d = a % q, b % q, c % q, d % q
        if (a * d - b * c) % q != 1 % q:
            raise ValueError(f"determinant must be 1 mod {q}")
        self.q, self.a, self.b, self.c, self.d = q, a, b, c, d

    @classmethod
    def from_matrix(cls, g: UnimodularMatrix, q: int) -> "ResidueElement":
        return cls(q, g.a, g.b, g.c, g.d)

    @classmethod
    def identity(cls, q: int) -> "ResidueElement":
        return cls(q, 1, 0, 0, 1)

    def mul(self, other: "ResidueElement") -> "ResidueElement":
        if self.q != other.q:
            raise ValueError("modulus mismatch")
        q = self.q
        return ResidueElement(
            q,
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "ResidueElement":
        return ResidueElement(self.q, self.d, -self.b, -self.c, self.a)

    def key(self) -> Tuple[int, int, int, int, int]:
        return (self.q, self.a, self.b, self.c, self.d)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ResidueElement):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"ResidueElement(q={self.q}, {self.a}, {self.b}, {self.c}, {self.d})"


def _generator_matrices(gens) -> List[UnimodularMatrix]:
    """Accepts a GeneratorSet-like object (has .gens) or a plain iterable."""
    mats = list(gens.gens) if hasattr(gens, "gens") else list(gens)
    if not mats:
        raise ValueError("need at least one generator")
    return mats


def project_group(gens, q: int) -> Set[ResidueElement]:
    """Breadth-first closure of the projected generators in SL(2,Z/qZ).

    The closure under right multiplication by generator images starting from
    the identity is the generated subgroup (finite group, so the monoid
    closure already contains inverses).
    """
    mats = _generator_matrices(gens)
    imgs = list({ResidueElement.from_matrix(g, q) for g in mats})
    seen = {ResidueElement.identity(q)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for el in frontier:
            for g in imgs:
                prod = el.mul(g)
                if prod not in seen:
                    seen.add(prod)
                    nxt.append(prod)
        frontier = nxt
    return seen


def strong_approx_check(gens, p: int) -> bool:
    """True iff the projection mod prime p is all of SL(2,Z/pZ)."""
    if not sympy.isprime(p):
        raise ValueError(f"{p} is not prime")
    return len(project_group(gens, p)) == p * (p * p - 1)


def bad_modulus_probe(gens, p_max: int) -> List[int]:
    """Primes <= p_max where the projection is not surjective; 2 is always listed."""
    bad = []
    if p_max >= 2:
        bad.append(2)
    for p in sympy.primerange(3, p_max + 1):
        if not strong_approx_check(gens, p):
            bad.append(p)
    return bad


@dataclass(frozen=True)
class CosetTable:
    """Representatives (as bottom rows mod q) of the row-stabilizer cosets."""

    q: int
    reps: Tuple[Tuple[int, int], ...]
    index: int

    def label_of_row(self, c: int, d: int) -> Tuple[int, int]:
        """Canonical representative of the projective class of (c, d) mod q.

        Per prime p | q the class is (0,1) when p | c, else (1, d/c); the
        per-prime labels are glued by CRT.  Rows vanishing mod some p | q
        are not rows of SL(2,Z/qZ) elements and are rejected.
        """
        residues_c, residues_d = [], []
        for p in _squarefree_factors(self.q):
            cp, dp = c % p, d % p
            if cp == 0:
                if dp == 0:
                    raise ValueError(f"row {(c, d)} vanishes mod {p}")
                residues_c.append(0)
                residues_d.append(1)
            else:
                residues_c.append(1)
                residues_d.append(dp * pow(cp, -1, p) % p)
        return (_crt(residues_c, self.q), _crt(residues_d, self.q))

    def label_of(self, g) -> Tuple[int, int]:
        """Coset label of a matrix-like object with bottom row (c, d)."""
        return self.label_of_row(g.c, g.d)


def _crt(residues: Sequence[int], q: int) -> int:
    primes = _squarefree_factors(q)
    x, mod = 0, 1
    for p, r in zip(primes, residues):
        # x := x + mod * t with t chosen so x = r (mod p)
        t = ((r - x) * pow(mod, -1, p)) % p
        x += mod * t
        mod *= p
    return x % q


@lru_cache(maxsize=None)
def coset_table(q: int) -> CosetTable:
    """Row-stabilizer coset representatives for squarefree q.

    For a prime p the representatives are (0,1) and (1,d) for d mod p; for
    composite squarefree q every CRT combination of per-prime representatives,
    giving index eta(q) = prod (p+1).
    """
    primes = _squarefree_factors(q)
    if q == 1:
        return CosetTable(1, ((0, 1),), 1)
    per_prime = {p: [(0, 1)] + [(1, d) for d in range(p)] for p in primes}
    # build the CRT product iteratively, keeping a deterministic order
    reps = [((), ())]  # (residues of c, residues of d) per prime so far
    for p in primes:
        reps = [(rc + (c,), rd + (d,)) for (rc, rd) in reps for (c, d) in per_prime[p]]
    rows = tuple((_crt(rc, q), _crt(rd, q)) for rc, rd in reps)
    index = math.prod(p + 1 for p in primes)
    assert len(rows) == index and len(set(rows)) == index
    return CosetTable(q, rows, index)


def eta(q: int) -> int:
    """Coset index prod_{p|q}(p+1) for squarefree q."""
    return math.prod(p + 1 for p in _squarefree_factors(q))


@dataclass(frozen=True)
class DensityReport:
    form: Form
    p: int
    measured: Fraction
    predicted: Fraction
    match: bool


def predicted_density(f: Form, p: int) -> Fraction:
    """Fraction of cosets on which the form vanishes mod p, by the density table.

    z vanishes on 2 of the p+1 cosets when -1 is a square mod p and never
    otherwise; x and y always on 2.  The quartic and sextic forms vanish where
    any constituent coordinate does, and the constituent loci are disjoint on
    cosets, so their densities are sums.
    """
    if p == 2 or not sympy.isprime(p):
        raise ValueError(f"need an odd prime, got {p}")
    if f in (Form.X, Form.Y):
        return Fraction(2, p + 1)
    if f is Form.Z:
        return Fraction(2, p + 1) if p % 4 == 1 else Fraction(0)
    if f is Form.AREA:
        if p < 5:
            raise ValueError("density of the quartic form needs p coprime to 12")
        return Fraction(4, p + 1)
    if f is Form.PRODUCT:
        if p < 7:
            raise ValueError("density of the sextic form needs p coprime to 60")
        return Fraction(6 if p % 4 == 1 else 4, p + 1)
    raise ValueError(f"unknown form {f!r}")


def local_density(f: Form, p: int) -> DensityReport:
    """Measured vanishing density over the p+1 coset representatives vs prediction.

    The form value mod p depends only on the row mod p because the fixed
    denominators (1, 12, 60) are invertible for admissible p.
    """
    predicted = predicted_density(f, p)  # validates p as well
    table = coset_table(p)
    count = sum(1 for (c, d) in table.reps if form_value(f, c, d) % p == 0)
    measured = Fraction(count, table.index)
    return DensityReport(f, p, measured, predicted, measured == predicted)


def beta(f: Form, q: int) -> Fraction:
    """Multiplicative density over squarefree q: prod of predicted_density(f, p)."""
    out = Fraction(1)
    for p in _squarefree_factors(q):
        out *= predicted_density(f, p)
    return out
