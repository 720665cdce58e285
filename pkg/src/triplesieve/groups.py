"""Norm balls in finitely generated subgroups of SL(2,Z).

Balls are B_T = {g : sq_norm(g) < T^2}, enumerated breadth-first over words in
the generators and their inverses.  Search expands a node g only while
sq_norm(g) stays below an expansion bound:

  * generic generator sets use T^2 * max_h sq_norm(h): by submultiplicativity
    sq_norm(g h) >= sq_norm(g) / sq_norm(h^-1), every child of a node beyond
    that bound lies outside the ball;
  * the full modular pair {R, L} only needs max(T^2, 4): column reduction
    (Lagrange-Gauss) gives every matrix outside the norm-2 core a one-step
    norm-decreasing right multiplication, so reversing the reduction chain
    reaches each ball element through intermediates no larger than
    max(its own norm, 3).

Element budget violations raise BallBudgetError rather than returning a
truncated ball.  On top of the balls: smoothed counts (cubic smoothstep on
the annulus 0.9T..1.1T), growth-exponent fits (count ~ C T^(2 delta)), partial
Poincare sums, and per-coset counts mod q.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import modular
from .gl2 import GEN_L, GEN_R, UnimodularMatrix, sq_norm


class BallBudgetError(RuntimeError):
    """Enumeration exceeded its element budget before completing the ball."""

    def __init__(self, T: float, discovered: int, cap: int):
        super().__init__(
            f"ball at T={T} exceeded the element budget ({discovered} discovered, cap {cap})"
        )
        self.T = T
        self.discovered = discovered
        self.cap = cap


@dataclass(frozen=True)
class GeneratorSet:
    """Generators of a subgroup; inverses are adjoined automatically.

    monotone_cap marks sets for which ball search may expand inside the target
    ball only (plus the norm-4 core floor); valid when every group element is
    reachable from the core through norms never exceeding its own, as column
    reduction proves for the modular pair.
    """

    label: str
    gens: Tuple[UnimodularMatrix, ...]
    monotone_cap: bool = False

    def __post_init__(self):
        if not self.gens:
            raise ValueError("need at least one generator")
        object.__setattr__(self, "gens", tuple(self.gens))

    def letters(self) -> List[UnimodularMatrix]:
        """Generators plus inverses, deduplicated, in a stable order."""
        out: List[UnimodularMatrix] = []
        for g in self.gens:
            for h in (g, g.inverse()):
                if h not in out:
                    out.append(h)
        return out

    def max_letter_sq_norm(self) -> int:
        return max(sq_norm(h) for h in self.letters())

    def no_parabolic_certificate(self, max_word_length: int = 8) -> bool:
        """True iff every nonidentity word of length <= max_word_length has
        |trace| != 2.  (The identity is skipped; a lattice generator like R
        fails immediately at length 1.)"""
        ident = UnimodularMatrix.identity()
        letters = self.letters()
        seen = {ident}
        frontier = [ident]
        for _ in range(max_word_length):
            nxt = []
            for g in frontier:
                for h in letters:
                    w = g @ h
                    if w in seen:
                        continue
                    seen.add(w)
                    if abs(w.trace()) == 2:
                        return False
                    nxt.append(w)
            frontier = nxt
        return True


def modular_generators() -> GeneratorSet:
    """The elementary pair generating all of SL(2,Z) (a lattice; has parabolics)."""
    return GeneratorSet("modular", (GEN_R, GEN_L), monotone_cap=True)


def schottky_generators() -> GeneratorSet:
    """A purely hyperbolic pair: squares of the two trace-3 products of R and L.

    Both generators have trace 7 and sq_norm 47; the pair passes the
    no-parabolic certificate at word length 8 (checked in tests).
    """
    a = (GEN_R @ GEN_L) @ (GEN_R @ GEN_L)
    b = (GEN_L @ GEN_R) @ (GEN_L @ GEN_R)
    return GeneratorSet("schottky", (a, b))


def parse_generator_text(text: str) -> GeneratorSet:
    """Plain text: optional '# <label>' header, then one 'a b c d' per line."""
    label = "unnamed"
    gens: List[UnimodularMatrix] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if not gens:
                head = line.lstrip("#").strip()
                if head.lower().startswith("label:"):
                    head = head[len("label:"):].strip()
                if head:
                    label = head
            continue
        parts = line.split()
        if len(parts) != 4:
            raise ValueError(f"expected four integers per line, got {line!r}")
        gens.append(UnimodularMatrix(*(int(p) for p in parts)))
    if not gens:
        raise ValueError("no generators in input")
    return GeneratorSet(label, tuple(gens))


def generator_text(gs: GeneratorSet) -> str:
    lines = [f"# {gs.label}"]
    lines += [f"{g.a} {g.b} {g.c} {g.d}" for g in gs.gens]
    return "\n".join(lines) + "\n"


def load_generator_file(path) -> GeneratorSet:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_generator_text(fh.read())


@dataclass
class OrbitBall:
    """All group elements with sq_norm < T^2, deduplicated.

    rows holds the four entries per element in canonical order (sorted by
    sq_norm, then entries); word_lengths[i] is the word length at first
    breadth-first discovery, i.e. the geodesic length among paths staying
    inside the expansion region (checked against unpruned search on small
    balls in the tests).
    """

    T: float
    label: str
    rows: np.ndarray
    word_lengths: np.ndarray
    _sq: Optional[np.ndarray] = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.rows)

    def sq_norms(self) -> np.ndarray:
        if self._sq is None:
            r = self.rows
            self._sq = (r * r).sum(axis=1)
        return self._sq

    def count_below(self, T: float) -> int:
        """Number of elements with sq_norm < T^2 (T must not exceed the ball's T)."""
        if T > self.T:
            raise ValueError(f"ball only complete to T={self.T}, asked for {T}")
        return int((self.sq_norms() < float(T) * float(T)).sum())

    def matrices(self) -> List[UnimodularMatrix]:
        """Materialize as UnimodularMatrix objects (heavy for large balls)."""
        return [UnimodularMatrix(*row) for row in self.rows.tolist()]

    @property
    def elements(self) -> List[UnimodularMatrix]:
        return self.matrices()


def _letter_arrays(gs: GeneratorSet) -> List[Tuple[int, int, int, int]]:
    return [g.entries() for g in gs.letters()]


def _pack_uint64(rows: np.ndarray, width: int, offset: int) -> np.ndarray:
    u = (rows + offset).astype(np.uint64)
    return (
        (u[:, 0] << np.uint64(3 * width))
        | (u[:, 1] << np.uint64(2 * width))
        | (u[:, 2] << np.uint64(width))
        | u[:, 3]
    )


def enumerate_ball(
    gens: GeneratorSet, T: float, element_cap: int = 10_000_000
) -> OrbitBall:
    """Breadth-first, deduplicated, complete enumeration of B_T.

    Raises BallBudgetError when more than element_cap nodes are discovered;
    a returned ball is always complete.
    """
    if T < 1:
        raise ValueError(f"need T >= 1, got {T}")
    ball_bound = float(T) * float(T)
    sbar = gens.max_letter_sq_norm()
    if gens.monotone_cap:
        expand_bound = max(ball_bound, 4.0)
    else:
        expand_bound = ball_bound * sbar
    # entries of every retained node satisfy e^2 < expand_bound, so packing
    # into fixed-width fields is exact; fall back to Python ints if 4 fields
    # do not fit in 64 bits
    max_abs = math.isqrt(int(expand_bound)) + 1
    width = (2 * max_abs + 1).bit_length()
    use_uint64 = 4 * width <= 64

    def pack(rows: np.ndarray) -> np.ndarray:
        if use_uint64:
            return _pack_uint64(rows, width, max_abs)
        shift = 1 << width
        vals = [
            ((a + max_abs) * shift**3 + (b + max_abs) * shift**2 + (c + max_abs) * shift + (d + max_abs))
            for a, b, c, d in rows.tolist()
        ]
        return np.array(vals, dtype=object)

    letters = _letter_arrays(gens)
    ident = np.array([[1, 0, 0, 1]], dtype=np.int64)
    visited = set(pack(ident).tolist())
    collected = [ident]
    collected_wl = [np.zeros(1, dtype=np.int64)]
    frontier = ident
    wl = 0
    total = 1
    while len(frontier):
        wl += 1
        a, b, c, d = (frontier[:, i] for i in range(4))
        chunks = []
        for (p, q, r, s) in letters:
            chunks.append(
                np.stack(
                    [a * p + b * r, a * q + b * s, c * p + d * r, c * q + d * s],
                    axis=1,
                )
            )
        cands = np.concatenate(chunks, axis=0)
        sq = (cands * cands).sum(axis=1)
        cands = cands[sq < expand_bound]
        if not len(cands):
            break
        keys = pack(cands)
        uniq, uidx = np.unique(keys, return_index=True)
        fresh = np.fromiter(
            (k not in visited for k in uniq.tolist()), dtype=bool, count=len(uniq)
        )
        new_rows = cands[uidx[fresh]]
        if not len(new_rows):
            break
        visited.update(uniq[fresh].tolist())
        total += len(new_rows)
        if total > element_cap:
            raise BallBudgetError(T, total, element_cap)
        collected.append(new_rows)
        collected_wl.append(np.full(len(new_rows), wl, dtype=np.int64))
        frontier = new_rows

    rows = np.concatenate(collected, axis=0)
    wls = np.concatenate(collected_wl)
    sq = (rows * rows).sum(axis=1)
    keep = sq < ball_bound
    rows, wls, sq = rows[keep], wls[keep], sq[keep]
    order = np.lexsort((rows[:, 3], rows[:, 2], rows[:, 1], rows[:, 0], sq))
    return OrbitBall(T=float(T), label=gens.label, rows=rows[order], word_lengths=wls[order], _sq=sq[order])


@dataclass(frozen=True)
class SmoothedWeight:
    """Cubic smoothstep cutoff: 1 below 0.9T, 0 above 1.1T, 3u^2-2u^3 between
    (u measured on squared norms, so integer inputs stay exact in the
    Fraction variant)."""

    T: float

    @property
    def inner(self) -> float:
        return 0.9 * self.T

    @property
    def outer(self) -> float:
        return 1.1 * self.T

    def weight(self, s) -> float:
        lo = self.inner * self.inner
        hi = self.outer * self.outer
        if s <= lo:
            return 1.0
        if s >= hi:
            return 0.0
        u = (hi - s) / (hi - lo)
        return u * u * (3 - 2 * u)

    def weight_fraction(self, s: int) -> Fraction:
        t = Fraction(self.T)
        lo = Fraction(81, 100) * t * t
        hi = Fraction(121, 100) * t * t
        s = Fraction(s)
        if s <= lo:
            return Fraction(1)
        if s >= hi:
            return Fraction(0)
        u = (hi - s) / (hi - lo)
        return u * u * (3 - 2 * u)


def smoothed_sum(ball: OrbitBall, T: float) -> float:
    """Sum of the smoothed indicator at parameter T over a ball complete to 1.1T.

    Always sandwiched between the hard counts at 0.9T and 1.1T.
    """
    # exact rational comparison; 1.1*T in floats can round above the true edge
    if Fraction(ball.T) < Fraction(11, 10) * Fraction(T):
        raise ValueError(
            f"ball complete only to {ball.T}; smoothing at T={T} needs 1.1*T"
        )
    w = SmoothedWeight(T)
    s = ball.sq_norms().astype(np.float64)
    lo = w.inner * w.inner
    hi = w.outer * w.outer
    u = np.clip((hi - s) / (hi - lo), 0.0, 1.0)
    return float((u * u * (3 - 2 * u)).sum())


@dataclass(frozen=True)
class GrowthEstimate:
    """Fitted growth exponent: count(T) ~ C T^(2 delta_hat)."""

    delta_hat: float
    stderr: float
    samples: Tuple[Tuple[float, int], ...]

    def __post_init__(self):
        if not (0 < self.delta_hat <= 1.1):
            raise ValueError(f"fitted exponent {self.delta_hat} outside (0, 1.1]")
        ts = [t for t, _ in self.samples]
        if any(t2 <= t1 for t1, t2 in zip(ts, ts[1:])):
            raise ValueError("samples must be strictly increasing in T")


def estimate_delta(
    gens: GeneratorSet, T_grid: Sequence[float], element_cap: int = 10_000_000
) -> GrowthEstimate:
    """Least-squares slope of log(count) on log(T); slope = 2 delta_hat.

    A single enumeration at max(T_grid) supplies every grid count (balls are
    nested), keeping the fit consistent with hard counts.
    """
    grid = sorted(float(t) for t in T_grid)
    if len(grid) < 4:
        raise ValueError("need at least 4 grid points")
    if grid[0] < 1 or any(t2 <= t1 for t1, t2 in zip(grid, grid[1:])):
        raise ValueError("grid must be strictly increasing with min >= 1")
    ball = enumerate_ball(gens, grid[-1], element_cap=element_cap)
    counts = [ball.count_below(t) for t in grid]
    if any(c == 0 for c in counts):
        raise ValueError("grid reaches below the first group element; shrink it")
    x = np.log(np.array(grid))
    y = np.log(np.array(counts, dtype=np.float64))
    (slope, _intercept), cov = np.polyfit(x, y, 1, cov=True)
    return GrowthEstimate(
        delta_hat=float(slope) / 2.0,
        stderr=float(np.sqrt(cov[0, 0])) / 2.0,
        samples=tuple(zip(grid, counts)),
    )


def poincare_partial(gens: GeneratorSet, s: float, T: float) -> float:
    """Partial Poincare sum over the ball: sum of sq_norm(g)^(-s)."""
    if s <= 0:
        raise ValueError("need s > 0")
    ball = enumerate_ball(gens, T)
    if not len(ball):
        return 0.0
    return float((ball.sq_norms().astype(np.float64) ** (-float(s))).sum())


def coset_counts(
    gens: GeneratorSet, T: float, q: int, ball: Optional[OrbitBall] = None
) -> Dict[Tuple[int, int], int]:
    """Ball elements per coset label mod squarefree q; counts partition the ball.

    Requires surjectivity mod every prime of q (so q odd, coprime to the bad
    modulus); pass a precomputed ball to reuse an enumeration.
    """
    if ball is None:
        ball = enumerate_ball(gens, T)
    elif ball.T < T:
        raise ValueError("supplied ball is smaller than requested T")
    n = ball.count_below(T)
    inside = ball.sq_norms() < float(T) * float(T)
    c_all = ball.rows[inside, 2]
    d_all = ball.rows[inside, 3]
    if q == 1:
        return {(0, 1): n}
    if q % 2 == 0:
        raise ValueError("modulus shares the factor 2 with the bad modulus")
    table = modular.coset_table(q)
    for p in modular.prime_factors(q):
        if not modular.strong_approx_check(gens, p):
            raise ValueError(f"projection not surjective mod {p}; bad modulus overlap")
    # vectorized label per prime, glued by CRT
    lc = np.zeros(len(c_all), dtype=np.int64)
    ld = np.zeros(len(c_all), dtype=np.int64)
    mod_so_far = 1
    for p in modular.prime_factors(q):
        cp = c_all % p
        dp = d_all % p
        inv = np.array([0] + [pow(i, -1, p) for i in range(1, p)], dtype=np.int64)
        zero = cp == 0
        rep_c = np.where(zero, 0, 1)
        rep_d = np.where(zero, 1, (inv[cp] * dp) % p)
        # CRT: extend (lc, ld) mod mod_so_far by (rep_c, rep_d) mod p
        minv = pow(mod_so_far, -1, p)
        lc = lc + mod_so_far * (((rep_c - lc) * minv) % p)
        ld = ld + mod_so_far * (((rep_d - ld) * minv) % p)
        mod_so_far *= p
    counts = {rep: 0 for rep in table.reps}
    key = lc * q + ld
    uniq, cnt = np.unique(key, return_counts=True)
    for k, v in zip(uniq.tolist(), cnt.tolist()):
        counts[(k // q, k % q)] += int(v)
    assert sum(counts.values()) == n
    return counts


def word_ball(gens: GeneratorSet, max_length: int) -> Dict[UnimodularMatrix, int]:
    """Every word of length <= max_length with its geodesic word length.

    Pure breadth-first closure without norm pruning; exponential in
    max_length, so keep the length small.
    """
    ident = UnimodularMatrix.identity()
    letters = gens.letters()
    dist = {ident: 0}
    frontier = [ident]
    for ell in range(1, max_length + 1):
        nxt = []
        for g in frontier:
            for h in letters:
                w = g @ h
                if w not in dist:
                    dist[w] = ell
                    nxt.append(w)
        frontier = nxt
    return dist


def sample_words(
    gens: GeneratorSet, count: int, seed: int, max_length: int = 4
) -> List[UnimodularMatrix]:
    """Reproducible sample of group elements from the short-word ball.

    The pool is canonically ordered before seeding, so the draw depends only
    on (gens, count, seed, max_length).
    """
    pool = sorted(word_ball(gens, max_length), key=lambda g: (sq_norm(g),) + g.entries())
    if count >= len(pool):
        return pool
    return random.Random(seed).sample(pool, count)
