"""Almost-prime census over orbit balls and the smoothed sieve sequence.

The census grades exact form values: factor completely, count prime factors
with multiplicity (Omega), and report membership in P_R = {at most R prime
factors}.  Zeros and units are quarantined, never graded.

The sieve sequence attaches to each integer n the mass

    a(n) = sum_{g, w} Upsilon_X(g) 1_{f(row(g w)) = n},     w in the hard
                                                            ball of radius Y

computed exactly: the smoothed weights are rationals with a common
denominator, so every a(n) is an integer numerator over that denominator and
the accounting identity sum_n a(n) = chi = |ball_Y| * sum_g Upsilon_X(g)
holds to the last digit.  Since a(n) only sees g through its bottom row, the
g-ball is first collapsed to row weights; the (row, w) product grid is then
processed in chunks with 64-bit histogram accumulation, numerators split into
high/low halves so no intermediate overflows.
"""

from __future__ import annotations

import bisect
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np
import sympy

from .gl2 import Form
from .groups import GeneratorSet, OrbitBall, SmoothedWeight, enumerate_ball
from .modular import beta as modular_beta
from .modular import prime_factors

FACTOR_GUARANTEE = 10 ** 18
_CHUNK_PAIRS = 4_000_000
_MASK31 = (1 << 31) - 1


@dataclass(frozen=True)
class Factorization:
    """Complete prime factorization of |n|, sorted, with multiplicity."""

    n: int
    primes: Tuple[int, ...]
    certified: bool

    @property
    def omega(self) -> int:
        return len(self.primes)


def factorize(n: int) -> Factorization:
    """Exact factorization; certified means |n| is within the band where the
    deterministic primality + splitting pipeline is vouched for."""
    if n == 0:
        raise ValueError("0 has no factorization")
    m = abs(n)
    fac = sympy.factorint(m)
    primes: List[int] = []
    for p in sorted(fac):
        primes.extend([p] * fac[p])
    check = math.prod(primes) if primes else 1
    assert check == m, "factorization does not multiply back"
    return Factorization(n, tuple(primes), certified=m <= FACTOR_GUARANTEE)


@dataclass(frozen=True)
class CensusRow:
    """One orbit point: bottom row, form value, factorization, grade."""

    c: int
    d: int
    form: Form
    value: int  # signed form value
    n: int  # |value|; the graded quantity
    factors: Tuple[int, ...]
    omega: int
    grade: str  # "zero", "unit", or "P<omega>"
    imprimitive: bool  # both c and d odd: the triple has content 2


@dataclass(frozen=True)
class CensusReport:
    form: Form
    R: int
    label: str
    T: float
    rows: Tuple[CensusRow, ...]
    omega_histogram: Dict[int, int]
    zeros: int
    units: int
    imprimitive_count: int
    max_abs_value: int

    def count_at_most(self, r: int) -> int:
        """#{graded rows with Omega(n) <= r}."""
        return sum(v for k, v in self.omega_histogram.items() if k <= r)

    def summary(self) -> Dict[str, object]:
        cumulative = {f"le_{r}": self.count_at_most(r) for r in range(1, self.R + 1)}
        return {
            "form": self.form.value,
            "label": self.label,
            "T": self.T,
            "R": self.R,
            "rows": len(self.rows),
            "zeros": self.zeros,
            "units": self.units,
            "imprimitive": self.imprimitive_count,
            "max_abs_value": self.max_abs_value,
            "omega_histogram": {str(k): v for k, v in sorted(self.omega_histogram.items())},
            "almost_prime_counts": cumulative,
        }


def ball_rows(ball: OrbitBall) -> List[Tuple[int, int]]:
    """Distinct bottom rows of the ball, sorted by (c^2+d^2, c, d)."""
    seen = {(int(c), int(d)) for c, d in ball.rows[:, 2:4].tolist()}
    return sorted(seen, key=lambda r: (r[0] * r[0] + r[1] * r[1], r))


def census(ball: OrbitBall, f: Form, R: int) -> CensusReport:
    """Grade every distinct orbit point of the ball; deterministic order."""
    if R < 1:
        raise ValueError("need R >= 1")
    rows: List[CensusRow] = []
    hist: Dict[int, int] = {}
    zeros = units = imprim = 0
    max_abs = 0
    for c, d in ball_rows(ball):
        x = d * d - c * c
        y = 2 * c * d
        z = c * c + d * d
        if f is Form.X:
            value = x
        elif f is Form.Y:
            value = y
        elif f is Form.Z:
            value = z
        elif f is Form.AREA:
            value = x * y // 12
        else:
            value = x * y * z // 60
        n = abs(value)
        imprimitive = (c % 2 == 1) and (d % 2 == 1)
        if imprimitive:
            imprim += 1
        if n == 0:
            zeros += 1
            rows.append(CensusRow(c, d, f, value, 0, (), 0, "zero", imprimitive))
            continue
        if n == 1:
            units += 1
            rows.append(CensusRow(c, d, f, value, 1, (), 0, "unit", imprimitive))
            continue
        fac = factorize(n)
        om = fac.omega
        hist[om] = hist.get(om, 0) + 1
        max_abs = max(max_abs, n)
        rows.append(
            CensusRow(c, d, f, value, n, fac.primes, om, f"P{om}", imprimitive)
        )
    return CensusReport(
        form=f,
        R=R,
        label=ball.label,
        T=ball.T,
        rows=tuple(rows),
        omega_histogram=hist,
        zeros=zeros,
        units=units,
        imprimitive_count=imprim,
        max_abs_value=max_abs,
    )


def census_csv(report: CensusReport) -> str:
    lines = ["c,d,form,n,factors,omega,grade,imprimitive_flag"]
    for r in report.rows:
        factors = "·".join(str(p) for p in r.factors)
        lines.append(
            f"{r.c},{r.d},{r.form.value},{r.n},{factors},{r.omega},{r.grade},{int(r.imprimitive)}"
        )
    return "\n".join(lines) + "\n"


def census_summary_json(report: CensusReport) -> str:
    return json.dumps(report.summary(), sort_keys=True, indent=2) + "\n"


def two_path_counts(ball: OrbitBall, p: int) -> Tuple[int, int]:
    """(#rows with xyz = 0 mod p, sum of the three per-coordinate counts).

    Equal for every odd prime p because no two coordinates vanish together
    on rows with coprime entries; false for composite moduli.
    """
    if p == 2 or not sympy.isprime(p):
        raise ValueError(f"need an odd prime, got {p}")
    c = ball.rows[:, 2] % p
    d = ball.rows[:, 3] % p
    x = (d * d - c * c) % p
    y = (2 * c * d) % p
    z = (c * c + d * d) % p
    direct = int(((x * y % p) * z % p == 0).sum())
    split = int((x == 0).sum()) + int((y == 0).sum()) + int((z == 0).sum())
    return direct, split


def primitivity_probe(ball: OrbitBall, f: Form, q: int) -> bool:
    """True iff some orbit point of the ball has form value coprime to q."""
    for c, d in ball_rows(ball):
        x = d * d - c * c
        y = 2 * c * d
        z = c * c + d * d
        value = {
            Form.X: x,
            Form.Y: y,
            Form.Z: z,
            Form.AREA: x * y // 12,
            Form.PRODUCT: x * y * z // 60,
        }[f]
        if math.gcd(value, q) == 1:
            return True
    return False


@dataclass
class SieveSequence:
    """The exact map n -> a(n), stored as integer numerators over a common
    denominator, plus the mass chi and the build parameters."""

    X: float
    Y: float
    form: Form
    label: str
    den: int
    ns: List[int]  # sorted distinct form values with positive mass
    numerators: List[int]  # aligned with ns; a(n) = numerators[i]/den
    chi: Fraction
    pair_count: int
    omega_ball_size: int

    def support(self) -> List[int]:
        return list(self.ns)

    def a(self, n: int) -> Fraction:
        i = bisect.bisect_left(self.ns, n)
        if i < len(self.ns) and self.ns[i] == n:
            return Fraction(self.numerators[i], self.den)
        return Fraction(0)

    def items(self) -> Iterator[Tuple[int, Fraction]]:
        for n, num in zip(self.ns, self.numerators):
            yield n, Fraction(num, self.den)

    def total_mass(self) -> Fraction:
        return Fraction(sum(self.numerators), self.den)

    def _ns_array(self) -> Optional[np.ndarray]:
        if not self.ns:
            return np.array([], dtype=np.int64)
        if min(self.ns) < -(2 ** 62) or max(self.ns) > 2 ** 62:
            return None
        return np.array(self.ns, dtype=np.int64)


def _row_weights(
    gamma_ball: OrbitBall, X: float
) -> Tuple[List[Tuple[int, int]], List[int], int]:
    """Collapse the gamma-ball to (bottom row, integer weight numerator) with
    a common denominator; rows with zero total weight are dropped."""
    w = SmoothedWeight(X)
    sq = gamma_ball.sq_norms()
    distinct = sorted({int(s) for s in sq.tolist()})
    fracs = {s: w.weight_fraction(s) for s in distinct}
    den = math.lcm(*(fr.denominator for fr in fracs.values())) if distinct else 1
    num_of = {s: int(fr * den) for s, fr in fracs.items()}
    acc: Dict[Tuple[int, int], int] = {}
    bottom = gamma_ball.rows[:, 2:4].tolist()
    for (c, d), s in zip(bottom, sq.tolist()):
        n = num_of[int(s)]
        if n:
            key = (int(c), int(d))
            acc[key] = acc.get(key, 0) + n
    rows = sorted(acc, key=lambda r: (r[0] * r[0] + r[1] * r[1], r))
    return rows, [acc[r] for r in rows], den


def _chunk_values(
    rc: np.ndarray,
    rd: np.ndarray,
    wa: np.ndarray,
    wb: np.ndarray,
    wc: np.ndarray,
    wd: np.ndarray,
    form: Form,
) -> Optional[np.ndarray]:
    """Form values over the (row x omega) grid, or None when the exact
    computation does not provably fit in int64."""
    c1 = (rc[:, None] * wa[None, :] + rd[:, None] * wc[None, :]).ravel()
    d1 = (rc[:, None] * wb[None, :] + rd[:, None] * wd[None, :]).ravel()
    mx = max(int(np.abs(c1).max(initial=0)), int(np.abs(d1).max(initial=0)))
    if mx >= 1 << 31:
        return None
    if form is Form.X:
        return d1 * d1 - c1 * c1
    if form is Form.Y:
        return 2 * c1 * d1
    if form is Form.Z:
        return c1 * c1 + d1 * d1
    z = c1 * c1 + d1 * d1
    zmax = int(z.max(initial=0))
    x = d1 * d1 - c1 * c1
    y = 2 * c1 * d1
    if form is Form.AREA:
        if zmax >= 4_000_000_000:  # |xy| <= zmax^2/2 must fit in int64
            return None
        xy = x * y
        assert (xy % 12 == 0).all()
        return xy // 12
    if zmax > 5_500_000:  # |xyz|/60 <= zmax^3/24 must fit in int64
        return None
    xy = x * y
    assert (xy % 12 == 0).all()
    t = (xy // 12) * z
    assert (t % 5 == 0).all()
    return t // 5


def _python_value(c1: int, d1: int, form: Form) -> int:
    x = d1 * d1 - c1 * c1
    y = 2 * c1 * d1
    z = c1 * c1 + d1 * d1
    if form is Form.X:
        return x
    if form is Form.Y:
        return y
    if form is Form.Z:
        return z
    if form is Form.AREA:
        q, r = divmod(x * y, 12)
        assert r == 0
        return q
    q, r = divmod(x * y * z, 60)
    assert r == 0
    return q


def _accumulate_chunk(acc: Dict[int, int], values: np.ndarray, weights: np.ndarray) -> None:
    """acc[n] += weight, exactly, via a 31-bit split so int64 never overflows:
    per-bin low sums are < chunk_pairs * 2^31 and high sums are bounded by
    chunk_pairs * (max_weight >> 31 + 1), both checked by the caller."""
    uniq, inv = np.unique(values, return_inverse=True)
    hi = np.zeros(len(uniq), dtype=np.int64)
    lo = np.zeros(len(uniq), dtype=np.int64)
    np.add.at(hi, inv, weights >> 31)
    np.add.at(lo, inv, weights & _MASK31)
    for n, h, l in zip(uniq.tolist(), hi.tolist(), lo.tolist()):
        w = (h << 31) + l
        acc[n] = acc.get(n, 0) + w


def build_sequence(
    gens: GeneratorSet,
    X: float,
    Y: float,
    f: Form,
    element_cap: int = 10_000_000,
) -> SieveSequence:
    """Exact smoothed sieve sequence a(n) for the form f on the orbit of gens.

    The g-weight is the cubic smoothstep at scale X (support inside norm
    1.1X); the inner sum ranges over the hard ball of radius Y.  Generator
    order does not affect the result.
    """
    if X < 1 or Y < 1:
        raise ValueError("need X >= 1 and Y >= 1")
    f = Form(f)
    hi_edge = (Fraction(11, 10) * Fraction(X)) ** 2
    t = 1.1 * float(X)
    while Fraction(t) * Fraction(t) < hi_edge:
        t = math.nextafter(t, math.inf)
    gamma_ball = enumerate_ball(gens, t, element_cap=element_cap)
    omega_ball = enumerate_ball(gens, Y, element_cap=element_cap)
    m = len(omega_ball)
    rows, wnums, den = _row_weights(gamma_ball, X)
    chi = Fraction(sum(wnums) * m, den)
    if not rows or m == 0:
        return SieveSequence(X, Y, f, gens.label, 1, [], [], Fraction(0), 0, m)

    wa = omega_ball.rows[:, 0].astype(np.int64)
    wb = omega_ball.rows[:, 1].astype(np.int64)
    wc = omega_ball.rows[:, 2].astype(np.int64)
    wd = omega_ball.rows[:, 3].astype(np.int64)
    omega_list = None

    max_w = max(wnums)
    rows_per_chunk = max(1, _CHUNK_PAIRS // m)
    chunk_pairs = rows_per_chunk * m
    # accumulation overflow guards for the 31-bit split
    int64_ok = max_w < 1 << 62 and chunk_pairs * ((max_w >> 31) + 1) < 1 << 62

    acc: Dict[int, int] = {}
    for start in range(0, len(rows), rows_per_chunk):
        chunk = rows[start : start + rows_per_chunk]
        wchunk = wnums[start : start + rows_per_chunk]
        values = None
        if int64_ok:
            rc = np.array([r[0] for r in chunk], dtype=np.int64)
            rd = np.array([r[1] for r in chunk], dtype=np.int64)
            values = _chunk_values(rc, rd, wa, wb, wc, wd, f)
        if values is not None:
            weights = np.repeat(np.array(wchunk, dtype=np.int64), m)
            _accumulate_chunk(acc, values, weights)
        else:
            if omega_list is None:
                omega_list = omega_ball.rows.tolist()
            for (c, d), w in zip(chunk, wchunk):
                for a, b, cc, dd in omega_list:
                    n = _python_value(c * a + d * cc, c * b + d * dd, f)
                    acc[n] = acc.get(n, 0) + w

    ns = sorted(acc)
    numerators = [acc[n] for n in ns]
    seq = SieveSequence(
        X, Y, f, gens.label, den, ns, numerators, chi, len(rows) * m, m
    )
    assert seq.total_mass() == chi, "mass accounting identity failed"
    return seq


_FORM_PRIME_FLOOR = {
    Form.X: 3,
    Form.Y: 3,
    Form.Z: 3,
    Form.AREA: 5,
    Form.PRODUCT: 7,
}


def a_q(seq: SieveSequence, q: int) -> Tuple[Fraction, Fraction, Fraction]:
    """(|A_q|, beta(q) * chi, remainder), all exact.

    |A_q| is the mass on multiples of q; the main term uses the local
    densities, which are sums of the constituent coordinate densities for
    the composite forms.  q = 1 returns (chi, chi, 0).
    """
    if q == 1:
        return seq.chi, seq.chi, Fraction(0)
    b = modular_beta(seq.form, q)  # rejects even, non-squarefree, small p
    tot = 0
    arr = seq._ns_array()
    if arr is not None and len(arr):
        for i in np.flatnonzero(arr % q == 0).tolist():
            tot += seq.numerators[i]
    else:
        tot = sum(num for n, num in zip(seq.ns, seq.numerators) if n % q == 0)
    mass = Fraction(tot, seq.den)
    main = b * seq.chi
    return mass, main, mass - main


def good_moduli(form: Form, bound: float) -> List[int]:
    """Odd squarefree q in (1, bound) whose primes all admit local densities."""
    floor = _FORM_PRIME_FLOOR[Form(form)]
    out = []
    for q in range(3, math.ceil(bound)):
        if q % 2 == 0 or q >= bound:
            continue
        try:
            ps = prime_factors(q)
        except ValueError:
            continue
        if all(p >= floor for p in ps):
            out.append(q)
    return out


def distribution_probe(
    seq: SieveSequence, alpha: float
) -> Tuple[Fraction, Fraction, Fraction]:
    """(sum of |remainder| over good q < N^alpha, chi, their ratio).

    N is the largest |form value| seen in the sequence.  Report only; the
    ratio going down as balls grow is evidence of level-of-distribution
    behavior, not a proof.
    """
    if not 0 < alpha < 0.5:
        raise ValueError("need 0 < alpha < 1/2")
    if seq.chi == 0:
        return Fraction(0), Fraction(0), Fraction(0)
    N = max((abs(n) for n in seq.ns), default=0)
    if N < 2:
        return Fraction(0), seq.chi, Fraction(0)
    total = Fraction(0)
    for q in good_moduli(seq.form, N ** alpha):
        _, _, r = a_q(seq, q)
        total += abs(r)
    return total, seq.chi, total / seq.chi
