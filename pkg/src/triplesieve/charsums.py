"""Character sums over Z/qZ attached to the coordinate forms, exactly.

Everything here is exact rational arithmetic.  The building blocks:

    rho(p)    = (2p-1)/p^2, extended multiplicatively to squarefree q
    Xi(p; n)  = 1_{p|n} - rho(p), multiplicative in q, with Xi(1; .) = 0

and the sums (f ranges over the three quadratic coordinate forms; f_w means f
evaluated on the row (c,d).w):

    S1(q; f, w)            = q^-2 sum_{c,d mod q} Xi(q; f_w(c,d))
    S2(q; f, w, w')        = q^-2 sum Xi(q; f_w) Xi(q; f_{w'})
    S4(q; f, k, l; w)      = q^-2 sum Xi(q; f_w) e_q(-ck-dl)
    S5(q; f, k, l; w, w')  = q^-2 sum Xi(q; f_w) Xi(q; f_{w'}) e_q(-ck-dl)
    S3(q,q'; f, k, l; ...) = qbar^-2 sum_{c,d mod qbar} Xi(q; f_w) Xi(q'; f_{w'}) e_qbar(-ck-dl)

Exponential sums never touch floating-point roots of unity: the (c,d) grid is
grouped by m = ck+dl mod q, the resulting histogram is constant on classes
{m : gcd(m,q) = g} (the weights are invariant under unit scaling of (c,d)
because the forms are homogeneous; asserted at run time), and each class
contributes its value times a Moebius number, via sum_{gcd(m,q)=g} e_q(-m) =
mu(q/g).

Degenerate modulus: S1, S2, Xi vanish at q = 1 (an empty modulus carries no
oscillation), while S4 and S5 are 1 at q = 1 (empty products), which is what
makes the S3 factorization S3 = S4(q1) S4(q1') S5(qtilde) exact including the
q = q' case.

The closed form for S4 at an odd prime with (k,l,p) = 1 is verified against
the definition in the tests: writing v = (l,-k) for the direction orthogonal
to (k,l), S4 = (p-1)/p^2 when f_w(v) = 0 mod p (the dual line lies on the
zero locus) and -1/p^2 otherwise, whenever the zero locus of f_w mod p is a
union of two lines (always for f in {x,y}; for f = z exactly when p = 1 mod
4, the zero locus at p = 3 mod 4 being the origin alone, where S4 = 1/p^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np
import sympy

from .gl2 import Form, UnimodularMatrix, row_after
from .groups import OrbitBall
from .modular import eta, predicted_density, prime_factors


def rho(q: int) -> Fraction:
    """Multiplicative local weight, (2p-1)/p^2 on primes; rho(1) = 1."""
    out = Fraction(1)
    for p in prime_factors(q):
        out *= Fraction(2 * p - 1, p * p)
    return out


@dataclass(frozen=True)
class LocalWeight:
    q: int
    value: Fraction


def local_weight(q: int) -> LocalWeight:
    return LocalWeight(q, rho(q))


def xi(q: int, n: int) -> Fraction:
    """Xi(q; n) = prod_p (1_{p|n} - rho(p)); zero at q = 1 by convention."""
    if q == 1:
        return Fraction(0)
    out = Fraction(1)
    for p in prime_factors(q):
        out *= (Fraction(1) if n % p == 0 else Fraction(0)) - rho(p)
    return out


@dataclass(frozen=True)
class SumValue:
    """An exact character-sum value with the parameters that produced it."""

    value: Fraction
    q: int
    form: Optional[Form] = None
    k: Optional[int] = None
    l: Optional[int] = None
    omega: Optional[UnimodularMatrix] = None
    omega_prime: Optional[UnimodularMatrix] = None


def coordinate_after(f: Form, c: int, d: int, omega: UnimodularMatrix) -> int:
    """f evaluated on the row (c,d).omega, with f((0,0)) = 0 (the sums
    include the zero row; the orbit parametrization never does)."""
    cc, dd = row_after(c, d, omega)
    if f is Form.X:
        return dd * dd - cc * cc
    if f is Form.Y:
        return 2 * cc * dd
    if f is Form.Z:
        return cc * cc + dd * dd
    raise ValueError(f"character sums take the quadratic coordinate forms, not {f}")


def _require_odd_squarefree(q: int) -> Tuple[int, ...]:
    ps = prime_factors(q)
    if ps and ps[0] == 2:
        raise ValueError(f"modulus {q} is even; 2 always sits in the bad modulus")
    return ps


def _check_z_admissible(f: Form, primes) -> None:
    if f is Form.Z:
        bad = [p for p in primes if p % 4 == 3]
        if bad:
            raise ValueError(
                f"f = z needs every prime factor to be 1 mod 4; got {bad}"
            )


def _coord_grid(f: Form, p: int, omega: UnimodularMatrix) -> np.ndarray:
    """(p, p) array of f_omega(c, d) mod p over the full residue grid."""
    c = np.arange(p, dtype=np.int64)[:, None]
    d = np.arange(p, dtype=np.int64)[None, :]
    a, b, cc, dd = omega.entries()
    cr = (c * a + d * cc) % p
    dr = (c * b + d * dd) % p
    if f is Form.X:
        v = dr * dr - cr * cr
    elif f is Form.Y:
        v = 2 * cr * dr
    elif f is Form.Z:
        v = cr * cr + dr * dr
    else:
        raise ValueError(f"character sums take the quadratic coordinate forms, not {f}")
    return v % p


def _zero_count(f: Form, p: int, omega: UnimodularMatrix) -> int:
    return int((_coord_grid(f, p, omega) == 0).sum())


def count_zero_locus(f: Form, p: int, omega: UnimodularMatrix) -> int:
    """#{(c,d) mod p : f_omega(c,d) = 0}; equals 2p-1 in admissible cases
    (two lines through the origin)."""
    _require_odd_squarefree(p)
    if not sympy.isprime(p):
        raise ValueError(f"{p} is not prime")
    _check_z_admissible(f, (p,))
    return _zero_count(f, p, omega)


def _s1_prime(p: int, f: Form, omega: UnimodularMatrix) -> Fraction:
    """S1 at a prime from the zero-locus count: (N0 - p^2 rho(p)) / p^2."""
    n0 = _zero_count(f, p, omega)
    return Fraction(n0 - (2 * p - 1), p * p)


def s1(q: int, f: Form, omega: UnimodularMatrix) -> SumValue:
    """S1(q; f, omega); zero for every admissible q > 1, and 0 at q = 1."""
    primes = _require_odd_squarefree(q)
    _check_z_admissible(f, primes)
    if q == 1:
        return SumValue(Fraction(0), 1, form=f, omega=omega)
    val = Fraction(1)
    for p in primes:
        val *= _s1_prime(p, f, omega)
    return SumValue(val, q, form=f, omega=omega)


def _s2_prime(
    p: int, f: Form, omega: UnimodularMatrix, omega2: UnimodularMatrix
) -> Fraction:
    g1 = _coord_grid(f, p, omega) == 0
    g2 = _coord_grid(f, p, omega2) == 0
    n11 = int((g1 & g2).sum())
    n10 = int((g1 & ~g2).sum())
    n01 = int((~g1 & g2).sum())
    n00 = p * p - n11 - n10 - n01
    r = rho(p)
    one = Fraction(1)
    val = (
        n11 * (one - r) ** 2
        + (n10 + n01) * (one - r) * (-r)
        + n00 * r * r
    )
    return val / (p * p)


def s2(
    q: int, f: Form, omega: UnimodularMatrix, omega2: UnimodularMatrix
) -> SumValue:
    """S2(q; f, omega, omega'); multiplicative; |value| <= 1."""
    primes = _require_odd_squarefree(q)
    _check_z_admissible(f, primes)
    if q == 1:
        return SumValue(Fraction(0), 1, form=f, omega=omega, omega_prime=omega2)
    val = Fraction(1)
    for p in primes:
        val *= _s2_prime(p, f, omega, omega2)
    assert abs(val) <= 1, "trivial bound violated; arithmetic is corrupted"
    return SumValue(val, q, form=f, omega=omega, omega_prime=omega2)


def _collapse_histogram(qbar: int, hist: List[Fraction]) -> Fraction:
    """sum_m hist[m] e_qbar(-m), exactly, for histograms constant on the
    classes {m : gcd(m, qbar) = g}; that constancy is asserted."""
    if qbar == 1:
        return hist[0]
    per_class: Dict[int, Fraction] = {}
    for m, v in enumerate(hist):
        g = math.gcd(m, qbar)
        if g in per_class:
            assert per_class[g] == v, "histogram not constant on gcd classes"
        else:
            per_class[g] = v
    total = Fraction(0)
    for g, v in per_class.items():
        total += v * sympy.mobius(qbar // g)
    return total


def _s4_prime(p: int, f: Form, k: int, l: int, omega: UnimodularMatrix) -> Fraction:
    """Exact S4 at an odd prime by grid histogram + geometric-sum collapse."""
    k, l = k % p, l % p
    if k == 0 and l == 0:
        return _s1_prime(p, f, omega)
    zero = _coord_grid(f, p, omega) == 0
    c = np.arange(p, dtype=np.int64)[:, None]
    d = np.arange(p, dtype=np.int64)[None, :]
    m = (c * k + d * l) % p
    n_m = np.bincount(m[zero].ravel(), minlength=p).tolist()
    cnt_m = np.bincount(m.ravel(), minlength=p).tolist()
    assert all(c_ == p for c_ in cnt_m), "fibers of a nonzero linear form have size p"
    # the -rho part sums roots of unity over complete fibers and cancels;
    # the zero-locus part collapses by gcd classes
    hist = [Fraction(n) for n in n_m]
    return _collapse_histogram(p, hist) / (p * p)


def s4(q: int, f: Form, k: int, l: int, omega: UnimodularMatrix) -> SumValue:
    """S4(q; f, k, l; omega) for squarefree odd q; 1 at q = 1 (empty product).

    Multiplicativity over primes is exact: the CRT unit twists on (k, l)
    leave each local factor unchanged because the weights only see the
    homogeneous zero locus.
    """
    primes = _require_odd_squarefree(q)
    if q == 1:
        return SumValue(Fraction(1), 1, form=f, k=k, l=l, omega=omega)
    val = Fraction(1)
    for p in primes:
        val *= _s4_prime(p, f, k, l, omega)
    return SumValue(val, q, form=f, k=k, l=l, omega=omega)


def s4_closed_form(
    p: int, f: Form, k: int, l: int, omega: UnimodularMatrix
) -> Fraction:
    """Piecewise value of S4 at an odd prime.

    With v = (l, -k) spanning the line orthogonal to (k, l):
      * (k,l) = (0,0) mod p: S4 degenerates to S1 at p;
      * two-line zero locus (f in {x,y}, or f = z with p = 1 mod 4):
        (p-1)/p^2 if f_omega(v) = 0 mod p, else -1/p^2;
      * f = z with p = 3 mod 4 (zero locus = origin): 1/p^2.
    """
    _require_odd_squarefree(p)
    if not sympy.isprime(p):
        raise ValueError(f"{p} is not prime")
    k, l = k % p, l % p
    if k == 0 and l == 0:
        return _s1_prime(p, f, omega)
    if f is Form.Z and p % 4 == 3:
        return Fraction(1, p * p)
    if coordinate_after(f, l, -k, omega) % p == 0:
        return Fraction(p - 1, p * p)
    return Fraction(-1, p * p)


def s4_bound(p: int, f: Form, k: int, l: int, omega: UnimodularMatrix) -> Fraction:
    """The gcd bound |S4| <= gcd(f_omega(l,-k), p)/p^2 for (k,l,p) = 1."""
    return Fraction(math.gcd(coordinate_after(f, l, -k, omega), p), p * p)


def _s5_prime(
    p: int,
    f: Form,
    k: int,
    l: int,
    omega: UnimodularMatrix,
    omega2: UnimodularMatrix,
) -> Fraction:
    k, l = k % p, l % p
    z1 = _coord_grid(f, p, omega) == 0
    z2 = _coord_grid(f, p, omega2) == 0
    c = np.arange(p, dtype=np.int64)[:, None]
    d = np.arange(p, dtype=np.int64)[None, :]
    m = ((c * k + d * l) % p).ravel()
    r = rho(p)
    one = Fraction(1)
    w = {
        (True, True): (one - r) ** 2,
        (True, False): (one - r) * (-r),
        (False, True): (one - r) * (-r),
        (False, False): r * r,
    }
    hist = [Fraction(0)] * p
    z1f, z2f = z1.ravel(), z2.ravel()
    for key, weight in w.items():
        mask = (z1f == key[0]) & (z2f == key[1])
        counts = np.bincount(m[mask], minlength=p)
        for mm, cnt in enumerate(counts.tolist()):
            if cnt:
                hist[mm] += weight * cnt
    return _collapse_histogram(p, hist) / (p * p)


def s5(
    q: int,
    f: Form,
    k: int,
    l: int,
    omega: UnimodularMatrix,
    omega2: UnimodularMatrix,
) -> SumValue:
    """S5(q; f, k, l; omega, omega'); 1 at q = 1; satisfies |S5| <= 1."""
    primes = _require_odd_squarefree(q)
    if q == 1:
        return SumValue(Fraction(1), 1, form=f, k=k, l=l, omega=omega, omega_prime=omega2)
    val = Fraction(1)
    for p in primes:
        val *= _s5_prime(p, f, k, l, omega, omega2)
    assert abs(val) <= 1, "trivial bound violated; arithmetic is corrupted"
    return SumValue(val, q, form=f, k=k, l=l, omega=omega, omega_prime=omega2)


def s3_direct(
    q: int,
    q2: int,
    f: Form,
    k: int,
    l: int,
    omega: UnimodularMatrix,
    omega2: UnimodularMatrix,
) -> Fraction:
    """S3 straight from its definition: an O(qbar^2) grid sum collapsed by
    gcd classes (exact)."""
    _require_odd_squarefree(q)
    _require_odd_squarefree(q2)
    qbar = math.lcm(q, q2)
    if qbar == 1:
        # the defining sum is Xi(1;.)^2 = 0, but the product form's empty-
        # modulus conventions give 1; the identity starts at real moduli
        raise ValueError("S3 needs max(q, q') > 1")
    hist = [Fraction(0)] * qbar
    for c in range(qbar):
        for d in range(qbar):
            w = xi(q, coordinate_after(f, c, d, omega))
            if w == 0:
                continue
            w2 = xi(q2, coordinate_after(f, c, d, omega2))
            if w2 == 0:
                continue
            hist[(c * k + d * l) % qbar] += w * w2
    return _collapse_histogram(qbar, hist) / (qbar * qbar)


def s3_factorization_check(
    q: int,
    q2: int,
    f: Form,
    k: int,
    l: int,
    omega: UnimodularMatrix,
    omega2: UnimodularMatrix,
) -> bool:
    """Recompute S3 from the definition and compare, exactly, with
    S4(q/qt) S4(q2/qt) S5(qt) at qt = gcd(q, q2)."""
    qt = math.gcd(q, q2)
    q1, q1p = q // qt, q2 // qt
    factor5 = s5(qt, f, k, l, omega, omega2)
    assert abs(factor5.value) <= 1
    product = s4(q1, f, k, l, omega).value * s4(q1p, f, k, l, omega2).value * factor5.value
    direct = s3_direct(q, q2, f, k, l, omega, omega2)
    return direct == product


def disjointness_check(p: int) -> bool:
    """At most one of x, y, z vanishes mod p on every nonzero row (c, d).

    Grants the prime-modulus identity 1_{xyz=0} = 1_{x=0} + 1_{y=0} + 1_{z=0}
    on orbit rows (which are never (0,0) mod p).  The identity is false for
    composite moduli: (c,d)=(1,2) has x=3, z=5, so xyz = 0 mod 15 while no
    single coordinate vanishes mod 15.
    """
    if p == 2 or not sympy.isprime(p):
        raise ValueError(f"need an odd prime, got {p}")
    for c in range(p):
        for d in range(p):
            if c == 0 and d == 0:
                continue
            x = (d * d - c * c) % p
            y = (2 * c * d) % p
            z = (c * c + d * d) % p
            if (x == 0) + (y == 0) + (z == 0) > 1:
                return False
    return True


def orbit_divisibility_count(
    ball: OrbitBall, f: Form, q: int
) -> Tuple[int, Fraction, float]:
    """(count, predicted main term, ratio) for #{rows in the ball : q | f}.

    The prediction is d(q) |ball| / eta(q) with d(q) the number of vanishing
    cosets; report-only, no bound asserted.
    """
    primes = _require_odd_squarefree(q)
    n = len(ball)
    if q == 1:
        return n, Fraction(n), 1.0
    d_q = 1
    for p in primes:
        d_q *= int(predicted_density(f, p) * (p + 1))
    main = Fraction(d_q * n, eta(q))
    c = ball.rows[:, 2] % q
    d = ball.rows[:, 3] % q
    x = (d * d - c * c) % q
    y = (2 * c * d) % q
    z = (c * c + d * d) % q
    if f is Form.X:
        van = x == 0
    elif f is Form.Y:
        van = y == 0
    elif f is Form.Z:
        van = z == 0
    elif f is Form.AREA:
        van = (x * y) % q == 0
    else:
        van = (x * y % q) * z % q == 0
    count = int(van.sum())
    if main > 0:
        ratio = float(Fraction(count) / main)
    else:
        ratio = 0.0 if count == 0 else math.inf
    return count, main, ratio
