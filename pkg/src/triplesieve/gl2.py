"""Exact arithmetic for SL(2,Z), the spin cover to SO_F, and the integer forms.

The quadratic form throughout is F(x, y, z) = x^2 + y^2 - z^2.  A bottom row
(c, d) of an SL(2,Z) matrix parametrizes the Pythagorean triple

    (x, y, z) = (d^2 - c^2, 2cd, c^2 + d^2),

and the spin cover iota: SL(2,R) -> SO_F(R) intertwines the two actions:
with x0 = (0, 1) and X0 = (1, 0, 1),

    X0 . iota(g) = (x, y, z)(x0 . g)    for every g.

Three integer-valued forms are evaluated on rows:

    Z        z = c^2 + d^2                 (degree 2)
    AREA     xy/12 = cd(d^2-c^2)/6         (degree 4)
    PRODUCT  xyz/60 = cd(d^4-c^4)/30       (degree 6)

The divisions are exact for all integer (c, d); this is checked by an
exhaustive residue computation in the test suite.

All arithmetic in this module is exact (int / Fraction); no floats.
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction
from typing import Iterable, Tuple


class UnimodularMatrix:
    """A 2x2 integer matrix with determinant 1, row-major entries (a, b; c, d)."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: int, b: int, c: int, d: int):
        a, b, c, d = int(a), int(b), int(c), int(d)
        if a * d - b * c != 1:
            raise ValueError(f"determinant must be 1, got {a * d - b * c}")
        self.a, self.b, self.c, self.d = a, b, c, d

    @classmethod
    def identity(cls) -> "UnimodularMatrix":
        return cls(1, 0, 0, 1)

    def entries(self) -> Tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def bottom_row(self) -> Tuple[int, int]:
        return (self.c, self.d)

    def trace(self) -> int:
        return self.a + self.d

    def inverse(self) -> "UnimodularMatrix":
        return UnimodularMatrix(self.d, -self.b, -self.c, self.a)

    def transpose(self) -> "UnimodularMatrix":
        return UnimodularMatrix(self.a, self.c, self.b, self.d)

    def __matmul__(self, other: "UnimodularMatrix") -> "UnimodularMatrix":
        return UnimodularMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __neg__(self) -> "UnimodularMatrix":
        # -g also has determinant 1 in 2x2.
        return UnimodularMatrix(-self.a, -self.b, -self.c, -self.d)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, UnimodularMatrix):
            return NotImplemented
        return self.entries() == other.entries()

    def __hash__(self) -> int:
        return hash(self.entries())

    def __repr__(self) -> str:
        return f"UnimodularMatrix({self.a}, {self.b}, {self.c}, {self.d})"


def multiply(g: UnimodularMatrix, h: UnimodularMatrix) -> UnimodularMatrix:
    """Exact product g.h; determinant 1 is preserved automatically."""
    return g @ h


def sq_norm(g: UnimodularMatrix) -> int:
    """Squared Frobenius norm a^2 + b^2 + c^2 + d^2 (always >= 2 when det = 1)."""
    return g.a * g.a + g.b * g.b + g.c * g.c + g.d * g.d


# Elementary generators of SL(2,Z); R adds column 1 to column 2 on the right,
# L adds column 2 to column 1.
GEN_R = UnimodularMatrix(1, 1, 0, 1)
GEN_L = UnimodularMatrix(1, 0, 1, 1)


class PythagoreanTriple:
    """Integer triple with x^2 + y^2 = z^2 and z >= 0."""

    __slots__ = ("x", "y", "z")

    def __init__(self, x: int, y: int, z: int):
        x, y, z = int(x), int(y), int(z)
        if x * x + y * y - z * z != 0:
            raise ValueError(f"not on the cone: F{(x, y, z)} = {x * x + y * y - z * z}")
        if z < 0:
            raise ValueError("z must be nonnegative")
        self.x, self.y, self.z = x, y, z

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.x, self.y, self.z)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PythagoreanTriple):
            return NotImplemented
        return self.as_tuple() == other.as_tuple()

    def __hash__(self) -> int:
        return hash(self.as_tuple())

    def __repr__(self) -> str:
        return f"PythagoreanTriple{self.as_tuple()}"


def triple_from_row(c: int, d: int) -> PythagoreanTriple:
    """(c, d) -> (d^2 - c^2, 2cd, c^2 + d^2).  The zero row is rejected."""
    c, d = int(c), int(d)
    if c == 0 and d == 0:
        raise ValueError("zero row has no triple")
    return PythagoreanTriple(d * d - c * c, 2 * c * d, c * c + d * d)


# Gram matrix of F as a diagonal, used for the SO_F membership check.
_F_SIGNS = (1, 1, -1)


class RationalMatrix3:
    """A 3x3 matrix of exact rationals preserving F: M^t diag(1,1,-1) M = diag(1,1,-1)."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable]):
        rs = tuple(tuple(Fraction(e) for e in row) for row in rows)
        if len(rs) != 3 or any(len(r) != 3 for r in rs):
            raise ValueError("need a 3x3 matrix")
        self.rows = rs
        self._check_preserves_form()

    def _check_preserves_form(self) -> None:
        # (M^t G M)[i][j] = sum_k M[k][i] G[k][k] M[k][j]
        for i in range(3):
            for j in range(3):
                s = sum(self.rows[k][i] * _F_SIGNS[k] * self.rows[k][j] for k in range(3))
                want = _F_SIGNS[i] if i == j else 0
                if s != want:
                    raise ValueError(f"matrix does not preserve the form at entry {(i, j)}")

    def apply_row(self, v: Tuple) -> Tuple[Fraction, Fraction, Fraction]:
        """Row-vector action v . M."""
        v = tuple(Fraction(e) for e in v)
        if len(v) != 3:
            raise ValueError("need a length-3 row vector")
        return tuple(sum(v[k] * self.rows[k][j] for k in range(3)) for j in range(3))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RationalMatrix3):
            return NotImplemented
        return self.rows == other.rows

    def __repr__(self) -> str:
        return f"RationalMatrix3({[[str(e) for e in r] for r in self.rows]})"


X0 = (1, 0, 1)
ROW_X0 = (0, 1)


def spin(g: UnimodularMatrix) -> RationalMatrix3:
    """The spin cover SL(2) -> SO_F.

    Entries are half-integer combinations of products of the entries of g;
    the defining identities (form preservation, and X0 . spin(g) equals the
    triple of the bottom row of g) hold exactly and are enforced/tested.
    """
    a, b, c, d = g.entries()
    h = Fraction(1, 2)
    return RationalMatrix3(
        (
            (h * (a * a - b * b - c * c + d * d), c * d - a * b, h * (-a * a - b * b + c * c + d * d)),
            (b * d - a * c, b * c + a * d, a * c + b * d),
            (h * (-a * a + b * b - c * c + d * d), a * b + c * d, h * (a * a + b * b + c * c + d * d)),
        )
    )


class Form(enum.Enum):
    """The five coordinate forms evaluated on orbit rows.

    degree is the total degree in (c, d); kappa is the sieve dimension
    (number of irreducible factors of the associated polynomial).
    """

    X = "x"
    Y = "y"
    Z = "z"
    AREA = "area"
    PRODUCT = "product"

    @property
    def degree(self) -> int:
        return {"x": 2, "y": 2, "z": 2, "area": 4, "product": 6}[self.value]

    @property
    def kappa(self) -> int:
        return {"x": 1, "y": 1, "z": 1, "area": 4, "product": 5}[self.value]

    @classmethod
    def parse(cls, s: str) -> "Form":
        key = s.strip().lower()
        aliases = {"xy": "area", "xyz": "product"}
        key = aliases.get(key, key)
        for f in cls:
            if f.value == key:
                return f
        raise ValueError(f"unknown form {s!r}; choose from x, y, z, area, product")


def form_value(f: Form, c: int, d: int) -> int:
    """Exact integer value of the form on the row (c, d).

    The AREA and PRODUCT divisions (by 12 and 60) are exact for every integer
    row; inexactness would mean corrupted arithmetic and raises.
    """
    c, d = int(c), int(d)
    if c == 0 and d == 0:
        raise ValueError("zero row")
    x = d * d - c * c
    y = 2 * c * d
    z = c * c + d * d
    if f is Form.X:
        return x
    if f is Form.Y:
        return y
    if f is Form.Z:
        return z
    if f is Form.AREA:
        num = x * y
        q, r = divmod(num, 12)
        if r:
            raise ValueError(f"xy = {num} not divisible by 12 at row {(c, d)}")
        return q
    if f is Form.PRODUCT:
        num = x * y * z
        q, r = divmod(num, 60)
        if r:
            raise ValueError(f"xyz = {num} not divisible by 60 at row {(c, d)}")
        return q
    raise ValueError(f"unknown form {f!r}")


def form_triple_value(f: Form, t: PythagoreanTriple) -> Fraction:
    """Form value from a triple directly (x*y/12 etc.); rational in general."""
    if f is Form.X:
        return Fraction(t.x)
    if f is Form.Y:
        return Fraction(t.y)
    if f is Form.Z:
        return Fraction(t.z)
    if f is Form.AREA:
        return Fraction(t.x * t.y, 12)
    if f is Form.PRODUCT:
        return Fraction(t.x * t.y * t.z, 60)
    raise ValueError(f"unknown form {f!r}")


def row_after(c: int, d: int, omega: UnimodularMatrix) -> Tuple[int, int]:
    """Row-vector action (c, d) . omega."""
    return (c * omega.a + d * omega.c, c * omega.b + d * omega.d)


def gcd(a: int, b: int) -> int:
    return math.gcd(a, b)
