"""Sieve constants: critical exponents, saturation numbers, feasibility.

Everything here is finite formula arithmetic.  The critical exponent delta0
is the positive root of 12 d^2 + 32 d - (8 D a + 39); the saturation number R
comes from minimizing the Diamond-Halberstam-Richert bound m_{a,k}(z) over
the sifting variable z; the exponent system is five explicit inequalities in
(delta, x, y, alpha0) whose feasibility region closes up exactly at the
delta0 root via the identity

    (3 + 2 d) (6 d - 5) - 4 (6 - 6 d) - 8 D a = 12 d^2 + 32 d - 8 D a - 39.

The linear-sieve (kappa = 1) threshold and the beta_kappa constants are
pinned literature values; nothing here solves the underlying sieve systems.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from .gl2 import Form

GREAVES_DELTA = 0.103974  # pinned linear-sieve loss constant
BETA_KAPPA: Dict[int, float] = {4: 9.0722, 5: 11.5347}
THETA_DEFAULT = 5.0 / 6.0  # spectral-gap parameter


@dataclass(frozen=True)
class SieveSpec:
    """One point of the exponent system, with the sieve data attached."""

    kappa: int
    D: int
    alpha: float
    delta: float
    x: float
    alpha0: float
    theta: float = THETA_DEFAULT
    form: Optional[Form] = None
    beta_kappa: Optional[float] = None

    def __post_init__(self):
        if self.kappa not in (1, 4, 5):
            raise ValueError(f"kappa must be 1, 4, or 5, got {self.kappa}")
        if self.D not in (2, 4, 6):
            raise ValueError(f"D must be 2, 4, or 6, got {self.D}")

    @property
    def y(self) -> float:
        return 1.0 - self.x


@dataclass(frozen=True)
class ExponentSystemReport:
    """Slack of each inequality (positive = satisfied, with that margin)."""

    feasible: bool
    slacks: Tuple[float, float, float, float, float]


def exponent_system_check(spec: SieveSpec) -> ExponentSystemReport:
    """Evaluate the five inequalities of the exponent system.

    1. D a0 < 2 (delta - theta) x        4. x (1 - delta) < y (delta - theta)
    2. D a0 > 0                          5. 8 D alpha + 4 y < (3 + 2 delta) x
    3. x (1 - delta) < a0
    """
    d, x, y, a0, th = spec.delta, spec.x, spec.y, spec.alpha0, spec.theta
    D, a = spec.D, spec.alpha
    slacks = (
        2 * (d - th) * x - D * a0,
        D * a0,
        a0 - x * (1 - d),
        y * (d - th) - x * (1 - d),
        (3 + 2 * d) * x - 8 * D * a - 4 * y,
    )
    return ExponentSystemReport(all(s > 0 for s in slacks), slacks)


def search_exponent_system(
    D: int, alpha: float, theta: float = THETA_DEFAULT, kappa: int = 4
) -> Optional[SieveSpec]:
    """Find a feasible (delta, x, alpha0) with y = 1 - x and delta, x <= 1,
    or None.  Grid over delta near 1; the x-window at each delta is the
    interval ((8 D alpha + 4)/(7 + 2 delta), (delta - theta)/(1 - theta))
    and alpha0 sits between x(1 - delta) and 2(delta - theta)x/D."""
    deltas = [1 - 10.0 ** -j for j in range(1, 13)]
    deltas += [0.95, 0.97, 0.98, 0.984, 0.9954718, 0.99626261]
    for d in sorted(set(deltas), reverse=True):
        if d <= theta or D * (1 - d) >= 2 * (d - theta):
            continue
        x_lo = (8 * D * alpha + 4) / (7 + 2 * d)
        x_hi = min(1.0, (d - theta) / (1 - theta))
        if x_lo >= x_hi:
            continue
        x = (x_lo + x_hi) / 2
        a0_lo = x * (1 - d)
        a0_hi = 2 * (d - theta) * x / D
        if a0_lo >= a0_hi:
            continue
        spec = SieveSpec(
            kappa=kappa, D=D, alpha=alpha, delta=d, x=x, alpha0=(a0_lo + a0_hi) / 2,
            theta=theta,
        )
        if exponent_system_check(spec).feasible:
            return spec
    return None


def delta0_quadratic(delta: float, D: int, alpha: float) -> float:
    """12 delta^2 + 32 delta - 8 D alpha - 39; negative below the root."""
    return 12 * delta * delta + 32 * delta - 8 * D * alpha - 39


def delta0(D: int, alpha: float) -> float:
    """Positive root of the critical-exponent quadratic."""
    if alpha <= 0:
        raise ValueError("need alpha > 0")
    if D not in (2, 4, 6):
        raise ValueError(f"D must be 2, 4, or 6, got {D}")
    return (-32 + math.sqrt(1024 + 48 * (8 * D * alpha + 39))) / 24


def greaves_threshold() -> float:
    """Level of distribution above which the linear sieve yields P_4."""
    return 1.0 / (4.0 - GREAVES_DELTA)


def _beta(kappa: int) -> float:
    if kappa not in BETA_KAPPA:
        raise ValueError(f"no pinned beta for kappa={kappa}; have {sorted(BETA_KAPPA)}")
    return BETA_KAPPA[kappa]


def m_dhr(alpha: float, kappa: int, zeta) -> float:
    """The saturation bound (1/a)(1 + z - z/b) - 1 + (k+z) log(b/z) - k + zk/b."""
    b = _beta(kappa)
    z = np.asarray(zeta, dtype=float)
    if np.any(z <= 0) or np.any(z >= b):
        raise ValueError(f"need 0 < zeta < {b}")
    val = (1.0 / alpha) * (1 + z - z / b) - 1 + (kappa + z) * np.log(b / z) - kappa + z * kappa / b
    return float(val) if np.isscalar(zeta) or val.ndim == 0 else val


_GOLDEN = (math.sqrt(5) - 1) / 2


def optimize_m(alpha: float, kappa: int) -> Tuple[float, float]:
    """(zeta*, m*): the infimum of m_dhr over (0, beta_kappa) to 1e-6.

    Coarse 1000-point grid bracket, then golden-section refinement; the grid
    scan shows the function is unimodal on this interval.
    """
    if alpha <= 0:
        raise ValueError("need alpha > 0")
    b = _beta(kappa)
    grid = np.linspace(0, b, 1002)[1:-1]
    vals = m_dhr(alpha, kappa, grid)
    i = int(np.argmin(vals))
    lo = grid[max(0, i - 1)]
    hi = grid[min(len(grid) - 1, i + 1)]
    c = hi - _GOLDEN * (hi - lo)
    d = lo + _GOLDEN * (hi - lo)
    fc = m_dhr(alpha, kappa, c)
    fd = m_dhr(alpha, kappa, d)
    while hi - lo > 1e-9:
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - _GOLDEN * (hi - lo)
            fc = m_dhr(alpha, kappa, c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _GOLDEN * (hi - lo)
            fd = m_dhr(alpha, kappa, d)
    z = (lo + hi) / 2
    return z, m_dhr(alpha, kappa, z)


def saturation_R(alpha: float, kappa: int) -> int:
    """Least integer strictly greater than the optimized m*."""
    _, m_star = optimize_m(alpha, kappa)
    return math.floor(m_star) + 1


def alpha_min_for_R(kappa: int, R: int) -> float:
    """Minimal level of distribution attaining saturation R, to 1e-7.

    m* is strictly decreasing in alpha, so bisect for the smallest alpha
    with m*(alpha, kappa) < R.
    """
    hi = 0.5
    if optimize_m(hi, kappa)[1] >= R:
        raise ValueError(f"R={R} not attainable for kappa={kappa} with alpha <= 1/2")
    lo = 1e-4
    if optimize_m(lo, kappa)[1] < R:
        return lo
    while hi - lo > 1e-7:
        mid = (lo + hi) / 2
        if optimize_m(mid, kappa)[1] < R:
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class SaturationRow:
    form: Form
    R: int
    alpha: float
    delta0: float


def saturation_table() -> Tuple[SaturationRow, SaturationRow, SaturationRow]:
    """The three (form, R, alpha, delta0) rows: hypotenuse via the linear
    sieve threshold, area and product via the DHR optimization."""
    a_z = greaves_threshold()
    a_area = alpha_min_for_R(4, 18)
    a_prod = alpha_min_for_R(5, 26)
    return (
        SaturationRow(Form.Z, 4, a_z, delta0(2, a_z)),
        SaturationRow(Form.AREA, 18, a_area, delta0(4, a_area)),
        SaturationRow(Form.PRODUCT, 26, a_prod, delta0(6, a_prod)),
    )


def table_text(rows=None) -> str:
    rows = saturation_table() if rows is None else rows
    lines = [f"{'form':<8} {'R':>3} {'alpha':>11} {'delta0':>12}"]
    for r in rows:
        lines.append(f"{r.form.value:<8} {r.R:>3} {r.alpha:>11.7f} {r.delta0:>12.9f}")
    return "\n".join(lines) + "\n"


def table_csv(rows=None) -> str:
    rows = saturation_table() if rows is None else rows
    lines = ["form,R,alpha,delta0"]
    for r in rows:
        lines.append(f"{r.form.value},{r.R},{r.alpha:.7f},{r.delta0:.9f}")
    return "\n".join(lines) + "\n"


def table_json(rows=None) -> str:
    rows = saturation_table() if rows is None else rows
    payload = [
        {"form": r.form.value, "R": r.R, "alpha": round(r.alpha, 7),
         "delta0": round(r.delta0, 9)}
        for r in rows
    ]
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"
