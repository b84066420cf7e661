"""Independent numerical verification of the series machinery.

Direct adaptive Runge-Kutta integration of the reduced system from the
boundary data at s = 1, comparison against the truncated series, continuity
of the damped interior solutions with the closed exterior forms, profile
data for plotting, and the n-dimensional inverse-distance Laplacian identity.

Everything here deliberately avoids the exact-series code paths except where
a comparison is the point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import mpmath
import numpy as np
from scipy.integrate import solve_ivp

from .series import (
    FIRST,
    SECOND,
    SolutionFamily,
    external_pair,
    generate_family,
)
from . import rootfind

INWARD = "inward"
OUTWARD = "outward"


class OracleIntegrationError(RuntimeError):
    """The adaptive integrator failed (step underflow near the origin, etc.)."""


@dataclass(frozen=True)
class Trajectory:
    alpha: float
    kind: str
    samples: tuple[tuple[float, float, float], ...]
    tolerances: tuple[float, float]
    direction: str = INWARD


def _rhs(alpha: float):
    def rhs(s, y):
        f, g = y
        q = (1.0 - 1.0 / s) * alpha
        return (q * g - 2.0 * f / s, -q * f)

    return rhs


def _initial(kind: str) -> tuple[float, float]:
    # first family: (F, G)(1) = (0, 1); second: (f, g)(1) = (1, 0)
    if kind == FIRST:
        return (0.0, 1.0)
    if kind == SECOND:
        return (1.0, 0.0)
    raise ValueError(f"unknown kind {kind!r}")


def integrate_ode(
    alpha: float, kind: str, s_stop: float, tol: float = 1e-12
) -> Trajectory:
    """Integrate the reduced system from s = 1 inward to s_stop.

    High-order adaptive Runge-Kutta with per-component relative error
    control; the trajectory holds the accepted steps.
    """
    if not 0.0 < s_stop < 1.0:
        raise ValueError("s_stop must lie in (0, 1)")
    rtol = max(tol, 2.5e-14)
    atol = 1e-18
    sol = solve_ivp(
        _rhs(alpha), (1.0, s_stop), _initial(kind), method="DOP853",
        rtol=rtol, atol=atol,
    )
    if not sol.success:
        raise OracleIntegrationError(sol.message)
    samples = tuple(
        (float(t), float(y0), float(y1)) for t, y0, y1 in zip(sol.t, sol.y[0], sol.y[1])
    )
    return Trajectory(alpha, kind, samples, (rtol, atol))


def _ode_on_grid(
    alpha: float, kind: str, grid: Sequence[float], tol: float = 1e-12
) -> list[tuple[float, float]]:
    """Values at the grid points, integrating segment endpoints exactly.

    The grid is visited in descending order, continuing one integration from
    segment to segment so the error control applies at every requested point
    (no dense-output interpolation).
    """
    pts = sorted(set(float(s) for s in grid), reverse=True)
    rtol = max(tol, 2.5e-14)
    out = {}
    s_from, y = 1.0, _initial(kind)
    for s_to in pts:
        if s_to >= 1.0:
            out[s_to] = tuple(y)
            continue
        sol = solve_ivp(
            _rhs(alpha), (s_from, s_to), y, method="DOP853", rtol=rtol, atol=1e-18
        )
        if not sol.success:
            raise OracleIntegrationError(sol.message)
        y = (float(sol.y[0][-1]), float(sol.y[1][-1]))
        s_from = s_to
        out[s_to] = y
    return [(s, out[s]) for s in pts]


DEFAULT_GRID = tuple(np.linspace(0.2, 0.99, 24))


def compare_series_ode(
    order: int,
    alpha: float,
    grid: Sequence[float] = DEFAULT_GRID,
    tol: float = 1e-13,
) -> float:
    """Max relative deviation between truncated series and direct integration.

    The maximum runs over both families, both components and all grid
    points; relative error uses a 1e-30 floor on the reference magnitude.
    """
    if not grid:
        raise ValueError("grid must be nonempty")
    floor = 1e-30
    worst = 0.0
    for kind in (FIRST, SECOND):
        family = generate_family(kind, order)
        for s, (f_ode, g_ode) in _ode_on_grid(alpha, kind, grid, tol):
            f_ser = family.eval_F(s, alpha)
            g_ser = family.eval_G(s, alpha)
            for ser, ode in ((f_ser, f_ode), (g_ser, g_ode)):
                worst = max(worst, abs(ser - ode) / max(abs(ode), floor))
    return worst


@dataclass(frozen=True)
class ContinuityReport:
    alpha: float
    beta: float
    gaps: dict[str, float]
    exterior_product_max: float

    @property
    def max_gap(self) -> float:
        return max(self.gaps.values())


def continuity_check(alpha: float, beta: float, order: int = 2) -> ContinuityReport:
    """Value gaps at s = 1 between damped interior series and exterior forms.

    The interior damping uses the energy ratio gamma = 1, under which the
    matching at the boundary is exact; the exterior product G*g + F*f is
    sampled beyond s = 1 and is identically zero there.
    """
    if not (alpha > 0 and beta > 0):
        raise ValueError("alpha and beta must be positive")
    first = generate_family(FIRST, order)
    second = generate_family(SECOND, order)
    ext_gf, ext_fg = external_pair(beta)
    f_in, g_in = first.eval_damped(1.0, alpha, beta)
    sf_in, sg_in = second.eval_damped(1.0, alpha, beta)
    gaps = {
        "G": abs(g_in - ext_gf.G(1.0)),
        "F": abs(f_in - ext_gf.F(1.0)),
        "f": abs(sf_in - ext_fg.f(1.0)),
        "g": abs(sg_in - ext_fg.g(1.0)),
    }
    prod_max = max(
        abs(ext_gf.G(s) * ext_fg.g(s) + ext_gf.F(s) * ext_fg.f(s))
        for s in (1.0, 1.05, 1.1, 1.2)
    )
    return ContinuityReport(alpha, beta, gaps, prod_max)


FIG_HEADER = ("s", "F", "G", "f", "g", "Gg", "Ff")


@dataclass(frozen=True)
class ProfileData:
    header: tuple[str, ...]
    rows: tuple[tuple[float, ...], ...]
    g_zero: float


def locate_g_zero(alpha: float, order: int = 2) -> float:
    """Single zero crossing of the first-family G, near s^2 = alpha^2/12."""
    family = generate_family(FIRST, order)
    g = lambda s: family.eval_G(s, alpha)
    guess = alpha / math.sqrt(12.0)
    return rootfind.bracketed_root(g, guess / 50.0, 0.5, xtol=1e-16 * guess).root


def fig1_data(
    alpha: float, beta: float, n_samples: int, order: int = 2
) -> ProfileData:
    """Profile table on a log grid over (0, 1.2], plus the G zero location.

    Interior (s <= 1): damped series values.   Exterior: closed forms with
    F = 0, g = 0, so both product columns vanish identically beyond s = 1.
    The grid starts at beta/100, deep inside the damped region, so every
    emitted function has already collapsed to zero at the left edge.
    """
    if n_samples < 2:
        raise ValueError("need at least two samples")
    first = generate_family(FIRST, order)
    second = generate_family(SECOND, order)
    ext_gf, ext_fg = external_pair(beta)
    grid = np.geomspace(beta / 100.0, 1.2, n_samples)
    rows = []
    for s in grid:
        s = float(s)
        if s <= 1.0:
            F, G = first.eval_damped(s, alpha, beta)
            f, g = second.eval_damped(s, alpha, beta)
        else:
            F, G = ext_gf.F(s), ext_gf.G(s)
            f, g = ext_fg.f(s), ext_fg.g(s)
        rows.append((s, F, G, f, g, G * g, F * f))
    return ProfileData(FIG_HEADER, tuple(rows), locate_g_zero(alpha, order))


@dataclass(frozen=True)
class LaplacianCheck:
    n: int
    coefficient: float          # analytic: 3 - n in  lap(1/r) = c * r^-3
    fd_coefficient: float       # finite-difference value at the spot point
    rel_error: float
    point: tuple[float, ...]


def laplacian_ndim(n: int, seed: int = 20240) -> LaplacianCheck:
    """Analytic coefficient 3 - n with a finite-difference spot check.

    The check sums fourth-order central second differences of
    (x1^2 + ... + xn^2)^(-1/2) at a pseudo-random unit-radius point,
    evaluated in 40-digit arithmetic so the stencil truncation (~1e-11)
    dominates the error.
    """
    if n < 2:
        raise ValueError("need n >= 2 dimensions")
    rng = np.random.default_rng(seed + n)
    direction = rng.normal(size=n)
    point = tuple(float(x) for x in direction / np.linalg.norm(direction))

    with mpmath.workdps(40):
        coords = [mpmath.mpf(x) for x in point]

        def inv_r(shift_idx, delta):
            total = mpmath.mpf(0)
            for k, c in enumerate(coords):
                v = c + delta if k == shift_idx else c
                total += v * v
            return 1 / mpmath.sqrt(total)

        h = mpmath.mpf("1e-3")
        lap = mpmath.mpf(0)
        center = inv_r(-1, 0)
        for k in range(n):
            lap += (
                -inv_r(k, 2 * h)
                + 16 * inv_r(k, h)
                - 30 * center
                + 16 * inv_r(k, -h)
                - inv_r(k, -2 * h)
            ) / (12 * h * h)
        fd_coeff = float(lap)  # r = 1, so lap(1/r) = c directly

    coeff = float(3 - n)
    rel = abs(fd_coeff - coeff) / max(1.0, abs(coeff))
    return LaplacianCheck(n, coeff, fd_coeff, rel, point)
