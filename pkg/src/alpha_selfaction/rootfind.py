"""Bracketed derivative-free scalar root finding.

Bisection with secant acceleration (Illinois-weighted regula falsi, falling
back to bisection whenever the secant step stalls).  Deterministic: no
randomness, fixed evaluation order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable


class BracketError(RuntimeError):
    """No sign change on the supplied (possibly expanded) bracket."""


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class RootResult:
    root: float
    f_root: float
    iterations: int
    bracket: tuple[float, float]


def expand_bracket(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    max_expand: int = 8,
    grow: float = 4.0,
    lo_floor: float = 0.0,
) -> tuple[float, float]:
    """Geometrically widen (lo, hi) until f changes sign across it."""
    flo, fhi = f(lo), f(hi)
    for _ in range(max_expand + 1):
        if flo == 0.0 or fhi == 0.0 or (flo > 0) != (fhi > 0):
            return lo, hi
        lo = max(lo_floor + (lo - lo_floor) / grow, lo_floor)
        hi = hi * grow
        flo, fhi = f(lo), f(hi)
    raise BracketError(f"no sign change in ({lo}, {hi})")


def bracketed_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    xtol: float = 0.0,
    max_iter: int = 200,
) -> RootResult:
    """Find a root of f on a sign-changing bracket [lo, hi].

    The bracket is narrowed below ``max(xtol, a few ulp)``; with the default
    xtol=0 that means machine precision.  Returns the endpoint with the
    smaller true residual.
    """
    a, b = float(lo), float(hi)
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return RootResult(a, fa, 0, (a, b))
    if fb == 0.0:
        return RootResult(b, fb, 0, (a, b))
    if (fa > 0) == (fb > 0):
        raise BracketError(f"f({a})={fa} and f({b})={fb} have the same sign")

    fa_true, fb_true = fa, fb
    side = 0
    iterations = 0
    converged = False
    while iterations < max_iter:
        width = b - a
        if width <= max(xtol, 4e-16 * max(abs(a), abs(b))):
            converged = True
            break
        x = (a * fb - b * fa) / (fb - fa)
        if not (a < x < b) or min(x - a, b - x) < 1e-6 * width:
            x = a + 0.5 * width
        fx = f(x)
        iterations += 1
        if fx == 0.0:
            return RootResult(x, fx, iterations, (a, b))
        if (fx > 0) == (fa_true > 0):
            a, fa, fa_true = x, fx, fx
            if side == -1:
                fb *= 0.5
            side = -1
        else:
            b, fb, fb_true = x, fx, fx
            if side == 1:
                fa *= 0.5
            side = 1
    if not converged:
        raise ConvergenceError(f"root not localized after {max_iter} iterations")
    if abs(fa_true) <= abs(fb_true):
        return RootResult(a, fa_true, iterations, (a, b))
    return RootResult(b, fb_true, iterations, (a, b))
