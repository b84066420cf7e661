"""The transcendental eigenvalue equation whose root is the coupling constant.

The expectation condition on the second invariant density balances three
damped radial integrals,

    cosh^2(sqrt(a-b)) * I56 - sinh^2(sqrt(a-b)) * I57 = lambda(a, b) * I59,

where I56, I57, I59 integrate the second product density against the weights
s/a, s^2/b and 1, and lambda = (a-b)^(1/(1+sqrt(a))) is the converging
infinite product of charge-power factors.  Two evaluation modes:

* eq64_closed: the printed closed form with b = a^2/8, the literal constant
  1.41055 and the two asymptotic moment values 4/a^2.  Kept exactly as
  printed so this route stays independent of the series machinery.

* full_series: the three integrals evaluated with the complete product
  series at a chosen truncation order, with b(a) from the exact-moment root
  of the leading condition (solve_beta numeric mode).  Using the numeric-mode
  b keeps the refinement contracting; see the residual notes in the README.

The root is found by bracketed bisection with secant acceleration;
refine_alpha tabulates the root against the series truncation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from . import rootfind
from .moments import NUMERIC, integrate_series_damped, solve_beta
from .series import FIRST, SECOND, generate_family, normalized_product

EQ64_CLOSED = "eq64_closed"
FULL_SERIES_MODE = "full_series"

# Closed-route constant as printed; equals gamma_EM + 5/6 to the digits kept.
CLOSED_FORM_CONSTANT = 1.41055

EXPERIMENTAL_ALPHA = 0.007297357  # quoted reference value, printed alongside results


class NoSignChangeError(RuntimeError):
    pass


def lambda_exponent(alpha: float) -> float:
    """Exponent of (alpha - beta) in the eigenvalue lambda.

    The alternating geometric ladder of charge powers sums to
    sum_n (-sqrt(alpha))^n = 1/(1 + sqrt(alpha)).
    """
    if not 0 < alpha < 1:
        raise ValueError("lambda_exponent expects 0 < alpha < 1")
    return 1.0 / (1.0 + math.sqrt(alpha))


def eigenvalue_lambda(alpha: float, beta: float) -> float:
    return (alpha - beta) ** lambda_exponent(alpha)


@dataclass(frozen=True)
class EigenConfig:
    bracket: tuple[float, float] = (0.005, 0.01)
    tol: float = 1e-12
    mode: str = EQ64_CLOSED
    series_order: int = 2
    quadrature_tol: float = 1e-12

    def __post_init__(self):
        lo, hi = self.bracket
        if not (0 < lo < hi < 0.1):
            raise ValueError("bracket must satisfy 0 < lo < hi < 0.1")
        if self.mode not in (EQ64_CLOSED, FULL_SERIES_MODE):
            raise ValueError(f"unknown mode {self.mode!r}")


@dataclass(frozen=True)
class EigenSides:
    """Both sides of the eigenvalue equation at one alpha, decomposed."""

    alpha: float
    beta: float
    lhs: float
    rhs: float
    omega1_term: float   # cosh^2 * I56
    omega2_term: float   # sinh^2 * I57
    lambda_term: float   # lambda * I59
    integrals: tuple[float, float, float]

    @property
    def residual(self) -> float:
        return self.lhs - self.rhs


@lru_cache(maxsize=None)
def _ff_product(order: int):
    first = generate_family(FIRST, order)
    second = generate_family(SECOND, order)
    base = normalized_product(first, second, "FF")
    return base, base.shift(s=1), base.shift(s=2)


@lru_cache(maxsize=None)
def _beta_numeric(alpha: float, tol: float) -> float:
    return solve_beta(alpha, NUMERIC, tol=tol).beta_numeric


def eq64_sides(
    alpha: float,
    mode: str = EQ64_CLOSED,
    series_order: int = 2,
    quadrature_tol: float = 1e-12,
) -> EigenSides:
    """Evaluate both sides of the eigenvalue equation."""
    if not 0 < alpha < 0.1:
        raise ValueError("eq64 expects 0 < alpha < 0.1")
    if mode == EQ64_CLOSED:
        beta = alpha**2 / 8.0
        i56 = -(math.log(alpha**2 / 4.0) + CLOSED_FORM_CONSTANT) / alpha
        i57 = 4.0 / alpha**2
        i59 = 4.0 / alpha**2
    elif mode == FULL_SERIES_MODE:
        beta = _beta_numeric(alpha, quadrature_tol)
        eta = 2.0 * beta
        base, s1, s2 = _ff_product(series_order)
        i56 = integrate_series_damped(s1, eta, alpha, tol=quadrature_tol).value / alpha
        i57 = integrate_series_damped(s2, eta, alpha, tol=quadrature_tol).value / beta
        i59 = integrate_series_damped(base, eta, alpha, tol=quadrature_tol).value
    else:
        raise ValueError(f"unknown mode {mode!r}")
    x = math.sqrt(alpha - beta)
    omega1 = math.cosh(x) ** 2
    omega2 = math.sinh(x) ** 2
    t1 = omega1 * i56
    t2 = omega2 * i57
    t3 = eigenvalue_lambda(alpha, beta) * i59
    return EigenSides(alpha, beta, t1 - t2, t3, t1, t2, t3, (i56, i57, i59))


def eq64_residual(
    alpha: float, mode: str = EQ64_CLOSED, series_order: int = 2
) -> tuple[float, float]:
    """(lhs, rhs) of the eigenvalue equation at alpha."""
    sides = eq64_sides(alpha, mode, series_order)
    return sides.lhs, sides.rhs


@dataclass(frozen=True)
class AlphaResult:
    alpha_root: float
    beta_implied: float
    lhs: float
    rhs: float
    omega1_term: float
    omega2_term: float
    lambda_term: float
    iterations: int
    mode: str
    series_order: int

    @property
    def relative_residual(self) -> float:
        return abs(self.lhs - self.rhs) / max(abs(self.lhs), abs(self.rhs))


def solve_alpha(cfg: EigenConfig = EigenConfig()) -> AlphaResult:
    """Root of lhs - rhs on the configured bracket.

    Requires a sign change across the bracket; the bracket is narrowed to
    machine precision (never wider than cfg.tol) by bisection with secant
    acceleration, and the returned residual decomposition is evaluated at
    the root.
    """

    def residual(a: float) -> float:
        return eq64_sides(a, cfg.mode, cfg.series_order, cfg.quadrature_tol).residual

    lo, hi = cfg.bracket
    f_lo, f_hi = residual(lo), residual(hi)
    if f_lo != 0.0 and f_hi != 0.0 and (f_lo > 0) == (f_hi > 0):
        raise NoSignChangeError(
            f"no sign change of lhs-rhs on ({lo}, {hi}): {f_lo:.6g}, {f_hi:.6g}"
        )
    result = rootfind.bracketed_root(residual, lo, hi, xtol=min(cfg.tol, 1e-12))
    sides = eq64_sides(result.root, cfg.mode, cfg.series_order, cfg.quadrature_tol)
    return AlphaResult(
        result.root,
        sides.beta,
        sides.lhs,
        sides.rhs,
        sides.omega1_term,
        sides.omega2_term,
        sides.lambda_term,
        result.iterations + 2,
        cfg.mode,
        cfg.series_order if cfg.mode == FULL_SERIES_MODE else 0,
    )


@dataclass(frozen=True)
class RefinementRow:
    order: int
    mode: str
    alpha_root: float
    beta: float
    change: float | None


@dataclass(frozen=True)
class RefinementTable:
    rows: tuple[RefinementRow, ...]

    @property
    def final_alpha(self) -> float:
        return self.rows[-1].alpha_root

    @property
    def changes(self) -> tuple[float, ...]:
        return tuple(r.change for r in self.rows if r.change is not None)

    @property
    def uncertainty(self) -> float:
        changes = self.changes
        return changes[-1] if changes else float("nan")


def refine_alpha(max_order: int, cfg: EigenConfig = EigenConfig()) -> RefinementTable:
    """Tabulate the root against series truncation order.

    Row 0 is the closed-route baseline; row n >= 1 regenerates the families
    to order n, re-evaluates the three integrals with the complete products
    and re-solves.  Successive changes give the convergence estimate; the
    last change is reported as the uncertainty of the final value.
    """
    if max_order < 1:
        raise ValueError("max_order must be >= 1")
    rows = []
    base = solve_alpha(
        EigenConfig(cfg.bracket, cfg.tol, EQ64_CLOSED, 0, cfg.quadrature_tol)
    )
    rows.append(RefinementRow(0, EQ64_CLOSED, base.alpha_root, base.beta_implied, None))
    prev = base.alpha_root
    for order in range(1, max_order + 1):
        res = solve_alpha(
            EigenConfig(cfg.bracket, cfg.tol, FULL_SERIES_MODE, order, cfg.quadrature_tol)
        )
        rows.append(
            RefinementRow(
                order, FULL_SERIES_MODE, res.alpha_root, res.beta_implied,
                abs(res.alpha_root - prev),
            )
        )
        prev = res.alpha_root
    return RefinementTable(tuple(rows))
