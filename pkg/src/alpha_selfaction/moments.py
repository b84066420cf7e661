"""Damped radial moments  M(p, q, eta) = int_0^1 exp(-eta/s) s^p (ln s)^q ds.

The damping factor w = exp(-eta/s) makes every integer-p moment finite.  Two
independent evaluation routes are provided:

* exact: the substitution u = eta/s reduces q = 0 moments to incomplete-gamma
  sums (p <= -2) or generalized exponential integrals E_n (p >= -1).  Higher
  log powers follow from the integration-by-parts ladder

      eta*M(p-1, q) + (p+1)*M(p, q) + q*M(p, q-1) = exp(-eta)*[q == 0],

  seeded at p = -1 by the order-derivative expansion of E_1, whose
  coefficients involve the Euler-Mascheroni constant and zeta values.

* quadrature: adaptive Gauss-Kronrod integration of the u-substituted
  integrand on [eta, U], with the exponentially decaying tail truncated at U.

Built on the moments are the flux limit check, the beta(alpha) condition in
its three variants, and damped integrals of whole log-polynomial series.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy import integrate as _integrate
from scipy import special as _special

from . import rootfind
from .terms import LogPolySeries

EULER_GAMMA = float(np.euler_gamma)

EXACT = "exact"
QUADRATURE = "quadrature"

ASYMPTOTIC = "asymptotic"
NUMERIC = "numeric"
FULL_SERIES = "full_series"

DEFAULT_TOL = 1e-12


class MomentConvergenceError(RuntimeError):
    """Adaptive refinement exceeded its depth bound or failed to converge."""


@dataclass(frozen=True)
class DampedMoment:
    """Exponent pair (p, q) and damping parameter eta of one moment."""

    p: int
    q: int
    eta: float

    def __post_init__(self):
        if self.q < 0:
            raise ValueError("log power q must be non-negative")
        if not self.eta > 0:
            raise ValueError("damping parameter eta must be positive")


# -- exact route ----------------------------------------------------------------


@lru_cache(maxsize=None)
def _gamma_laurent(n: int) -> tuple[float, ...]:
    """Taylor coefficients g_0..g_n of a*Gamma(a) around a = 0.

    From a*Gamma(a) = exp(-gamma*a + sum_{k>=2} (-1)^k zeta(k) a^k / k).
    """
    h = [0.0, -EULER_GAMMA] + [
        (-1.0) ** k * float(_special.zeta(k, 1)) / k for k in range(2, n + 1)
    ]
    g = [1.0]
    for m in range(1, n + 1):
        g.append(sum(k * h[k] * g[m - k] for k in range(1, m + 1)) / m)
    return tuple(g)


def _alt_series(m: int, eta: float) -> float:
    """sum_{k>=1} (-eta)^k / (k^m * k!), absolutely convergent for all eta."""
    term = 1.0
    acc = 0.0
    for k in range(1, 400):
        term *= -eta / k
        acc += term / k**m
        if abs(term) < 1e-20 * (1.0 + abs(acc)):
            return acc
    raise MomentConvergenceError(f"series for S_{m}({eta}) did not converge")


def _seed_p_minus1(q: int, eta: float) -> float:
    """M(-1, q, eta), the q-th order derivative of the E_1 family.

    M(-1, q) = (-1)^q q! [A_{q+1}(ln eta) - (-1)^q S_{q+1}(eta)] where
    A_n(L) = sum_{i+m=n} g_i (-L)^m / m! collects the Gamma-Laurent data.
    """
    L = math.log(eta)
    g = _gamma_laurent(q + 1)
    A = sum(
        g[i] * (-L) ** (q + 1 - i) / math.factorial(q + 1 - i) for i in range(q + 2)
    )
    sign = -1.0 if q % 2 else 1.0
    return sign * math.factorial(q) * (A - sign * _alt_series(q + 1, eta))


class _ExactMoments:
    """Memoized exact-moment table at fixed eta."""

    def __init__(self, eta: float):
        self.eta = float(eta)
        self._cache: dict[tuple[int, int], float] = {}

    def get(self, p: int, q: int) -> float:
        key = (p, q)
        if key not in self._cache:
            self._cache[key] = self._compute(p, q)
        return self._cache[key]

    def _compute(self, p: int, q: int) -> float:
        eta = self.eta
        if q == 0:
            if p >= -1:
                return float(_special.expn(p + 2, eta))
            k = -p - 2
            partial = sum(eta**j / math.factorial(j) for j in range(k + 1))
            return math.factorial(k) * math.exp(-eta) * eta ** (p + 1) * partial
        if p == -1:
            return _seed_p_minus1(q, eta)
        if p == -2:
            return -(q / eta) * self.get(-1, q - 1)
        if p < -2:
            return (-(p + 2) * self.get(p + 1, q) - q * self.get(p + 1, q - 1)) / eta
        return (-eta * self.get(p - 1, q) - q * self.get(p, q - 1)) / (p + 1)


# -- quadrature route -------------------------------------------------------------


def _tail_cutoff(power: int, floor: float) -> float:
    """Smallest U with exp(-U) U^power below ``floor`` (few fixed-point steps)."""
    U = max(-math.log(floor), 10.0)
    for _ in range(6):
        U = -math.log(floor) + power * math.log(max(U, 2.0))
    return U


def _moment_quadrature(p: int, q: int, eta: float, tol: float) -> float:
    """Adaptive Gauss-Kronrod moment after u = eta/s.

    M = eta^(p+1) * int_eta^U exp(-u) u^(-p-2) (ln eta - ln u)^q du, the tail
    beyond U being below tol/100 of the integral scale.
    """
    m = -p - 2
    ln_eta = math.log(eta)

    if q == 0:
        def integrand(u: float) -> float:
            return math.exp(-u) * u**m
    else:
        def integrand(u: float) -> float:
            return math.exp(-u) * u**m * (ln_eta - math.log(u)) ** q

    scale = math.exp(-eta) * max(1.0, math.gamma(m + 1) if m >= 0 else 1.0)
    floor = max(tol, 1e-15) * 1e-2 * scale * 1e-2
    upper = max(_tail_cutoff(max(m, 0) + q, max(floor, 1e-280)), eta * 2.0, 10.0)
    points = [1.0] if eta < 1.0 < upper else None
    epsrel = max(tol * 0.1, 5e-14)
    with warnings.catch_warnings():
        warnings.simplefilter("error", _integrate.IntegrationWarning)
        try:
            value, abserr = _integrate.quad(
                integrand, eta, upper, epsabs=0.0, epsrel=epsrel,
                limit=300, points=points,
            )
        except _integrate.IntegrationWarning as exc:
            raise MomentConvergenceError(str(exc)) from exc
    return eta ** (p + 1) * value


def damped_moment(moment: DampedMoment, mode: str = EXACT, tol: float = DEFAULT_TOL) -> float:
    """Evaluate one damped moment by the requested route."""
    if mode == EXACT:
        return _ExactMoments(moment.eta).get(moment.p, moment.q)
    if mode == QUADRATURE:
        if not tol > 0:
            raise ValueError("quadrature mode needs tol > 0")
        return _moment_quadrature(moment.p, moment.q, moment.eta, tol)
    raise ValueError(f"unknown moment mode {mode!r}")


def euler_probe(eta: float) -> float:
    """M(-1, 0, eta) + ln eta; tends to -gamma_EM = -0.577216... as eta -> 0."""
    if not 0 < eta < 1:
        raise ValueError("euler_probe expects 0 < eta < 1")
    return float(_special.exp1(eta)) + math.log(eta)


# -- series integration -------------------------------------------------------------


def _tree_sum(values: list[float]) -> float:
    """Fixed-partition pairwise reduction; bit-identical for any worker count."""
    n = len(values)
    if n == 0:
        return 0.0
    if n == 1:
        return values[0]
    mid = n // 2
    return _tree_sum(values[:mid]) + _tree_sum(values[mid:])


class SeriesIntegral(NamedTuple):
    value: float
    truncation_estimate: float


def integrate_series_damped(
    series: LogPolySeries,
    eta: float,
    alpha: float,
    mode: str = EXACT,
    tol: float = DEFAULT_TOL,
) -> SeriesIntegral:
    """int_0^1 w(s) * series(s; alpha) ds as a damped-moment combination.

    The per-term values are combined with a fixed-partition tree reduction.
    When the series records a truncated coupling order, the estimate scales
    the last retained alpha block's contribution by the remaining power gap.
    """
    if not eta > 0:
        raise ValueError("eta must be positive")
    if mode not in (EXACT, QUADRATURE):
        raise ValueError(f"unknown moment mode {mode!r}")
    table = _ExactMoments(eta) if mode == EXACT else None
    values = []
    for t in series.terms:
        if table is not None:
            m = table.get(t.s_pow, t.log_pow)
        else:
            m = _moment_quadrature(t.s_pow, t.log_pow, eta, tol)
        values.append(float(t.coeff) * alpha**t.alpha_pow * m)
    total = _tree_sum(values)

    estimate = 0.0
    discarded = series.truncation_order
    powers = series.alpha_powers()
    if discarded is not None and powers:
        top = powers[-1]
        top_block = [
            v for v, t in zip(values, series.terms) if t.alpha_pow == top
        ]
        block_mag = sum(abs(v) for v in top_block)
        estimate = block_mag * alpha ** (discarded - top)
    return SeriesIntegral(total, estimate)


# -- the beta(alpha) condition ----------------------------------------------------


@dataclass(frozen=True)
class BetaResult:
    """The three routes to beta at one alpha, with condition residuals.

    ``beta_asymptotic`` is exactly alpha^2/8.  ``beta_numeric`` root-solves
    the leading integrand condition  int w [(1-s)^2 - (alpha^2/12) s^-2] = 0
    with exact moments.  ``beta_full_series`` uses the complete product
    series s^2 G~g~ as the integrand.  ``residuals`` are the respective
    condition values at the reported roots (the asymptotic entry is the
    numeric-mode integrand evaluated at alpha^2/8).
    """

    alpha: float
    mode: str
    beta_asymptotic: float
    beta_numeric: float
    beta_full_series: float
    residuals: tuple[float, float, float]
    order: int

    @property
    def beta(self) -> float:
        return {
            ASYMPTOTIC: self.beta_asymptotic,
            NUMERIC: self.beta_numeric,
            FULL_SERIES: self.beta_full_series,
        }[self.mode]


def _leading_condition(alpha: float):
    """Integrand condition of the leading balance, as a function of beta."""

    def condition(beta: float) -> float:
        table = _ExactMoments(2.0 * beta)
        return (
            table.get(0, 0)
            - 2.0 * table.get(1, 0)
            + table.get(2, 0)
            - alpha**2 / 12.0 * table.get(-2, 0)
        )

    return condition


def solve_beta(
    alpha: float,
    mode: str = NUMERIC,
    tol: float = DEFAULT_TOL,
    order: int = 2,
) -> BetaResult:
    """Solve the vanishing-charge-moment condition relating beta to alpha.

    All three routes are computed and reported together; ``mode`` selects
    which one the ``beta`` property exposes.  Bracketing starts on
    (alpha^2/100, alpha^2) and widens geometrically on failure.
    """
    if not 0 < alpha < 0.1:
        raise ValueError("solve_beta expects 0 < alpha < 0.1")
    if mode not in (ASYMPTOTIC, NUMERIC, FULL_SERIES):
        raise ValueError(f"unknown beta mode {mode!r}")
    beta_asym = alpha**2 / 8.0

    numeric_condition = _leading_condition(alpha)
    lo, hi = rootfind.expand_bracket(
        numeric_condition, alpha**2 / 100.0, alpha**2, lo_floor=0.0
    )
    beta_num = rootfind.bracketed_root(
        numeric_condition, lo, hi, xtol=tol * beta_asym
    ).root

    from .series import FIRST, SECOND, generate_family, product_density

    product = product_density(
        generate_family(FIRST, order), generate_family(SECOND, order), "GG"
    )

    def full_condition(beta: float) -> float:
        return integrate_series_damped(product, 2.0 * beta, alpha, tol=tol).value

    lo, hi = rootfind.expand_bracket(
        full_condition, alpha**2 / 100.0, alpha**2, lo_floor=0.0
    )
    beta_full = rootfind.bracketed_root(
        full_condition, lo, hi, xtol=tol * beta_asym
    ).root

    residuals = (
        numeric_condition(beta_asym),
        numeric_condition(beta_num),
        full_condition(beta_full),
    )
    return BetaResult(alpha, mode, beta_asym, beta_num, beta_full, residuals, order)


def gauss_flux(beta: float, eps: float) -> float:
    """Evaluated regularized flux limit: exp(-beta/eps) - exp(-1/beta).

    Tends to 1 as beta -> 0 at any fixed radius eps; the vanishing inner
    boundary term reflects the vanishing of the damped field at the origin.
    """
    if not (beta > 0 and eps > 0):
        raise ValueError("beta and eps must be positive")
    return math.exp(-beta / eps) - math.exp(-1.0 / beta)
