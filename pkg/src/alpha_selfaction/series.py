"""Iterative series construction for the reduced coupled radial system.

The dimensionless system

    s^-2 d/ds (s^2 F) = (1 - 1/s) * alpha * G
         - d/ds G     = (1 - 1/s) * alpha * F

has two independent solution families.  The first is generated by G_0 = 1,
the second by f_0 = s^-2; each further part follows by alternately applying
the two integration steps, fixing every integration constant so that the new
part vanishes at s = 1.  Part k of a family carries a single power of the
coupling: alpha^(2k+1) on the F side of the first family (f side: alpha^(2k+1)
on g), alpha^(2k) on the G side (f side: alpha^(2k) on f).

Everything here is exact rational algebra on :class:`LogPolySeries`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .terms import LogPolySeries, Term, ONE

FIRST = "first"
SECOND = "second"

# s^2 (1 - 1/s) alpha  and  (1 - 1/s) alpha, the two step multipliers
_S2_WEIGHT = LogPolySeries([Term(Fraction(1), 1, 2, 0), Term(Fraction(-1), 1, 1, 0)])
_WEIGHT = LogPolySeries([Term(Fraction(1), 1, 0, 0), Term(Fraction(-1), 1, -1, 0)])

GENERATOR_SECOND = LogPolySeries([Term(Fraction(1), 0, -2, 0)])


class OrderMismatchError(ValueError):
    """Requested coupling order exceeds what the generated families support."""


def f_step(g_part: LogPolySeries) -> LogPolySeries:
    """One F-side integration step.

    Solves ``s^-2 d/ds (s^2 F) = (1 - 1/s) alpha G`` for F, choosing the
    integration constant (a multiple of s^-2) so that F vanishes at s = 1.
    Raises the alpha exponent by one.
    """
    anti = (_S2_WEIGHT * g_part).antiderivative()
    const = -anti.eval_at_one()
    return (anti + const).shift(s=-2)


def g_step(f_part: LogPolySeries) -> LogPolySeries:
    """One G-side integration step.

    Solves ``-d/ds G = (1 - 1/s) alpha F`` for G, with the constant chosen so
    that G vanishes at s = 1.
    """
    anti = (_WEIGHT * f_part).antiderivative()
    return anti.eval_at_one() - anti


@dataclass(frozen=True)
class SolutionFamily:
    """Ordered iterates of one solution family of the reduced system.

    ``F_parts``/``G_parts`` hold the F-side and G-side parts (F~ and G~ for
    the first family, f~ and g~ for the second).  ``gamma`` is the energy
    ratio E/(m c^2) entering the damping substitution; the interior
    construction fixes it to 1.
    """

    kind: str
    F_parts: tuple[LogPolySeries, ...]
    G_parts: tuple[LogPolySeries, ...]
    order: int
    gamma: float = 1.0

    @property
    def F_total(self) -> LogPolySeries:
        total = LogPolySeries()
        for part in self.F_parts:
            total = total + part
        return total

    @property
    def G_total(self) -> LogPolySeries:
        total = LogPolySeries()
        for part in self.G_parts:
            total = total + part
        return total

    def eval_F(self, s: float, alpha: float) -> float:
        return self.F_total.eval_numeric(s, alpha)

    def eval_G(self, s: float, alpha: float) -> float:
        return self.G_total.eval_numeric(s, alpha)

    def eval_damped(self, s: float, alpha: float, beta: float) -> tuple[float, float]:
        """Physical (damped) pair at s: series value times exp(-beta*gamma/s)."""
        w = math.exp(-beta * self.gamma / s)
        return self.eval_F(s, alpha) * w, self.eval_G(s, alpha) * w


@lru_cache(maxsize=None)
def generate_family(kind: str, order: int) -> SolutionFamily:
    """Generate a family by alternating f_step/g_step up to truncation ``order``.

    kind="first" starts from G_0 = 1, kind="second" from f_0 = s^-2.  Parts
    0..order of both sides are produced.
    """
    if order < 0:
        raise ValueError("order must be >= 0")
    if kind == FIRST:
        g_parts = [ONE]
        f_parts = []
        for k in range(order + 1):
            f_parts.append(f_step(g_parts[k]))
            if k < order:
                g_parts.append(g_step(f_parts[k]))
        return SolutionFamily(FIRST, tuple(f_parts), tuple(g_parts), order)
    if kind == SECOND:
        f_parts = [GENERATOR_SECOND]
        g_parts = []
        for k in range(order + 1):
            g_parts.append(g_step(f_parts[k]))
            if k < order:
                f_parts.append(f_step(g_parts[k]))
        return SolutionFamily(SECOND, tuple(f_parts), tuple(g_parts), order)
    raise ValueError(f"unknown family kind {kind!r}")


def product_density(
    first: SolutionFamily,
    second: SolutionFamily,
    which: str,
    alpha_order: int | None = None,
) -> LogPolySeries:
    """Exact series for s^2 * G~g~ (which="GG") or s^2 * F~f~ (which="FF").

    Only complete coupling orders are kept: with families truncated at order
    n, part pairs (i, j) with i + j <= n contribute, covering every alpha
    power through 2n+1.  The first discarded power (2n+3) is recorded on the
    result as ``truncation_order``.
    """
    if first.kind != FIRST or second.kind != SECOND:
        raise ValueError("product_density expects (first-family, second-family)")
    n = min(first.order, second.order)
    if alpha_order is not None and alpha_order > n:
        raise OrderMismatchError(
            f"alpha order {alpha_order} needs families of order >= {alpha_order}, have {n}"
        )
    k_max = n if alpha_order is None else alpha_order
    if which == "GG":
        left, right = first.G_parts, second.G_parts
    elif which == "FF":
        left, right = first.F_parts, second.F_parts
    else:
        raise ValueError(f"which must be 'GG' or 'FF', got {which!r}")
    total = LogPolySeries()
    for i in range(k_max + 1):
        for j in range(k_max + 1 - i):
            total = total + left[i] * right[j]
    total = total.shift(s=2)
    return LogPolySeries(total.terms, truncation_order=2 * k_max + 3)


def normalized_product(
    first: SolutionFamily,
    second: SolutionFamily,
    which: str,
    alpha_order: int | None = None,
) -> LogPolySeries:
    """Product series in the conventional normalization.

    (2/alpha) s^2 G~g~ for "GG" and (6/alpha) s^2 F~f~ for "FF"; the leading
    blocks are -(1-s)^2 and (s^-2 - 3 + 2s) respectively.
    """
    raw = product_density(first, second, which, alpha_order)
    factor = 2 if which == "GG" else 6
    return raw.shift(factor, alpha=-1)


GF_BRANCH = "Gf_branch"
FG_BRANCH = "fg_branch"


@dataclass(frozen=True)
class ExternalSolution:
    """Closed-form solution pair beyond the matching radius s = 1.

    Branch "Gf_branch": G = exp(-beta/s), F = 0.
    Branch "fg_branch": f = s^-2 exp(-beta/s), g = 0.
    Outside s = 1 the two branches share no support in their nonzero
    components, so every physical product G*g and F*f vanishes identically.
    """

    beta: float
    branch: str = GF_BRANCH

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError("beta must be positive")
        if self.branch not in (GF_BRANCH, FG_BRANCH):
            raise ValueError(f"unknown branch {self.branch!r}")

    def _check(self, s: float) -> None:
        if s < 1.0:
            raise ValueError(f"external solution is defined for s >= 1, got {s}")

    def G(self, s: float) -> float:
        self._check(s)
        return math.exp(-self.beta / s) if self.branch == GF_BRANCH else 0.0

    def F(self, s: float) -> float:
        self._check(s)
        return 0.0

    def f(self, s: float) -> float:
        self._check(s)
        return s ** -2 * math.exp(-self.beta / s) if self.branch == FG_BRANCH else 0.0

    def g(self, s: float) -> float:
        self._check(s)
        return 0.0


def external_solution(beta: float, branch: str = GF_BRANCH) -> ExternalSolution:
    return ExternalSolution(beta, branch)


def external_pair(beta: float) -> tuple[ExternalSolution, ExternalSolution]:
    return ExternalSolution(beta, GF_BRANCH), ExternalSolution(beta, FG_BRANCH)


def system_residuals(family: SolutionFamily) -> tuple[LogPolySeries, LogPolySeries]:
    """Exact residuals of the two reduced equations for a truncated family.

    Returns (R_F, R_G) with
      R_F = s^-2 d/ds (s^2 F) - (1-1/s) alpha G
      R_G = -d/ds G - (1-1/s) alpha F.
    One of the two vanishes identically; the other equals the next-order
    source term, so its minimum alpha power exceeds every retained one.
    """
    F, G = family.F_total, family.G_total
    r_f = F.shift(s=2).differentiate().shift(s=-2) - _WEIGHT * G
    r_g = -G.differentiate() - _WEIGHT * F
    return r_f, r_g
