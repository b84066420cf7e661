"""Exact closed algebra of radial log-polynomial series.

A series is a finite sum of monomials ``c * alpha^a * s^p * (ln s)^q`` with
exact rational coefficient ``c``, integer ``p`` (negative powers allowed) and
non-negative integers ``a`` and ``q``.  The coupling ``alpha`` is carried as a
tracked exponent and never substituted during series generation, so one
generated series serves every numeric value of the coupling.

All arithmetic is done in ``fractions.Fraction``; the floating layer enters
only in :meth:`LogPolySeries.eval_numeric`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

Key = tuple[int, int, int]

_SUPERSCRIPTS = str.maketrans("-0123456789", "⁻⁰¹²³⁴⁵⁶⁷⁸⁹")


def _sup(n: int) -> str:
    return str(n).translate(_SUPERSCRIPTS)


@dataclass(frozen=True, slots=True)
class Term:
    """One monomial ``coeff * alpha^alpha_pow * s^s_pow * (ln s)^log_pow``."""

    coeff: Fraction
    alpha_pow: int = 0
    s_pow: int = 0
    log_pow: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.coeff, Fraction):
            object.__setattr__(self, "coeff", Fraction(self.coeff))
        if self.alpha_pow < 0:
            raise ValueError("alpha exponent must be non-negative")
        if self.log_pow < 0:
            raise ValueError("log exponent must be non-negative")

    @property
    def key(self) -> Key:
        return (self.alpha_pow, self.s_pow, self.log_pow)


class LogPolySeries:
    """Normalized finite sum of :class:`Term`.

    Terms are merged on the key ``(alpha_pow, s_pow, log_pow)``, zero
    coefficients are dropped, and storage is sorted lexicographically on that
    key, which fixes the serialization order.  Instances are immutable and
    safe to share between threads.

    ``truncation_order``, when set, records the smallest alpha power that was
    discarded when the series was produced by a truncating operation (series
    products); downstream integrators use it for error estimates.
    """

    __slots__ = ("_terms", "truncation_order")

    def __init__(self, terms: Iterable[Term] = (), truncation_order: int | None = None):
        acc: dict[Key, Fraction] = {}
        for t in terms:
            acc[t.key] = acc.get(t.key, Fraction(0)) + t.coeff
        object.__setattr__(
            self,
            "_terms",
            tuple(
                Term(c, *k) for k, c in sorted(acc.items()) if c != 0
            ),
        )
        object.__setattr__(self, "truncation_order", truncation_order)

    def __setattr__(self, name, value):  # immutability guard
        raise AttributeError("LogPolySeries is immutable")

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_coeffs(
        cls,
        rows: Iterable[tuple[int, int, int, int, int]],
        truncation_order: int | None = None,
    ) -> "LogPolySeries":
        """Build from ``(num, den, alpha_pow, s_pow, log_pow)`` rows."""
        return cls(
            (Term(Fraction(n, d), a, p, q) for n, d, a, p, q in rows),
            truncation_order,
        )

    @property
    def terms(self) -> tuple[Term, ...]:
        return self._terms

    def __iter__(self) -> Iterator[Term]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LogPolySeries):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(self._terms)

    def __repr__(self) -> str:
        return f"LogPolySeries({self.to_text()!r})"

    def _carry(self, other: "LogPolySeries | None" = None) -> int | None:
        mine = self.truncation_order
        theirs = other.truncation_order if isinstance(other, LogPolySeries) else None
        if mine is None:
            return theirs
        if theirs is None:
            return mine
        return min(mine, theirs)

    # -- ring operations -------------------------------------------------------

    def __add__(self, other: "LogPolySeries") -> "LogPolySeries":
        if not isinstance(other, LogPolySeries):
            return NotImplemented
        return LogPolySeries(self._terms + other._terms, self._carry(other))

    def __sub__(self, other: "LogPolySeries") -> "LogPolySeries":
        return self + (-other)

    def __neg__(self) -> "LogPolySeries":
        return LogPolySeries(
            (Term(-t.coeff, *t.key) for t in self._terms), self.truncation_order
        )

    def __mul__(self, other):
        if isinstance(other, LogPolySeries):
            prod = [
                Term(
                    a.coeff * b.coeff,
                    a.alpha_pow + b.alpha_pow,
                    a.s_pow + b.s_pow,
                    a.log_pow + b.log_pow,
                )
                for a in self._terms
                for b in other._terms
            ]
            return LogPolySeries(prod, self._carry(other))
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def scale(self, c: int | Fraction) -> "LogPolySeries":
        c = Fraction(c)
        return LogPolySeries(
            (Term(t.coeff * c, *t.key) for t in self._terms), self.truncation_order
        )

    def shift(
        self, coeff: int | Fraction = 1, alpha: int = 0, s: int = 0, log: int = 0
    ) -> "LogPolySeries":
        """Multiply by the single monomial ``coeff * alpha^alpha * s^s * (ln s)^log``.

        The shifts may be negative as long as every resulting exponent stays
        in range (alpha and log exponents must remain non-negative).
        """
        c = Fraction(coeff)
        out = [
            Term(t.coeff * c, t.alpha_pow + alpha, t.s_pow + s, t.log_pow + log)
            for t in self._terms
        ]
        trunc = self.truncation_order
        return LogPolySeries(out, None if trunc is None else trunc + alpha)

    # -- calculus ---------------------------------------------------------------

    def differentiate(self) -> "LogPolySeries":
        """d/ds, term-wise: ``d/ds[c s^p ln^q s] = c p s^(p-1) ln^q s + c q s^(p-1) ln^(q-1) s``."""
        out = []
        for t in self._terms:
            if t.s_pow != 0:
                out.append(Term(t.coeff * t.s_pow, t.alpha_pow, t.s_pow - 1, t.log_pow))
            if t.log_pow != 0:
                out.append(Term(t.coeff * t.log_pow, t.alpha_pow, t.s_pow - 1, t.log_pow - 1))
        return LogPolySeries(out)

    def antiderivative(self) -> "LogPolySeries":
        """Exact antiderivative in s, no integration constant.

        For p != -1 integration by parts gives
        ``int s^p ln^q = s^(p+1) ln^q/(p+1) - q/(p+1) int s^p ln^(q-1)``;
        for p == -1 the primitive is ``ln^(q+1) s/(q+1)``.  Callers fix
        constants through :meth:`eval_at_one`.
        """
        out: list[Term] = []
        for t in self._terms:
            out.extend(_anti_term(t.coeff, t.alpha_pow, t.s_pow, t.log_pow))
        return LogPolySeries(out)

    def eval_at_one(self) -> "LogPolySeries":
        """Substitute s = 1: log terms vanish, powers of s collapse.

        The result carries alpha powers only.
        """
        out = [
            Term(t.coeff, t.alpha_pow, 0, 0) for t in self._terms if t.log_pow == 0
        ]
        return LogPolySeries(out)

    # -- structure queries ------------------------------------------------------

    def alpha_powers(self) -> tuple[int, ...]:
        return tuple(sorted({t.alpha_pow for t in self._terms}))

    def alpha_component(self, a: int) -> "LogPolySeries":
        return LogPolySeries(t for t in self._terms if t.alpha_pow == a)

    def restrict_alpha(self, max_pow: int) -> "LogPolySeries":
        kept = [t for t in self._terms if t.alpha_pow <= max_pow]
        dropped = [t.alpha_pow for t in self._terms if t.alpha_pow > max_pow]
        return LogPolySeries(kept, min(dropped) if dropped else self.truncation_order)

    def min_alpha_pow(self) -> int | None:
        return self._terms[0].alpha_pow if self._terms else None

    def coefficient(self, alpha_pow: int, s_pow: int, log_pow: int = 0) -> Fraction:
        for t in self._terms:
            if t.key == (alpha_pow, s_pow, log_pow):
                return t.coeff
        return Fraction(0)

    # -- numeric layer ----------------------------------------------------------

    def eval_numeric(self, s_val: float, alpha_val: float) -> float:
        """Floating evaluation with compensated (Neumaier) summation.

        Terms are accumulated in normalization-key order, so the result is
        deterministic for a given series.
        """
        if not s_val > 0.0:
            raise ValueError(f"series evaluation needs s > 0, got {s_val}")
        ln_s = math.log(s_val)
        values = [
            float(t.coeff)
            * alpha_val ** t.alpha_pow
            * s_val ** t.s_pow
            * (ln_s ** t.log_pow if t.log_pow else 1.0)
            for t in self._terms
        ]
        return _neumaier_sum(values)

    # -- serialization ----------------------------------------------------------

    def to_json_obj(self) -> list[dict[str, int]]:
        return [
            {
                "num": t.coeff.numerator,
                "den": t.coeff.denominator,
                "alpha_pow": t.alpha_pow,
                "s_pow": t.s_pow,
                "log_pow": t.log_pow,
            }
            for t in self._terms
        ]

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, rows: list[dict[str, int]]) -> "LogPolySeries":
        return cls(
            Term(
                Fraction(r["num"], r["den"]), r["alpha_pow"], r["s_pow"], r["log_pow"]
            )
            for r in rows
        )

    @classmethod
    def from_json(cls, text: str) -> "LogPolySeries":
        return cls.from_json_obj(json.loads(text))

    def to_text(self) -> str:
        """Human-readable form, one factored group per alpha power.

        Example output: ``(α²/12)(s⁻² − 2s⁻¹ + 6 ln s + 9 − 10s + 2s²)``.
        """
        if not self._terms:
            return "0"
        groups = []
        for a in self.alpha_powers():
            block = [t for t in self._terms if t.alpha_pow == a]
            groups.append(_render_block(a, block))
        return " + ".join(groups)


ZERO = LogPolySeries()
ONE = LogPolySeries([Term(Fraction(1))])


def _anti_term(c: Fraction, a: int, p: int, q: int) -> list[Term]:
    if p == -1:
        return [Term(c / (q + 1), a, 0, q + 1)]
    out = [Term(c / (p + 1), a, p + 1, q)]
    if q >= 1:
        out.extend(_anti_term(-c * q / (p + 1), a, p, q - 1))
    return out


def _neumaier_sum(values: list[float]) -> float:
    total = 0.0
    comp = 0.0
    for v in values:
        t = total + v
        if abs(total) >= abs(v):
            comp += (total - t) + v
        else:
            comp += (v - t) + total
        total = t
    return total + comp


def _render_frac(f: Fraction) -> str:
    if f.denominator == 1:
        return str(f.numerator)
    return f"({f.numerator}/{f.denominator})"


def _render_monomial(coeff: Fraction, s_pow: int, log_pow: int) -> str:
    parts = []
    if s_pow == 1:
        parts.append("s")
    elif s_pow != 0:
        parts.append("s" + _sup(s_pow))
    if log_pow == 1:
        parts.append("ln s")
    elif log_pow > 1:
        parts.append("(ln s)" + _sup(log_pow))
    body = " ".join(parts)
    if not body:
        return _render_frac(coeff)
    if coeff == 1:
        return body
    return f"{_render_frac(coeff)}{body}" if coeff.denominator > 1 else f"{coeff.numerator}{body}"


def _render_block(a: int, block: list[Term]) -> str:
    from math import gcd, lcm

    L = lcm(*(t.coeff.denominator for t in block))
    g = gcd(*(int(t.coeff * L) for t in block)) or 1
    sign = -1 if block[0].coeff < 0 else 1
    factor = Fraction(g * sign, L)
    inner = [t.coeff / factor for t in block]

    alpha_txt = "" if a == 0 else ("α" if a == 1 else "α" + _sup(a))
    f = abs(factor)
    if a == 0 and f == 1:
        prefix = ""
    else:
        head = ("" if f.numerator == 1 and alpha_txt else str(f.numerator)) + alpha_txt
        prefix = f"({head}/{f.denominator})" if f.denominator > 1 else f"({head})"

    body_parts = []
    for c, t in zip(inner, block):
        piece = _render_monomial(abs(c), t.s_pow, t.log_pow)
        if not body_parts:
            body_parts.append(piece if c > 0 else f"−{piece}")
        else:
            body_parts.append(f"{'+' if c > 0 else '−'} {piece}")
    body = " ".join(body_parts)
    if prefix:
        out = f"{prefix}({body})"
    else:
        out = body if len(block) == 1 else f"({body})"
    return f"−{out}" if sign < 0 else out


# Functional aliases mirroring the operation names of the public surface.

def series_add(a: LogPolySeries, b: LogPolySeries) -> LogPolySeries:
    return a + b


def series_mul(a: LogPolySeries, b: LogPolySeries) -> LogPolySeries:
    return a * b


def differentiate(series: LogPolySeries) -> LogPolySeries:
    return series.differentiate()


def antiderivative(series: LogPolySeries) -> LogPolySeries:
    return series.antiderivative()


def eval_at_one(series: LogPolySeries) -> LogPolySeries:
    return series.eval_at_one()


def eval_numeric(series: LogPolySeries, s_val: float, alpha_val: float) -> float:
    return series.eval_numeric(s_val, alpha_val)
