"""Hand-derived closed forms of the low-order iterates and product blocks.

These tables were rederived independently (integration by parts on paper) and
serve as exact regression anchors for the generator: the check-coefficients
report diffs every generated iterate against them as rational equalities.

Row format everywhere: (num, den, alpha_pow, s_pow, log_pow).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .series import FIRST, SECOND, generate_family, normalized_product
from .terms import LogPolySeries

Rows = list[tuple[int, int, int, int, int]]

# First family: F~0, G~1, F~1, G~2 (G~0 = 1 is the generator).
F0_ROWS: Rows = [
    (1, 6, 1, -2, 0), (-1, 2, 1, 0, 0), (1, 3, 1, 1, 0),
]
G1_ROWS: Rows = [
    (-1, 12, 2, -2, 0), (1, 6, 2, -1, 0), (-1, 2, 2, 0, 1),
    (-3, 4, 2, 0, 0), (5, 6, 2, 1, 0), (-1, 6, 2, 2, 0),
]
F1_ROWS: Rows = [
    (31, 180, 3, -2, 0), (1, 12, 3, -2, 1), (-1, 4, 3, -1, 0),
    (1, 4, 3, 0, 1), (1, 3, 3, 0, 0), (-17, 36, 3, 1, 0),
    (-1, 6, 3, 1, 1), (1, 4, 3, 2, 0), (-1, 30, 3, 3, 0),
]
G2_ROWS: Rows = [
    (-77, 720, 4, -2, 0), (-1, 24, 4, -2, 1), (91, 180, 4, -1, 0),
    (1, 12, 4, -1, 1), (-35, 144, 4, 0, 0), (7, 12, 4, 0, 1),
    (1, 8, 4, 0, 2), (-7, 18, 4, 1, 0), (-5, 12, 4, 1, 1),
    (23, 72, 4, 2, 0), (1, 12, 4, 2, 1), (-17, 180, 4, 3, 0),
    (1, 120, 4, 4, 0),
]

# Second family: g~0, f~1, g~1 (f~0 = s^-2 is the generator).
SMALL_G0_ROWS: Rows = [
    (-1, 2, 1, -2, 0), (1, 1, 1, -1, 0), (-1, 2, 1, 0, 0),
]
SMALL_F1_ROWS: Rows = [
    (11, 12, 2, -2, 0), (1, 2, 2, -2, 1), (-3, 2, 2, -1, 0),
    (3, 4, 2, 0, 0), (-1, 6, 2, 1, 0),
]
SMALL_G1_ROWS: Rows = [
    (-7, 12, 3, -2, 0), (-1, 4, 3, -2, 1), (35, 12, 3, -1, 0),
    (1, 2, 3, -1, 1), (-3, 2, 3, 0, 0), (9, 4, 3, 0, 1),
    (-11, 12, 3, 1, 0), (1, 12, 3, 2, 0),
]

# Normalized product blocks.
# (2/alpha) s^2 G~g~: alpha^0 and alpha^2 blocks complete; at alpha^4 the two
# s^-2-level terms (which are the complete s^-2-level content of that block).
PRODUCT_GG_ALPHA0: Rows = [
    (-1, 1, 0, 0, 0), (2, 1, 0, 1, 0), (-1, 1, 0, 2, 0),
]
PRODUCT_GG_ALPHA2: Rows = [
    (1, 12, 2, -2, 0), (-1, 3, 2, -1, 0), (10, 3, 2, 1, 0),
    (-5, 12, 2, 2, 0), (5, 1, 2, 2, 1), (-3, 1, 2, 3, 0), (1, 3, 2, 4, 0),
]
PRODUCT_GG_ALPHA4_LEADING: Rows = [
    (49, 240, 4, -2, 0), (1, 12, 4, -2, 1),
]
# (6/alpha) s^2 F~f~: alpha^0 and alpha^2 blocks complete.
PRODUCT_FF_ALPHA0: Rows = [
    (1, 1, 0, -2, 0), (-3, 1, 0, 0, 0), (2, 1, 0, 1, 0),
]
PRODUCT_FF_ALPHA2: Rows = [
    (117, 60, 2, -2, 0), (1, 1, 2, -2, 1), (-3, 1, 2, -1, 0),
    (10, 3, 2, 1, 0), (-15, 4, 2, 2, 0), (9, 5, 2, 3, 0), (-1, 3, 2, 4, 0),
]


def _series(rows: Rows) -> LogPolySeries:
    return LogPolySeries.from_coeffs(rows)


REFERENCE_FIRST = {
    "F0": _series(F0_ROWS),
    "G1": _series(G1_ROWS),
    "F1": _series(F1_ROWS),
    "G2": _series(G2_ROWS),
}
REFERENCE_SECOND = {
    "g0": _series(SMALL_G0_ROWS),
    "f1": _series(SMALL_F1_ROWS),
    "g1": _series(SMALL_G1_ROWS),
}


@dataclass(frozen=True)
class CoefficientDiff:
    name: str
    key: tuple[int, int, int]
    expected: Fraction | None
    got: Fraction | None


@dataclass(frozen=True)
class CoefficientCheck:
    name: str
    matched: bool
    diffs: tuple[CoefficientDiff, ...]


def _diff_series(name: str, expected: LogPolySeries, got: LogPolySeries) -> CoefficientCheck:
    diffs = []
    exp = {t.key: t.coeff for t in expected.terms}
    act = {t.key: t.coeff for t in got.terms}
    for key in sorted(set(exp) | set(act)):
        if exp.get(key) != act.get(key):
            diffs.append(CoefficientDiff(name, key, exp.get(key), act.get(key)))
    return CoefficientCheck(name, not diffs, tuple(diffs))


def check_coefficients(order: int = 2) -> list[CoefficientCheck]:
    """Diff the generated iterates against the embedded closed forms.

    With order >= 2 every anchored iterate of the first family and (order
    >= 1) of the second family is covered.
    """
    checks = []
    first = generate_family(FIRST, max(order, 0))
    second = generate_family(SECOND, max(order, 0))
    first_names = [("F0", first.F_parts, 0), ("G1", first.G_parts, 1),
                   ("F1", first.F_parts, 1), ("G2", first.G_parts, 2)]
    second_names = [("g0", second.G_parts, 0), ("f1", second.F_parts, 1),
                    ("g1", second.G_parts, 1)]
    refs = {**REFERENCE_FIRST, **REFERENCE_SECOND}
    for name, parts, idx in first_names + second_names:
        if idx <= order:
            checks.append(_diff_series(name, refs[name], parts[idx]))
    return checks


def check_product_blocks(order: int = 2) -> list[CoefficientCheck]:
    """Diff the normalized product blocks against the embedded anchors."""
    first = generate_family(FIRST, order)
    second = generate_family(SECOND, order)
    gg = normalized_product(first, second, "GG")
    ff = normalized_product(first, second, "FF")
    checks = [
        _diff_series("GGs2_alpha0", _series(PRODUCT_GG_ALPHA0), gg.alpha_component(0)),
        _diff_series("FFs2_alpha0", _series(PRODUCT_FF_ALPHA0), ff.alpha_component(0)),
    ]
    if order >= 1:
        checks.append(_diff_series("GGs2_alpha2", _series(PRODUCT_GG_ALPHA2), gg.alpha_component(2)))
        checks.append(_diff_series("FFs2_alpha2", _series(PRODUCT_FF_ALPHA2), ff.alpha_component(2)))
    if order >= 2:
        lead = LogPolySeries(
            t for t in gg.alpha_component(4).terms if t.s_pow == -2
        )
        checks.append(_diff_series("GGs2_alpha4_leading", _series(PRODUCT_GG_ALPHA4_LEADING), lead))
    return checks
