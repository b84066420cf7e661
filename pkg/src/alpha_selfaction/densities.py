"""Bispinor bilinear densities from spherical harmonics and radial pairs.

The two four-component solution structures at total angular momentum
j = 1/2 combine one l=1 and one l=0 radial function with Clebsch-type
prefactors.  The sixteen sesquilinear densities psi* Gamma psi are built
algebraically from the explicit gamma-matrix representation below (never from
the printed density strings, which are also embedded so mismatches can be
reported).  Angular reduction over the sphere leaves only the 1/3 and 2/3
fractions of the diagonal harmonic pairs, plus the monopole Y00^2 term whose
radial integral the coupling condition drives to zero.

Phase convention: Condon-Shortley.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .series import FIRST, SECOND, SolutionFamily, generate_family

HALF = Fraction(1, 2)

# -- gamma matrices (block conventions fixed once; densities derive from these) --

GAMMA_T = np.eye(4, dtype=complex)
GAMMA_X = np.array(
    [[0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0]], dtype=complex
)
GAMMA_Y = np.array(
    [[0, 0, 0, -1j], [0, 0, 1j, 0], [0, -1j, 0, 0], [1j, 0, 0, 0]], dtype=complex
)
GAMMA_Z = np.array(
    [[0, 0, 1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, -1, 0, 0]], dtype=complex
)
GAMMA_5 = np.diag([1.0, 1.0, -1.0, -1.0]).astype(complex)

_G = {1: GAMMA_T, 2: GAMMA_X, 3: GAMMA_Y, 4: GAMMA_Z, 5: GAMMA_5}


def _prod(*idx: int) -> np.ndarray:
    out = np.eye(4, dtype=complex)
    for i in idx:
        out = out @ _G[i]
    return out


@dataclass(frozen=True)
class OperatorRow:
    """One of the 16 density operators: label, matrix, printed density string."""

    operator_id: str
    label: str          # covariant family it belongs to
    name: str           # physical name when the row has one
    matrix: np.ndarray
    printed: tuple[tuple[complex, int, int], ...]  # (coeff, i, j) of the printed row


def _row(op_id, label, name, matrix, printed):
    return OperatorRow(op_id, label, name, matrix, tuple(printed))


# Printed density rows, encoded as (coefficient, component i, component j) of
# psi_i^* psi_j.  The pseudo-invariant row is reproduced as printed, including
# its suspect 3.4 entry; compare_printed_rows() surfaces the discrepancy.
OPERATOR_TABLE: tuple[OperatorRow, ...] = (
    _row("gamma1", "four_vector", "energy", _prod(1),
         [(1, 1, 1), (1, 2, 2), (1, 3, 3), (1, 4, 4)]),
    _row("gamma2", "four_vector", "", _prod(2),
         [(1, 1, 4), (1, 2, 3), (1, 3, 2), (1, 4, 1)]),
    _row("gamma3", "four_vector", "", _prod(3),
         [(-1j, 1, 4), (1j, 2, 3), (-1j, 3, 2), (1j, 4, 1)]),
    _row("gamma4", "four_vector", "", _prod(4),
         [(1, 1, 3), (-1, 2, 4), (1, 3, 1), (-1, 4, 2)]),
    _row("gamma234", "pseudo_four_vector", "", _prod(2, 3, 4),
         [(1j, 1, 3), (1j, 2, 4), (1j, 3, 1), (1j, 4, 2)]),
    _row("i_gamma34", "pseudo_four_vector", "", 1j * _prod(3, 4),
         [(-1, 1, 2), (-1, 2, 1), (-1, 3, 4), (-1, 4, 3)]),
    _row("i_gamma42", "pseudo_four_vector", "", 1j * _prod(4, 2),
         [(1j, 1, 2), (-1j, 2, 1), (1j, 3, 4), (-1j, 4, 3)]),
    _row("i_gamma23", "pseudo_four_vector", "spin_z", 1j * _prod(2, 3),
         [(-1, 1, 1), (1, 2, 2), (-1, 3, 3), (1, 4, 4)]),
    _row("gamma5", "invariant", "charge", _prod(5),
         [(1, 1, 1), (1, 2, 2), (-1, 3, 3), (-1, 4, 4)]),
    _row("gamma2345", "pseudo_invariant", "", _prod(2, 3, 4, 5),
         [(-1j, 1, 3), (-1j, 2, 4), (1j, 3, 4), (1j, 4, 2)]),
    _row("i_gamma345", "polarization_tensor", "", 1j * _prod(3, 4, 5),
         [(-1, 1, 2), (-1, 2, 1), (1, 3, 4), (1, 4, 3)]),
    _row("i_gamma425", "polarization_tensor", "", 1j * _prod(4, 2, 5),
         [(1j, 1, 2), (-1j, 2, 1), (-1j, 3, 4), (1j, 4, 3)]),
    _row("i_gamma235", "polarization_tensor", "magnetization_z", 1j * _prod(2, 3, 5),
         [(-1, 1, 1), (1, 2, 2), (1, 3, 3), (-1, 4, 4)]),
    _row("i_gamma25", "polarization_tensor", "", 1j * _prod(2, 5),
         [(-1j, 1, 4), (-1j, 2, 3), (1j, 3, 2), (1j, 4, 1)]),
    _row("i_gamma35", "polarization_tensor", "", 1j * _prod(3, 5),
         [(-1, 1, 4), (1, 2, 3), (1, 3, 2), (-1, 4, 1)]),
    _row("i_gamma45", "polarization_tensor", "", 1j * _prod(4, 5),
         [(-1j, 1, 3), (1j, 2, 4), (1j, 3, 1), (-1j, 4, 2)]),
)

OPERATORS = {row.operator_id: row for row in OPERATOR_TABLE}
NAMED_ROWS = {row.name: row.operator_id for row in OPERATOR_TABLE if row.name}


def operator_matrix(operator_id: str) -> np.ndarray:
    return OPERATORS[operator_id].matrix


def compare_printed_rows() -> list[dict]:
    """Diff each printed density row against the matrix-derived one."""
    out = []
    for row in OPERATOR_TABLE:
        derived = {
            (i + 1, j + 1): row.matrix[i, j]
            for i in range(4)
            for j in range(4)
            if row.matrix[i, j] != 0
        }
        printed = {(i, j): c for c, i, j in row.printed}
        mismatches = sorted(
            key for key in set(derived) | set(printed)
            if not cmath.isclose(
                derived.get(key, 0.0), printed.get(key, 0.0), abs_tol=1e-15
            )
        )
        out.append(
            {
                "operator_id": row.operator_id,
                "label": row.label,
                "name": row.name,
                "matches_printed": not mismatches,
                "mismatched_entries": [list(k) for k in mismatches],
            }
        )
    return out


# -- spherical harmonics -----------------------------------------------------------


def spherical_harmonic(l: int, m: int, theta: float, phi: float) -> complex:
    """Orthonormal Y_lm (Condon-Shortley phase), closed forms for l <= 2."""
    if l < 0 or abs(m) > l:
        raise ValueError(f"invalid harmonic indices l={l}, m={m}")
    st, ct = math.sin(theta), math.cos(theta)
    e = cmath.exp(1j * m * phi)
    if l == 0:
        return complex(0.5 / math.sqrt(math.pi))
    if l == 1:
        if m == 0:
            return 0.5 * math.sqrt(3.0 / math.pi) * ct + 0j
        amp = 0.5 * math.sqrt(1.5 / math.pi) * st
        return (-amp if m == 1 else amp) * e
    if l == 2:
        if m == 0:
            return 0.25 * math.sqrt(5.0 / math.pi) * (3.0 * ct * ct - 1.0) + 0j
        if abs(m) == 1:
            amp = 0.5 * math.sqrt(7.5 / math.pi) * st * ct
            return (-amp if m == 1 else amp) * e
        amp = 0.25 * math.sqrt(7.5 / math.pi) * st * st
        return amp * e
    raise ValueError(f"harmonics implemented for l <= 2, got l={l}")


@dataclass(frozen=True)
class AngularQuadrature:
    """Product rule: Gauss-Legendre in cos(theta) x trapezoid in phi.

    Exact for integrands of combined harmonic degree l <= 2 provided
    ``n_theta >= 8`` and ``n_phi >= 16``.
    """

    n_theta: int = 12
    n_phi: int = 32

    def nodes(self):
        if self.n_theta < 8 or self.n_phi < 16:
            raise ValueError("quadrature too coarse to resolve l <= 2 exactly")
        x, w = np.polynomial.legendre.leggauss(self.n_theta)
        thetas = np.arccos(x)
        phis = np.arange(self.n_phi) * (2.0 * math.pi / self.n_phi)
        wphi = 2.0 * math.pi / self.n_phi
        return thetas, w, phis, wphi

    def integrate(self, fn: Callable[[float, float], complex]) -> complex:
        thetas, w, phis, wphi = self.nodes()
        acc = 0.0 + 0.0j
        for th, wt in zip(thetas, w):
            for ph in phis:
                acc += wt * wphi * fn(th, ph)
        return acc


# -- bispinor states ---------------------------------------------------------------


@dataclass(frozen=True)
class ComponentStructure:
    """Structural data of one component: prefactor * radial * Y_{l, m_y}."""

    prefactor: complex          # exact phase times sqrt of ratio_sq
    ratio_sq: Fraction          # |prefactor|^2, exact
    radial_index: int           # 0 = l=1-type radial, 1 = l=0-type radial
    harmonic: tuple[int, int] | None


@dataclass(frozen=True)
class BispinorState:
    """Four-component state assembled from a radial pair and harmonics.

    ``radial_pair`` maps (big, small) radial evaluators: for the first
    structure (F, G), for the second (K, L) (or their lowercase partners).
    ``m`` is the magnetic quantum number, +-1/2 at j = 1/2.
    """

    kind: str
    m: Fraction
    radial_pair: tuple[Callable[[float], float], Callable[[float], float]]
    structure: tuple[ComponentStructure, ...]
    j: Fraction = HALF

    def component(self, idx: int, s: float, theta: float, phi: float) -> complex:
        st = self.structure[idx]
        if st.harmonic is None:
            return 0.0 + 0.0j
        radial = self.radial_pair[st.radial_index](s)
        return st.prefactor * radial * spherical_harmonic(*st.harmonic, theta, phi)

    def vector(self, s: float, theta: float, phi: float) -> np.ndarray:
        return np.array(
            [self.component(i, s, theta, phi) for i in range(4)], dtype=complex
        )


def _ratio(num: Fraction, den: Fraction) -> tuple[complex, Fraction]:
    if num == 0:
        return 0.0 + 0.0j, Fraction(0)
    return complex(math.sqrt(num / den)), num / den


def build_bispinor(
    kind: str,
    m: Fraction | float,
    radial_pair: tuple[Callable[[float], float], Callable[[float], float]],
    j: Fraction | float = HALF,
) -> BispinorState:
    """Assemble a four-component state with exact Clebsch-type prefactors.

    First structure:  (a1 R0 Y_{1,m-1/2}, -a2 R0 Y_{1,m+1/2},
                       i b1 R1 Y_{0,m-1/2}, i b2 R1 Y_{0,m+1/2})
    Second structure: (i b1 R1 Y_{0,m-1/2}, i b2 R1 Y_{0,m+1/2},
                       a1 R0 Y_{1,m-1/2}, -a2 R0 Y_{1,m+1/2})
    with a1 = sqrt[(j+1-m)/(2j+2)], a2 = sqrt[(j+1+m)/(2j+2)],
    b1 = sqrt[(j+m)/(2j)], b2 = sqrt[(j-m)/(2j)].  General j is accepted;
    only j = 1/2 is exercised downstream.
    """
    j = Fraction(j).limit_denominator(64)
    m = Fraction(m).limit_denominator(64)
    if abs(m) > j:
        raise ValueError(f"|m| must not exceed j, got m={m}, j={j}")
    l_hi = int(j + HALF)
    l_lo = int(j - HALF)
    a1, r_a1 = _ratio(j + 1 - m, 2 * (j + 1))
    a2, r_a2 = _ratio(j + 1 + m, 2 * (j + 1))
    b1, r_b1 = _ratio(j + m, 2 * j)
    b2, r_b2 = _ratio(j - m, 2 * j)

    def harm(l: int, my: Fraction) -> tuple[int, int] | None:
        return (l, int(my)) if abs(my) <= l else None

    m_lo, m_hi = m - HALF, m + HALF
    upper = [
        ComponentStructure(a1, r_a1, 0, harm(l_hi, m_lo)),
        ComponentStructure(-a2, r_a2, 0, harm(l_hi, m_hi)),
    ]
    lower = [
        ComponentStructure(1j * b1, r_b1, 1, harm(l_lo, m_lo)),
        ComponentStructure(1j * b2, r_b2, 1, harm(l_lo, m_hi)),
    ]
    # zero out components whose ratio vanishes
    def clean(cs: ComponentStructure) -> ComponentStructure:
        if cs.ratio_sq == 0 or cs.harmonic is None:
            return ComponentStructure(0.0 + 0.0j, Fraction(0), cs.radial_index, None)
        return cs

    if kind == FIRST:
        structure = tuple(clean(c) for c in upper + lower)
    elif kind == SECOND:
        structure = tuple(clean(c) for c in lower + upper)
    else:
        raise ValueError(f"unknown bispinor kind {kind!r}")
    return BispinorState(kind, m, tuple(radial_pair), structure, j)


def bilinear_density(
    left: BispinorState,
    operator_id: str,
    right: BispinorState,
    s: float,
    theta: float,
    phi: float,
) -> complex:
    """Pointwise psi_left^* Gamma psi_right."""
    gamma = operator_matrix(operator_id)
    vl = left.vector(s, theta, phi)
    vr = right.vector(s, theta, phi)
    return complex(np.conj(vl) @ gamma @ vr)


# -- angular reduction ---------------------------------------------------------------

ELECTRON = "electron"
POSITRON = "positron"

_RADIAL_NAMES = {
    ELECTRON: (("F", "G"), ("f", "g")),
    POSITRON: (("K", "L"), ("k", "l")),
}


@dataclass(frozen=True)
class DensityEntry:
    radial_product: str
    harmonic: str
    fraction: Fraction


@dataclass(frozen=True)
class DensityTable:
    """Angular decomposition of one operator row for one particle and m.

    ``entries`` hold the l=1 harmonic pieces (the printed table content);
    ``monopole`` holds the Y00^2 piece kept separate because its radial
    integral is driven to zero by the coupling condition.  ``vanishing``
    lists cross-harmonic pieces together with their quadrature magnitude.
    """

    operator_id: str
    particle: str
    m: Fraction
    entries: tuple[DensityEntry, ...]
    monopole: tuple[DensityEntry, ...]
    vanishing: tuple[tuple[str, float], ...]


def _paired_states(particle: str, m: Fraction | float):
    kind = FIRST if particle == ELECTRON else SECOND
    unit = (lambda s: 1.0, lambda s: 1.0)
    left = build_bispinor(kind, m, unit)
    right = build_bispinor(kind, m, unit)
    return left, right


def angular_reduce(
    operator_id: str,
    particle: str,
    m: Fraction | float,
    quadrature: AngularQuadrature | None = None,
) -> DensityTable:
    """Reduce one bilinear over the sphere at fixed s.

    Component pairs sharing a harmonic survive with exact rational fractions
    (products of the Clebsch prefactors); pairs mixing different harmonics
    integrate to below quadrature accuracy and are reported as vanishing.
    """
    if particle not in _RADIAL_NAMES:
        raise ValueError(f"unknown particle {particle!r}")
    quadrature = quadrature or AngularQuadrature()
    m = Fraction(m).limit_denominator(64)
    left, right = _paired_states(particle, m)
    gamma = operator_matrix(operator_id)
    left_names, right_names = _RADIAL_NAMES[particle]

    entries: list[DensityEntry] = []
    monopole: list[DensityEntry] = []
    vanishing: list[tuple[str, float]] = []
    for i in range(4):
        for j in range(4):
            g = gamma[i, j]
            if g == 0:
                continue
            ls, rs = left.structure[i], right.structure[j]
            if ls.harmonic is None or rs.harmonic is None:
                continue
            tag = left_names[ls.radial_index] + right_names[rs.radial_index]
            if ls.harmonic == rs.harmonic:
                coeff = np.conj(ls.prefactor) * g * rs.prefactor
                frac = _exact_fraction(coeff, ls.ratio_sq, rs.ratio_sq)
                l, my = ls.harmonic
                entry = DensityEntry(tag, f"|Y_{{{l},{my}}}|^2", frac)
                (monopole if l == 0 else entries).append(entry)
            else:
                value = quadrature.integrate(
                    lambda th, ph: np.conj(
                        spherical_harmonic(*ls.harmonic, th, ph)
                    )
                    * spherical_harmonic(*rs.harmonic, th, ph)
                )
                la, ma = ls.harmonic
                lb, mb = rs.harmonic
                vanishing.append(
                    (f"{tag} Y_{{{la},{ma}}}^* Y_{{{lb},{mb}}}", abs(value))
                )
    return DensityTable(
        operator_id, particle, m, tuple(entries), tuple(monopole), tuple(vanishing)
    )


def _exact_fraction(coeff: complex, ratio_l: Fraction, ratio_r: Fraction) -> Fraction:
    """Recover the exact rational value of a same-harmonic pair coefficient.

    For i == j pairs the prefactor magnitudes are equal, so the product is
    +-ratio_sq (or +-i * ratio_sq, never the case for the surviving rows);
    the sign comes from the computed complex value.
    """
    if abs(coeff.imag) > 1e-12:
        raise ValueError(f"surviving density coefficient not real: {coeff}")
    magnitude = ratio_l if ratio_l == ratio_r else None
    if magnitude is None:
        raise ValueError("same-harmonic pair with mismatched prefactor ratios")
    return magnitude if coeff.real > 0 else -magnitude


def density_tables(particle: str) -> dict[str, dict[str, DensityTable]]:
    """The four named rows (energy, spin_z, charge, magnetization_z) at m = +-1/2."""
    out: dict[str, dict[str, DensityTable]] = {}
    for name, op_id in NAMED_ROWS.items():
        out[name] = {
            "+1/2": angular_reduce(op_id, particle, HALF),
            "-1/2": angular_reduce(op_id, particle, -HALF),
        }
    return out


# -- invariants ---------------------------------------------------------------------


def invariants_I1_I2(
    first: SolutionFamily, second: SolutionFamily
):
    """Exact radial series of the two elementary invariant densities.

    With u = (1, 0, 0, 0), the combinations 2*pi*(u.psi*gamma_mu psi -+
    psi*gamma5 psi) collapse pointwise to G~g~ and F~f~: the l=1 harmonic
    fractions satisfy (1/3)|Y10|^2 + (2/3)|Y11|^2 = Y00^2 identically, so the
    angular content cancels exactly.
    """
    if first.kind != FIRST or second.kind != SECOND:
        raise ValueError("invariants need (first-family, second-family)")
    from .terms import LogPolySeries

    n = min(first.order, second.order)
    i1 = LogPolySeries()
    for i, gp in enumerate(first.G_parts):
        for j, sg in enumerate(second.G_parts):
            if i + j <= n:
                i1 = i1 + gp * sg
    i2 = LogPolySeries()
    for i, fp in enumerate(first.F_parts):
        for j, sf in enumerate(second.F_parts):
            if i + j <= n:
                i2 = i2 + fp * sf
    return i1, i2
