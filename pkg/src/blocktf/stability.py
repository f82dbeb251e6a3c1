"""Hurwitz stability verdicts: exact Routh array plus numerical poles."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DegenerateRouthError, InputError
from .ratfunc import Poly, RatFunc, root_multiplicities

__all__ = [
    "RouthResult",
    "StabilityVerdict",
    "routh_hurwitz",
    "classify",
    "cross_check",
    "AXIS_TOL",
]

AXIS_TOL = 1e-9

STABLE, MARGINAL, UNSTABLE = "stable", "marginal", "unstable"


@dataclass(frozen=True)
class RouthResult:
    sign_changes: int
    degenerate: bool
    first_column: tuple


def routh_hurwitz(den: Poly) -> RouthResult:
    """Exact Routh array of ``den``.

    A zero in the first column (including a vanishing row) makes the array
    degenerate; no epsilon substitution is attempted, and ``sign_changes``
    is then only the count over the rows built before the zero appeared.
    """
    if den.is_zero():
        raise InputError("Routh array of the zero polynomial")
    if den.degree < 1:
        raise InputError("Routh array needs degree >= 1")
    desc = den.coeffs[::-1]
    width = (len(desc) + 1) // 2
    rows = [list(desc[0::2]), list(desc[1::2])]
    for row in rows:
        row.extend([Fraction(0)] * (width - len(row)))
    degenerate = rows[1][0] == 0
    while not degenerate and len(rows) < den.degree + 1:
        up, prev = rows[-2], rows[-1]
        new = [(prev[0] * up[j + 1] - up[0] * prev[j + 1]) / prev[0]
               for j in range(width - 1)] + [Fraction(0)]
        rows.append(new)
        degenerate = new[0] == 0
    first = tuple(row[0] for row in rows)
    signs = [x > 0 for x in first if x != 0]
    changes = sum(a != b for a, b in zip(signs, signs[1:]))
    return RouthResult(changes, degenerate, first)


@dataclass(frozen=True)
class StabilityVerdict:
    classification: str
    poles: tuple
    method: str  # "routh_exact" | "poles_numeric" | "both"
    routh: RouthResult | None = None

    @property
    def degenerate(self) -> bool:
        return self.routh is not None and self.routh.degenerate

    def to_json(self) -> dict:
        return {
            "classification": self.classification,
            "poles": [[p.real, p.imag] for p in self.poles],
            "method": self.method,
        }


def _from_poles(pairs, tol):
    if any(p.real > tol for p, _ in pairs):
        return UNSTABLE
    on_axis = [m for p, m in pairs if abs(p.real) <= tol]
    if not on_axis:
        return STABLE
    return MARGINAL if all(m == 1 for m in on_axis) else UNSTABLE


def classify(r: RatFunc, tol: float = AXIS_TOL) -> StabilityVerdict:
    """Pole-location verdict for ``r`` after cancellation.

    Poles with ``|Re| <= tol`` count as on the imaginary axis.  Repeated
    on-axis poles are unstable.  When the Routh array is regular and agrees
    with the pole count the method is ``both``; a regular array that
    disagrees with the numerical poles wins (it is exact).
    """
    r = r.normalize()
    if r.den.degree < 1:
        return StabilityVerdict(STABLE, (), "routh_exact")
    pairs = root_multiplicities(r.den)
    poles = tuple(p for p, m in pairs for _ in range(m))
    routh = routh_hurwitz(r.den)
    numeric = _from_poles(pairs, tol)
    if routh.degenerate:
        return StabilityVerdict(numeric, poles, "poles_numeric", routh)
    rhp = sum(m for p, m in pairs if p.real > tol)
    axis = any(abs(p.real) <= tol for p, _ in pairs)
    if rhp == routh.sign_changes and not axis:
        return StabilityVerdict(numeric, poles, "both", routh)
    exact = UNSTABLE if routh.sign_changes else STABLE
    return StabilityVerdict(exact, poles, "routh_exact", routh)


def cross_check(den: Poly, tol: float = AXIS_TOL) -> bool:
    """Routh sign changes == number of numerical roots with ``Re > tol``."""
    routh = routh_hurwitz(den)
    if routh.degenerate:
        raise DegenerateRouthError(f"degenerate Routh array for {den}")
    rhp = sum(m for p, m in root_multiplicities(den) if p.real > tol)
    return rhp == routh.sign_changes
