"""Constant-coefficient linear ODEs and their transfer functions.

An equation

    a_0 y + a_1 y' + ... + a_n y^(n) = b_0 u + b_1 u' + ... + b_m u^(m)

is stored as the two ascending coefficient sequences.  Under zero initial
conditions every derivative transforms to a power of ``s``, which gives
``H(s) = (sum b_j s^j) / (sum a_i s^i)``.  Those side conditions (the
signals are differentiable, transformable and start at rest) are modeling
assumptions; they hold by construction for catalog inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError, ZeroDenominatorError
from .ratfunc import Poly, RatFunc, to_rational

__all__ = ["LinODE", "transfer_function", "residual"]


@dataclass(frozen=True)
class LinODE:
    out_coeffs: tuple
    in_coeffs: tuple

    def __post_init__(self):
        out = tuple(to_rational(c) for c in self.out_coeffs)
        inp = tuple(to_rational(c) for c in self.in_coeffs)
        if not out:
            raise InputError("an ODE needs at least one output coefficient")
        if out[-1] == 0:
            raise InputError("leading output coefficient must be nonzero")
        if not inp:
            raise InputError("an ODE needs at least one input coefficient")
        object.__setattr__(self, "out_coeffs", out)
        object.__setattr__(self, "in_coeffs", inp)

    @property
    def order(self) -> int:
        return len(self.out_coeffs) - 1

    @property
    def input_order(self) -> int:
        return len(self.in_coeffs) - 1

    def characteristic(self) -> Poly:
        return Poly(self.out_coeffs)

    def input_poly(self) -> Poly:
        return Poly(self.in_coeffs)

    def raw_transfer_function(self) -> RatFunc:
        """H(s) before cancellation; the denominator has degree ``order``."""
        return RatFunc(self.input_poly(), self.characteristic(), reduce=False)


def transfer_function(ode: LinODE) -> RatFunc:
    den = ode.characteristic()
    if den.is_zero():
        raise ZeroDenominatorError("output-side polynomial is identically zero")
    return RatFunc(ode.input_poly(), den)


def residual(ode: LinODE, y_derivs, u_derivs):
    """``sum a_i y^(i) - sum b_j u^(j)`` for one sampled instant.

    Exact when the samples are rationals, float otherwise.
    """
    if len(y_derivs) != len(ode.out_coeffs):
        raise InputError(
            f"expected {len(ode.out_coeffs)} output derivatives, got {len(y_derivs)}")
    if len(u_derivs) != len(ode.in_coeffs):
        raise InputError(
            f"expected {len(ode.in_coeffs)} input derivatives, got {len(u_derivs)}")
    lhs = sum(a * y for a, y in zip(ode.out_coeffs, y_derivs))
    rhs = sum(b * u for b, u in zip(ode.in_coeffs, u_derivs))
    return lhs - rhs
