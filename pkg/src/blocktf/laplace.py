"""Closed signal catalog, its exact Laplace transform, and a quadrature oracle.

A :class:`Signal` is a finite sum of atoms

    c * (t-T)**n * exp(a*(t-T)) * osc(w*(t-T)) * step(t-T)

with ``osc`` one of ``1``, ``sin``, ``cos``.  The catalog is closed under
addition, products (oscillatory products expand by the product-to-sum
identities), time delay and differentiation of delay-free signals, and its
transform is always a sum of ``exp(-s*T) * R(s)`` with ``R`` rational.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from .errors import InputError, RegionOfConvergenceError
from .ratfunc import Poly, RatFunc, format_rational, to_rational

__all__ = [
    "Atom",
    "Signal",
    "SDomainExpr",
    "ExpOrderWitness",
    "step",
    "constant",
    "exp",
    "tpow",
    "sin",
    "cos",
    "delay",
    "laplace",
    "exp_order_witness",
    "lt_exists",
    "numeric_lt",
    "tail_bound",
    "ORDER_MARGIN",
    "DEFAULT_STEPS",
]

NONE, SIN, COS = "none", "sin", "cos"

# any rate strictly above the true exponential type is a valid witness
ORDER_MARGIN = 1
DEFAULT_STEPS = 4000
DEFAULT_QUAD_TOL = 1e-10


@dataclass(frozen=True, order=True)
class Atom:
    delay: Fraction = Fraction(0)
    power: int = 0
    rate: Fraction = Fraction(0)
    osc: str = NONE
    omega: Fraction = Fraction(0)
    coeff: Fraction = field(default=Fraction(1), compare=False)

    @property
    def key(self):
        return (self.delay, self.power, self.rate, self.osc, self.omega)

    def canonical(self):
        """Return an equivalent atom in canonical form, or None if zero."""
        osc, omega, coeff = self.osc, self.omega, self.coeff
        if osc == NONE:
            omega = Fraction(0)
        elif omega == 0:
            if osc == SIN:
                return None
            osc = NONE
        elif omega < 0:
            omega = -omega
            if osc == SIN:
                coeff = -coeff
        if coeff == 0:
            return None
        return replace(self, osc=osc, omega=omega, coeff=coeff)

    def evaluate(self, t):
        u = np.asarray(t, dtype=float) - float(self.delay)
        uc = np.maximum(u, 0.0)
        val = float(self.coeff) * uc ** self.power * np.exp(float(self.rate) * uc)
        if self.osc == SIN:
            val = val * np.sin(float(self.omega) * uc)
        elif self.osc == COS:
            val = val * np.cos(float(self.omega) * uc)
        return np.where(u >= 0, val, 0.0)


def _canonical_atoms(atoms):
    merged = {}
    for atom in atoms:
        atom = atom.canonical()
        if atom is None:
            continue
        prev = merged.get(atom.key)
        merged[atom.key] = atom if prev is None else replace(
            prev, coeff=prev.coeff + atom.coeff)
    return tuple(sorted(a for a in merged.values() if a.coeff != 0))


def _osc_product(p: Atom, q: Atom):
    """Expand osc_p(w_p u) * osc_q(w_q u) as [(factor, osc, omega), ...]."""
    if p.osc == NONE:
        return [(Fraction(1), q.osc, q.omega)]
    if q.osc == NONE:
        return [(Fraction(1), p.osc, p.omega)]
    half = Fraction(1, 2)
    plus, minus = p.omega + q.omega, p.omega - q.omega
    if p.osc == COS and q.osc == COS:
        return [(half, COS, minus), (half, COS, plus)]
    if p.osc == SIN and q.osc == SIN:
        return [(half, COS, minus), (-half, COS, plus)]
    if p.osc == SIN:  # sin a * cos b
        return [(half, SIN, plus), (half, SIN, minus)]
    return [(half, SIN, plus), (-half, SIN, minus)]  # cos a * sin b


def _is_unit_step(atom: Atom) -> bool:
    return (atom.delay == 0 and atom.power == 0 and atom.rate == 0
            and atom.osc == NONE)


def _atom_product(p: Atom, q: Atom):
    if p.delay != q.delay:
        # step(t) is the identity on t >= 0 regardless of the other delay
        if _is_unit_step(p):
            return [replace(q, coeff=q.coeff * p.coeff)]
        if _is_unit_step(q):
            return [replace(p, coeff=p.coeff * q.coeff)]
        raise InputError("product of atoms with different delays is outside the catalog")
    return [Atom(p.delay, p.power + q.power, p.rate + q.rate, osc, omega,
                 p.coeff * q.coeff * k)
            for k, osc, omega in _osc_product(p, q)]


@dataclass(frozen=True)
class Signal:
    atoms: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "atoms", _canonical_atoms(self.atoms))

    def __add__(self, other):
        if not isinstance(other, Signal):
            return NotImplemented
        return Signal(self.atoms + other.atoms)

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        if not isinstance(other, Signal):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Signal):
            return Signal(tuple(a for p in self.atoms for q in other.atoms
                                for a in _atom_product(p, q)))
        try:
            c = to_rational(other)
        except TypeError:
            return NotImplemented
        return Signal(tuple(replace(a, coeff=a.coeff * c) for a in self.atoms))

    __rmul__ = __mul__

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for atom in self.atoms:
            out = out + atom.evaluate(t)
        return out

    @property
    def delays(self):
        return sorted({a.delay for a in self.atoms})

    def is_delay_free(self) -> bool:
        return all(a.delay == 0 for a in self.atoms)

    def initial_value(self) -> Fraction:
        """Right limit g(0+)."""
        return sum((a.coeff for a in self.atoms
                    if a.delay == 0 and a.power == 0 and a.osc != SIN),
                   Fraction(0))

    def derivative(self) -> Signal:
        """Classical derivative on t > 0 (delay-free signals only)."""
        if not self.is_delay_free():
            raise InputError("symbolic derivative needs a delay-free signal")
        out = []
        for a in self.atoms:
            if a.power:
                out.append(replace(a, power=a.power - 1, coeff=a.coeff * a.power))
            if a.rate:
                out.append(replace(a, coeff=a.coeff * a.rate))
            if a.osc == SIN:
                out.append(replace(a, osc=COS, coeff=a.coeff * a.omega))
            elif a.osc == COS:
                out.append(replace(a, osc=SIN, coeff=-a.coeff * a.omega))
        return Signal(tuple(out))

    def __str__(self):
        from .dsl import print_signal
        return print_signal(self)


def constant(c) -> Signal:
    return Signal((Atom(coeff=to_rational(c)),))


def step() -> Signal:
    return constant(1)


def exp(a) -> Signal:
    return Signal((Atom(rate=to_rational(a)),))


def tpow(n: int) -> Signal:
    if n < 0:
        raise InputError("negative power of t is outside the catalog")
    return Signal((Atom(power=int(n)),))


def sin(w) -> Signal:
    return Signal((Atom(osc=SIN, omega=to_rational(w)),))


def cos(w) -> Signal:
    return Signal((Atom(osc=COS, omega=to_rational(w)),))


def delay(T, g: Signal) -> Signal:
    T = to_rational(T)
    if T < 0:
        raise InputError("delay must be non-negative")
    return Signal(tuple(replace(a, delay=a.delay + T) for a in g.atoms))


@dataclass(frozen=True)
class SDomainExpr:
    """``sum_k exp(-s*T_k) * R_k(s)`` with distinct ascending delays."""

    terms: tuple = ()

    def __post_init__(self):
        merged = {}
        for T, r in self.terms:
            T = to_rational(T)
            merged[T] = merged[T] + r if T in merged else r.normalize()
        object.__setattr__(self, "terms", tuple(
            (T, merged[T]) for T in sorted(merged) if not merged[T].is_zero()))

    @classmethod
    def rational(cls, r: RatFunc) -> SDomainExpr:
        return cls(((Fraction(0), r),))

    def __add__(self, other):
        if not isinstance(other, SDomainExpr):
            return NotImplemented
        return SDomainExpr(self.terms + other.terms)

    def __mul__(self, other):
        """Scale by a constant or a rational function of s."""
        if isinstance(other, SDomainExpr):
            return NotImplemented
        return SDomainExpr(tuple((T, r * other) for T, r in self.terms))

    __rmul__ = __mul__

    def __call__(self, s0) -> complex:
        s0 = complex(s0)
        return sum((np.exp(-s0 * float(T)) * r(s0) for T, r in self.terms), 0j)

    def as_ratfunc(self) -> RatFunc:
        if any(T != 0 for T, _ in self.terms):
            raise InputError("expression has delay factors")
        return self.terms[0][1] if self.terms else RatFunc(0)

    def __str__(self):
        if not self.terms:
            return str(RatFunc(0))
        parts = []
        for T, r in self.terms:
            parts.append(str(r) if T == 0 else f"exp(-{format_rational(T)}*s)*{r}")
        return " + ".join(parts)


def _atom_transform(a: Atom) -> RatFunc:
    """Delay-free transform of one atom.

    L[t^n e^{at}] = n!/(s-a)^{n+1}; the oscillatory atoms are the real and
    imaginary parts of n!/(s-a-iw)^{n+1} = n!(x+iw)^{n+1}/(x^2+w^2)^{n+1}
    with x = s-a.
    """
    x = Poly((-a.rate, 1))
    scale = a.coeff * math.factorial(a.power)
    if a.osc == NONE:
        return RatFunc(Poly((scale,)), x ** (a.power + 1))
    re, im = Poly((1,)), Poly()
    w = a.omega
    for _ in range(a.power + 1):
        re, im = re * x - im * w, im * x + re * w
    den = (x * x + Poly((w * w,))) ** (a.power + 1)
    return RatFunc((re if a.osc == COS else im) * scale, den)


def laplace(g: Signal) -> SDomainExpr:
    return SDomainExpr(tuple((a.delay, _atom_transform(a)) for a in g.atoms))


@dataclass(frozen=True)
class ExpOrderWitness:
    """``|g(t)| <= M * exp(a*t)`` for all ``t >= 0``, with ``M > 0``."""

    M: float
    a: float

    def bound(self, t):
        return self.M * np.exp(self.a * np.asarray(t, dtype=float))

    def holds_on(self, g: Signal, t, rtol: float = 1e-12) -> bool:
        t = np.asarray(t, dtype=float)
        return bool(np.all(np.abs(g(t)) <= self.bound(t) * (1 + rtol)))


def exp_order_witness(g: Signal) -> ExpOrderWitness:
    """Exponential-order witness built atom by atom.

    An atom's rate gets ``ORDER_MARGIN`` added when it carries polynomial or
    oscillatory factors; ``a`` is the largest such rate.  Each atom then
    contributes ``|c| * sup_u u^n exp((a_i - a) u) * exp(-a T)`` to ``M``.
    """
    if not g.atoms:
        return ExpOrderWitness(1.0, 0.0)

    def padded(atom):
        grows = atom.power > 0 or atom.osc != NONE
        return atom.rate + (ORDER_MARGIN if grows else 0)

    a = max(padded(atom) for atom in g.atoms)
    M = 0.0
    for atom in g.atoms:
        term = abs(float(atom.coeff))
        inexact = False
        if atom.power:
            gap = float(a - atom.rate)
            term *= (atom.power / (gap * math.e)) ** atom.power
            inexact = True
        if atom.delay:
            term *= math.exp(-float(a) * float(atom.delay))
            inexact = True
        if inexact:
            term *= 1 + 1e-9
        M += term
    return ExpOrderWitness(M, float(a))


def lt_exists(g: Signal, s0) -> bool:
    """Catalog signals are smooth between their delay points, so existence
    reduces to ``Re(s0)`` exceeding the witness rate."""
    return complex(s0).real > exp_order_witness(g).a


def tail_bound(w: ExpOrderWitness, sigma: float, horizon: float) -> float:
    """Bound on the neglected integral over ``[horizon, inf)``."""
    gap = sigma - w.a
    return w.M * math.exp(-gap * horizon) / gap


def _simpson(f, lo, hi, panels):
    x = np.linspace(lo, hi, panels + 1)
    y = f(x)
    h = (hi - lo) / panels
    return h / 3 * (y[0] + y[-1] + 4 * y[1:-1:2].sum() + 2 * y[2:-1:2].sum())


def numeric_lt(g: Signal, s0, horizon: float | None = None,
               steps: int = DEFAULT_STEPS, tol: float = DEFAULT_QUAD_TOL) -> complex:
    """Composite Simpson approximation of the transform integral at ``s0``.

    The integral is truncated at ``horizon``; by default the horizon is the
    point where :func:`tail_bound` falls below ``tol``.  Delay points split
    the range so Simpson's rule only sees smooth pieces; ``steps`` panels
    are shared between pieces in proportion to their length.  Quadrature
    error is O(steps**-4) on each piece.
    """
    s0 = complex(s0)
    w = exp_order_witness(g)
    if not s0.real > w.a:
        raise RegionOfConvergenceError(
            f"Re(s0) = {s0.real} is not above the exponential order {w.a}")
    gap = s0.real - w.a
    last_delay = float(max(g.delays, default=0))
    if horizon is None:
        horizon = max(math.log(max(w.M, 1e-300) / (gap * tol)) / gap, 0.0)
        horizon = max(horizon, last_delay + 1.0)
    cuts = sorted({0.0, float(horizon)} | {float(T) for T in g.delays if T < horizon})

    total = 0j
    for lo, hi in zip(cuts, cuts[1:]):
        # atoms switching on at hi must not leak into this piece's endpoint
        piece = Signal(tuple(a for a in g.atoms if float(a.delay) <= lo))
        panels = max(2, int(round(steps * (hi - lo) / horizon)))
        panels += panels % 2
        total += _simpson(lambda t: piece(t) * np.exp(-s0 * t), lo, hi, panels)
    return complex(total)
