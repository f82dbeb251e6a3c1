"""Exact polynomials and rational functions in the Laplace variable ``s``.

Coefficients are :class:`fractions.Fraction` and stored in ascending
order (index ``i`` multiplies ``s**i``).  Every composition and
reduction is exact; floating point only enters through :func:`roots` and
the operations that depend on pole locations (:func:`partial_fractions`,
evaluation near a pole).

Root finding works on the exact square-free decomposition of the input
(Yun's algorithm), so multiplicities are exact.  The roots of each
square-free factor are the eigenvalues of its companion matrix
(``numpy.roots``), refined by at most ``POLISH_ITERATIONS`` Newton steps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

from .errors import InputError, PoleError, RootFindingError, ZeroDenominatorError

__all__ = [
    "Poly",
    "RatFunc",
    "PoleTerm",
    "PartialFractions",
    "to_rational",
    "format_rational",
    "poly_gcd",
    "squarefree_decomposition",
    "arith",
    "eval_complex",
    "normalize",
    "roots",
    "root_multiplicities",
    "partial_fractions",
]

ROOT_TOL = 1e-8
POLE_MERGE_TOL = 1e-7
EVAL_TOL = 1e-12
POLISH_ITERATIONS = 50


def to_rational(x) -> Fraction:
    """Coerce ``x`` to an exact Fraction.

    Floats go through their shortest decimal repr, so ``0.1`` becomes
    ``1/10`` rather than the binary expansion of the double.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise InputError(f"non-finite coefficient {x!r}")
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


def format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _horner(coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


class Poly:
    """Univariate polynomial with exact rational coefficients.

    The zero polynomial has no coefficients and degree -1.
    """

    __slots__ = ("coeffs", "_floats")

    def __init__(self, coeffs=()):
        cs = [c if type(c) is Fraction else to_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)
        self._floats = None

    @classmethod
    def constant(cls, c) -> Poly:
        return cls((c,))

    @classmethod
    def monomial(cls, n: int, c=1) -> Poly:
        return cls((0,) * n + (c,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        if not self.coeffs:
            return Fraction(0)
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly((other,)).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(("Poly", self.coeffs))

    @staticmethod
    def _coerce(other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction, float, str)):
            return Poly((other,))
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly(tuple(x + y for x, y in zip(a, b)) + a[len(b):])

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise InputError("negative power of a polynomial")
        result, base = Poly((1,)), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            raise ZeroDenominatorError("polynomial division by zero")
        rem = list(self.coeffs)
        dd = other.degree
        lead = other.leading
        if len(rem) - 1 < dd:
            return Poly(), self
        quot = [Fraction(0)] * (len(rem) - dd)
        for k in range(len(rem) - 1 - dd, -1, -1):
            q = rem[k + dd] / lead
            quot[k] = q
            if q:
                for j, c in enumerate(other.coeffs):
                    rem[k + j] -= q * c
        return Poly(quot), Poly(rem[:dd])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x):
        """Evaluate by Horner's rule.

        Exact for rational ``x``; complex/float/ndarray arguments are
        evaluated in double precision.
        """
        if isinstance(x, (int, Fraction)):
            return _horner(self.coeffs, Fraction(x))
        return _horner(self.float_coeffs(), x)

    def float_coeffs(self) -> tuple:
        if self._floats is None:
            self._floats = tuple(float(c) for c in self.coeffs)
        return self._floats

    def derivative(self) -> Poly:
        return Poly(i * c for i, c in enumerate(self.coeffs) if i)

    def monic(self) -> Poly:
        if self.is_zero():
            return self
        lead = self.leading
        return Poly(c / lead for c in self.coeffs)

    def __repr__(self):
        return f"Poly({[format_rational(c) for c in self.coeffs]})"

    def __str__(self):
        cs = self.coeffs or (Fraction(0),)
        return "poly[" + ", ".join(format_rational(c) for c in cs) + "]"


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor over the rationals."""
    while b:
        a, b = b, (a % b).monic()
    return a.monic() if a else Poly((1,))


def squarefree_decomposition(p: Poly) -> list:
    """Yun's algorithm: ``[(factor, multiplicity), ...]`` with monic,
    pairwise coprime, square-free factors whose product is ``p.monic()``."""
    if p.degree < 1:
        return []
    f = p.monic()
    df = f.derivative()
    a = poly_gcd(f, df)
    b = f // a
    c = df // a
    d = c - b.derivative()
    out = []
    i = 1
    while b.degree > 0:
        a = poly_gcd(b, d)
        b = b // a
        c = d // a
        d = c - b.derivative()
        if a.degree > 0:
            out.append((a, i))
        i += 1
    return out


class RatFunc:
    """Rational function ``num(s) / den(s)``.

    Construction reduces by the exact GCD and makes the denominator monic,
    so two equal transfer functions are structurally equal.  Pass
    ``reduce=False`` to keep a raw quotient (e.g. to inspect degrees before
    cancellation); arithmetic on raw values always yields reduced results.
    """

    __slots__ = ("num", "den", "_reduced")

    def __init__(self, num=0, den=1, *, reduce: bool = True):
        num = num if isinstance(num, Poly) else _as_poly(num)
        den = den if isinstance(den, Poly) else _as_poly(den)
        if den.is_zero():
            raise ZeroDenominatorError("rational function with zero denominator")
        if reduce:
            num, den = _reduce(num, den)
        self.num = num
        self.den = den
        self._reduced = reduce

    @classmethod
    def _coprime(cls, num: Poly, den: Poly) -> RatFunc:
        """Build from coprime ``num``/``den``; only the monic scaling is done."""
        self = cls.__new__(cls)
        if num.is_zero():
            num, den = Poly(), Poly((1,))
        lead = den.leading
        if lead != 1:
            num = Poly(c / lead for c in num.coeffs)
            den = Poly(c / lead for c in den.coeffs)
        self.num, self.den, self._reduced = num, den, True
        return self

    @classmethod
    def from_coeffs(cls, num, den) -> RatFunc:
        return cls(Poly(num), Poly(den))

    @classmethod
    def s(cls) -> RatFunc:
        return cls(Poly((0, 1)))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_normalized(self) -> bool:
        return (self.num, self.den) == _reduce(self.num, self.den)

    def normalize(self) -> RatFunc:
        return RatFunc(self.num, self.den)

    def is_proper(self) -> bool:
        return self.num.degree <= self.den.degree

    def is_strictly_proper(self) -> bool:
        return self.num.degree < self.den.degree

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self == other

    def __hash__(self):
        return hash(("RatFunc", self.num.coeffs, self.den.coeffs))

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if not (self._reduced and other._reduced):
            return RatFunc(self.num * other.den + other.num * self.den,
                           self.den * other.den)
        # Henrici: only gcds of the cofactors are needed for reduced operands
        n1, d1, n2, d2 = self.num, self.den, other.num, other.den
        if d1 == d2:
            return RatFunc(n1 + n2, d1)
        g = poly_gcd(d1, d2)
        if g.degree > 0:
            d1g, d2g = d1 // g, d2 // g
        else:
            d1g, d2g = d1, d2
        t = n1 * d2g + n2 * d1g
        g2 = poly_gcd(t, g) if g.degree > 0 else g
        if g2.degree > 0:
            t, d2 = t // g2, d2 // g2
        return RatFunc._coprime(t, d1g * d2)

    __radd__ = __add__

    def __neg__(self):
        out = RatFunc(-self.num, self.den, reduce=False)
        out._reduced = self._reduced
        return out

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if not (self._reduced and other._reduced):
            return RatFunc(self.num * other.num, self.den * other.den)
        return _cross_multiply(self.num, self.den, other.num, other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            raise ZeroDenominatorError("division by the zero rational function")
        if not (self._reduced and other._reduced):
            return RatFunc(self.num * other.den, self.den * other.num)
        return _cross_multiply(self.num, self.den, other.den, other.num)

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, n: int):
        if n < 0:
            return RatFunc(1) / (self ** -n)
        return RatFunc(self.num ** n, self.den ** n)

    def __call__(self, s0, tol: float = EVAL_TOL):
        return eval_complex(self, s0, tol)

    def zeros(self, tol: float = ROOT_TOL) -> list:
        return roots(self.num, tol) if self.num.degree >= 1 else []

    def poles(self, tol: float = ROOT_TOL) -> list:
        return roots(self.den, tol) if self.den.degree >= 1 else []

    def __repr__(self):
        return f"RatFunc({self.num!r}, {self.den!r})"

    def __str__(self):
        num = self.num.coeffs or (Fraction(0),)
        return ("tf(" + ", ".join(map(format_rational, num)) + "; "
                + ", ".join(map(format_rational, self.den.coeffs)) + ")")


def _as_poly(x) -> Poly:
    if isinstance(x, (list, tuple)):
        return Poly(x)
    return Poly((x,))


def _coerce(x):
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, Poly):
        return RatFunc(x)
    if isinstance(x, (int, Fraction, float)):
        return RatFunc(Poly((x,)))
    return None


def _cross_multiply(n1, d1, n2, d2) -> RatFunc:
    """(n1/d1) * (n2/d2) for coprime pairs, cancelling crosswise."""
    if n1.is_zero() or n2.is_zero():
        return RatFunc(0)
    g1 = poly_gcd(n1, d2)
    g2 = poly_gcd(n2, d1)
    if g1.degree > 0:
        n1, d2 = n1 // g1, d2 // g1
    if g2.degree > 0:
        n2, d1 = n2 // g2, d1 // g2
    return RatFunc._coprime(n1 * n2, d1 * d2)


def _reduce(num: Poly, den: Poly):
    if num.is_zero():
        return Poly(), Poly((1,))
    g = poly_gcd(num, den)
    if g.degree > 0:
        num = num // g
        den = den // g
    lead = den.leading
    if lead != 1:
        num = Poly(c / lead for c in num.coeffs)
        den = Poly(c / lead for c in den.coeffs)
    return num, den


_OPS = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
    "div": lambda a, b: a / b,
}


def arith(a: RatFunc, b: RatFunc, op: str) -> RatFunc:
    try:
        fn = _OPS[op]
    except KeyError:
        raise InputError(f"unknown operation {op!r}") from None
    return fn(a, b)


def normalize(r) -> RatFunc:
    """Canonical form of ``r`` (a RatFunc or a ``(num, den)`` pair)."""
    if isinstance(r, tuple):
        return RatFunc(*r)
    return r.normalize()


def eval_complex(r: RatFunc, s0, tol: float = EVAL_TOL) -> complex:
    """``num(s0)/den(s0)``; raises PoleError when ``|den(s0)|`` is below
    ``tol`` times the magnitude scale ``sum |d_i| |s0|^i``."""
    s0 = complex(s0)
    den = r.den(s0)
    scale = _horner([abs(c) for c in r.den.float_coeffs()], abs(s0))
    if abs(den) <= tol * scale:
        raise PoleError(f"{r} evaluated at its pole s = {s0}")
    return r.num(s0) / den


def _polish(coeffs, z):
    """Newton refinement; returns the better of the start and end point."""
    dcoeffs = [i * c for i, c in enumerate(coeffs)][1:]
    best, best_res = z, abs(_horner(coeffs, z))
    for _ in range(POLISH_ITERATIONS):
        dv = _horner(dcoeffs, z)
        if dv == 0:
            break
        step = _horner(coeffs, z) / dv
        z = z - step
        res = abs(_horner(coeffs, z))
        if res < best_res:
            best, best_res = z, res
        if abs(step) <= 4 * np.finfo(float).eps * max(abs(z), 1.0):
            break
    return best


def _simple_roots(f: Poly, tol: float) -> list:
    if f.degree == 1:
        c0, c1 = f.coeffs
        return [complex(-c0 / c1)]
    cs = f.monic().float_coeffs()
    try:
        approx = np.roots(cs[::-1])
    except np.linalg.LinAlgError as exc:
        raise RootFindingError(f"companion eigenvalues failed for {f}") from exc
    if len(approx) != f.degree:
        raise RootFindingError(f"expected {f.degree} roots of {f}, got {len(approx)}")
    abs_cs = [abs(c) for c in cs]
    out = []
    for z in approx:
        z = _polish(cs, complex(z))
        if abs(_horner(cs, z)) > tol * _horner(abs_cs, abs(z)):
            raise RootFindingError(
                f"root of {f} did not converge within {POLISH_ITERATIONS} iterations")
        out.append(z)
    return out


def _root_key(item):
    z = item[0] if isinstance(item, tuple) else item
    return (round(z.real, 12), round(z.imag, 12))


def root_multiplicities(p: Poly, tol: float = ROOT_TOL) -> list:
    """Distinct roots of ``p`` paired with their exact multiplicities."""
    if p.degree < 1:
        raise InputError("root finding needs a polynomial of degree >= 1")
    out = []
    for factor, mult in squarefree_decomposition(p):
        out.extend((z, mult) for z in _simple_roots(factor, tol))
    return sorted(out, key=_root_key)


def roots(p: Poly, tol: float = ROOT_TOL) -> list:
    """All complex roots of ``p`` repeated by multiplicity.

    Each root ``z`` satisfies ``|f(z)| <= tol * sum |f_i| |z|^i`` on its
    monic square-free factor ``f``.
    """
    return [z for z, m in root_multiplicities(p, tol) for _ in range(m)]


@dataclass(frozen=True)
class PoleTerm:
    pole: complex
    multiplicity: int
    residues: tuple  # residues[j-1] multiplies 1/(s - pole)**j


@dataclass(frozen=True)
class PartialFractions:
    poly_part: Poly
    terms: tuple

    def __call__(self, s0) -> complex:
        s0 = complex(s0)
        total = complex(self.poly_part(s0)) if self.poly_part else 0j
        for term in self.terms:
            d = s0 - term.pole
            for j, res in enumerate(term.residues, start=1):
                total += res / d ** j
        return total


def _cluster(pairs, tol):
    clusters = []
    for z, m in pairs:
        for i, (c, cm) in enumerate(clusters):
            if abs(z - c) <= tol:
                clusters[i] = ((c * cm + z * m) / (cm + m), cm + m)
                break
        else:
            clusters.append((z, m))
    return clusters


def _taylor(coeffs, p, order):
    """First ``order`` Taylor coefficients of the polynomial at ``p``."""
    b = [complex(c) for c in coeffs]
    out = []
    for _ in range(order):
        if not b:
            out.append(0j)
            continue
        # synthetic division by (s - p): remainder is the next coefficient
        acc = 0j
        quot = [0j] * (len(b) - 1)
        for k in range(len(b) - 1, -1, -1):
            acc = acc * p + b[k]
            if k:
                quot[k - 1] = acc
        out.append(acc)
        b = quot
    return out


def _series_mul(a, b, order):
    out = [0j] * order
    for i, x in enumerate(a[:order]):
        for j in range(order - i):
            if j < len(b):
                out[i + j] += x * b[j]
    return out


def _series_div(a, b, order):
    out = [0j] * order
    for k in range(order):
        acc = a[k] if k < len(a) else 0j
        for j in range(1, k + 1):
            if j < len(b):
                acc -= b[j] * out[k - j]
        out[k] = acc / b[0]
    return out


def partial_fractions(r: RatFunc, tol: float = POLE_MERGE_TOL) -> PartialFractions:
    """Decompose ``r`` into a polynomial part plus pole terms.

    Roots within ``tol`` of each other are merged into one multiple pole.
    The residue of ``1/(s-p)**j`` for a pole of multiplicity ``m`` is the
    ``(m-j)``-th Taylor coefficient at ``p`` of ``num / Q`` where ``Q`` is
    the denominator with ``(s-p)**m`` deflated out; ``Q`` is expanded
    directly from the remaining poles.
    """
    if r.den.degree < 1:
        raise InputError("partial fractions need a denominator of degree >= 1")
    poly_part, rem = divmod(r.num, r.den)
    clusters = _cluster(root_multiplicities(r.den), tol)
    lead = float(r.den.leading)
    num = rem.float_coeffs()
    terms = []
    for k, (p, m) in enumerate(clusters):
        ncoef = _taylor(num, p, m)
        qcoef = [complex(lead)] + [0j] * (m - 1)
        for j, (q, mq) in enumerate(clusters):
            if j != k:
                for _ in range(mq):
                    qcoef = _series_mul(qcoef, [p - q, 1 + 0j], m)
        c = _series_div(ncoef, qcoef, m)
        residues = tuple(c[m - j] for j in range(1, m + 1))
        terms.append(PoleTerm(complex(p), m, residues))
    return PartialFractions(poly_part, tuple(terms))
