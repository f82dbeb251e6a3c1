"""Seeded random instances for property checks and the verify command."""

from __future__ import annotations

import random
from fractions import Fraction

from .blockdiag import Feedback, Leaf, Pickoff, Series, Summation
from .laplace import COS, NONE, SIN, Atom, Signal
from .odetf import LinODE
from .ratfunc import Poly, RatFunc


def rational(rng: random.Random, bound=5, max_den=4, nonzero=False) -> Fraction:
    while True:
        den = rng.randint(1, max_den)
        q = Fraction(rng.randint(-bound * den, bound * den), den)
        if q or not nonzero:
            return q


def poly(rng: random.Random, degree: int, bound=5, max_den=4) -> Poly:
    cs = [rational(rng, bound, max_den) for _ in range(degree)]
    cs.append(rational(rng, bound, max_den, nonzero=True))
    return Poly(cs)


def ratfunc(rng: random.Random, max_degree=3) -> RatFunc:
    return RatFunc(poly(rng, rng.randint(0, max_degree)),
                   poly(rng, rng.randint(0, max_degree)))


def block_tree(rng: random.Random, depth=4, max_degree=3, max_leaves=6,
               pickoff=False):
    """Random BlockExpr of the given maximum depth.

    ``max_leaves`` caps the total size so exact reduction stays cheap.
    Pickoff nodes only appear as children of a summation, the one place
    where their outputs are consumed.
    """
    budget = [max_leaves]

    def leaf():
        budget[0] -= 1
        return Leaf(ratfunc(rng, max_degree))

    def node(d, in_sum=False):
        if d <= 1 or budget[0] <= 1 or rng.random() < 0.3:
            return leaf()
        kinds = ["ser", "summ", "fb"] + (["pick"] if pickoff and in_sum else [])
        kind = rng.choice(kinds)
        if kind == "fb":
            return Feedback(node(d - 1), node(d - 1))
        if kind == "pick":
            alpha = node(d - 1)
            n = rng.randint(1, 3)
            return Pickoff(alpha, tuple(node(d - 1) for _ in range(n)))
        n = rng.randint(1, 3)
        children = tuple(node(d - 1, in_sum=(kind == "summ")) for _ in range(n))
        return Series(children) if kind == "ser" else Summation(children)

    return node(depth)


def signal(rng: random.Random, max_atoms=3, delays=True) -> Signal:
    atoms = []
    for _ in range(rng.randint(1, max_atoms)):
        osc = rng.choice([NONE, NONE, SIN, COS])
        omega = Fraction(rng.randint(1, 8), 2) if osc != NONE else Fraction(0)
        T = Fraction(0)
        if delays and rng.random() < 0.3:
            T = Fraction(rng.randint(1, 4), 4)
        atoms.append(Atom(
            delay=T,
            power=rng.randint(0, 2),
            rate=Fraction(rng.randint(-8, 4), 4),
            osc=osc,
            omega=omega,
            coeff=rational(rng, 3, 4, nonzero=True),
        ))
    g = Signal(tuple(atoms))
    return g if g.atoms else signal(rng, max_atoms, delays)


def stable_ode(rng: random.Random, max_order=4) -> LinODE:
    """Proper ODE whose poles are drawn from the open left half-plane."""
    order = rng.randint(1, max_order)
    den = Poly((1,))
    n = 0
    while n < order:
        re = -Fraction(rng.randint(2, 30), 10)
        if order - n >= 2 and rng.random() < 0.5:
            im = Fraction(rng.randint(1, 30), 10)
            den = den * Poly((re * re + im * im, -2 * re, 1))
            n += 2
        else:
            den = den * Poly((-re, 1))
            n += 1
    num = poly(rng, rng.randint(0, n), bound=3, max_den=1)
    return LinODE(den.coeffs, num.coeffs)
