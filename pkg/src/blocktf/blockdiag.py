"""Block-diagram expressions and their reduction to one transfer function.

Composition rules:

* series      -> product of the member transfer functions
* summation   -> sum of the member transfer functions
* pickoff     -> one output per child, each ``alpha * child``
* feedback    -> ``alpha * sum_k (alpha*beta)**k = alpha / (1 - alpha*beta)``

The feedback junction carries no implicit sign: negative feedback is
written with a negated ``beta`` (e.g. ``Feedback(g, Leaf(-1))`` is the unity
negative loop ``g / (1 + g)``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AlgebraicLoopError, InputError, MathError, PickoffError
from .ratfunc import RatFunc

__all__ = [
    "BlockExpr",
    "Leaf",
    "Series",
    "Summation",
    "Pickoff",
    "Feedback",
    "reduce",
    "outputs",
    "branch",
    "feedback_tf",
    "feedback_truncated",
    "pick_outputs",
]


class BlockExpr:
    """Base class of the expression tree; nodes are immutable dataclasses."""

    __slots__ = ()


@dataclass(frozen=True)
class Leaf(BlockExpr):
    tf: RatFunc

    def __post_init__(self):
        if not isinstance(self.tf, RatFunc):
            object.__setattr__(self, "tf", RatFunc(self.tf))


def _check_children(name, children):
    children = tuple(children)
    if not children:
        raise InputError(f"{name} needs at least one child")
    return children


@dataclass(frozen=True)
class Series(BlockExpr):
    children: tuple

    def __post_init__(self):
        object.__setattr__(self, "children", _check_children("series", self.children))


@dataclass(frozen=True)
class Summation(BlockExpr):
    children: tuple

    def __post_init__(self):
        object.__setattr__(self, "children", _check_children("summation", self.children))


@dataclass(frozen=True)
class Pickoff(BlockExpr):
    alpha: BlockExpr
    children: tuple

    def __post_init__(self):
        object.__setattr__(self, "children", _check_children("pickoff", self.children))


@dataclass(frozen=True)
class Feedback(BlockExpr):
    forward: BlockExpr
    back: BlockExpr


def feedback_tf(alpha: RatFunc, beta: RatFunc) -> RatFunc:
    loop = 1 - alpha * beta
    if loop.is_zero():
        raise AlgebraicLoopError("1 - alpha*beta is identically zero")
    return alpha / loop


def pick_outputs(alpha: RatFunc, children) -> list:
    children = list(children)
    if not children:
        raise InputError("pickoff needs at least one child")
    return [alpha * c for c in children]


def outputs(e: BlockExpr) -> list:
    """All output transfer functions of ``e``.

    Only pickoffs have more than one output.  A summation adds every output
    of every child, which is how a pickoff's branches get consumed.
    """
    if isinstance(e, Pickoff):
        alpha = reduce(e.alpha)
        return pick_outputs(alpha, [r for c in e.children for r in outputs(c)])
    if isinstance(e, Summation):
        total = RatFunc(0)
        for c in e.children:
            for r in outputs(c):
                total = total + r
        return [total]
    return [reduce(e)]


def reduce(e: BlockExpr) -> RatFunc:
    if isinstance(e, Leaf):
        return e.tf
    if isinstance(e, Series):
        out = RatFunc(1)
        for c in e.children:
            out = out * reduce(c)
        return out
    if isinstance(e, Summation):
        return outputs(e)[0]
    if isinstance(e, Feedback):
        return feedback_tf(reduce(e.forward), reduce(e.back))
    if isinstance(e, Pickoff):
        raise PickoffError(
            "a pickoff has one output per branch; consume it with a summation "
            "or use pick_outputs")
    raise TypeError(f"not a block expression: {e!r}")


def branch(alpha: RatFunc, beta: RatFunc, n: int) -> RatFunc:
    """The n-th loop traversal ``(alpha*beta)**n``; ``branch(.., 0) == 1``.

    The direct forward path is the leading ``alpha`` factor applied in
    :func:`feedback_tf`, so ``alpha * sum_n branch(n)`` is the closed loop.
    """
    if n < 0:
        raise InputError("branch index must be non-negative")
    return (alpha * beta) ** n


def feedback_truncated(alpha: RatFunc, beta: RatFunc, N: int, s0) -> complex:
    """Partial sum ``alpha(s0) * sum_{k=0}^{N} (alpha(s0) beta(s0))**k``."""
    a = alpha(s0)
    loop = a * beta(s0)
    if not abs(loop) < 1:
        raise MathError(f"|alpha*beta(s0)| = {abs(loop)} >= 1: branch series diverges")
    k = np.arange(N + 1)
    return complex(a * np.sum(loop ** k))
