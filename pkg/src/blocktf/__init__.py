"""Exact transfer-function algebra for block diagrams and linear ODEs."""

from .blockdiag import (Feedback, Leaf, Pickoff, Series, Summation, branch,
                        feedback_truncated, outputs, reduce)
from .dialysis import (ArmsTrunkParams, blk_diag_rep_at, build_arms_trunk_ode,
                       theorem_checks)
from .dsl import parse, parse_ratfunc, parse_signal, print_expr, print_signal
from .errors import (AlgebraicLoopError, BlockTFError, DegenerateRouthError,
                     DivergenceError, InputError, MathError, ParseError,
                     PickoffError, PoleError, RegionOfConvergenceError)
from .laplace import (Signal, exp_order_witness, laplace, lt_exists,
                      numeric_lt)
from .odetf import LinODE, transfer_function
from .ratfunc import Poly, RatFunc, partial_fractions, roots
from .simul import (CompartmentModel, cross_validate, rk4, simulate_dialysis,
                    simulate_ode, time_response)
from .stability import classify, routh_hurwitz

__version__ = "0.1.0"

__all__ = [
    "AlgebraicLoopError", "ArmsTrunkParams", "BlockTFError", "CompartmentModel",
    "DegenerateRouthError", "DivergenceError", "Feedback", "InputError", "Leaf",
    "LinODE", "MathError", "ParseError", "Pickoff", "PickoffError", "PoleError",
    "Poly", "RatFunc", "RegionOfConvergenceError", "Series", "Signal",
    "Summation", "blk_diag_rep_at", "branch", "build_arms_trunk_ode", "classify",
    "cross_validate", "exp_order_witness", "feedback_truncated", "laplace",
    "lt_exists", "numeric_lt", "outputs", "parse", "parse_ratfunc",
    "parse_signal", "partial_fractions", "print_expr", "print_signal", "reduce",
    "rk4", "roots", "routh_hurwitz", "simulate_dialysis", "simulate_ode",
    "theorem_checks", "time_response", "transfer_function",
]
