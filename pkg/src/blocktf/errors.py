"""Exception hierarchy.

The CLI maps these onto exit codes, so every failure the engine can report
derives from :class:`BlockTFError` and belongs to one of two families:
input problems (:class:`InputError`) and mathematical failures
(:class:`MathError`).
"""


class BlockTFError(Exception):
    pass


class InputError(BlockTFError, ValueError):
    """Malformed user input: syntax, arity, bad parameter values."""


class ParseError(InputError):
    """Syntax error in a block-diagram or signal literal.

    ``span`` is a :class:`blocktf.dsl.SourceSpan` (or None when the error
    is not tied to a location).
    """

    def __init__(self, message, span=None):
        self.message = message
        self.span = span
        if span is not None:
            message = f"{span.line}:{span.column}: {message}"
        super().__init__(message)


class MathError(BlockTFError, ArithmeticError):
    pass


class PoleError(MathError):
    """Evaluation at (or numerically indistinguishable from) a pole."""


class RootFindingError(MathError):
    pass


class AlgebraicLoopError(MathError):
    """Feedback loop with 1 - alpha*beta identically zero."""


class PickoffError(MathError):
    """A single transfer function was demanded of a multi-output pickoff."""


class RegionOfConvergenceError(MathError):
    pass


class DegenerateRouthError(MathError):
    pass


class DivergenceError(MathError):
    def __init__(self, message, time=None):
        self.time = time
        super().__init__(message)


class ImproperTransferFunctionError(MathError):
    pass


class UnsupportedInputError(MathError):
    pass


class ZeroDenominatorError(MathError, ZeroDivisionError):
    """Division by the zero polynomial or zero rational function."""
